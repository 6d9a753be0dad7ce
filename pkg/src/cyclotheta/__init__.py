"""Exact and certified computations for class fields over cyclotomic fields.

Submodules:

* :mod:`cyclotheta.cyclotomic` -- exact arithmetic in Z[zeta_l] and residues mod m
* :mod:`cyclotheta.rayclass`   -- ray-class linear algebra mod p, cyclotomic units
* :mod:`cyclotheta.cm`         -- CM basis, Riemann form, period matrix, CM point
* :mod:`cyclotheta.theta`      -- certified theta constants and their quotients
* :mod:`cyclotheta.reciprocity` -- exponent matrices A_l(r, s) and conjugate orbits
* :mod:`cyclotheta.scan`       -- resumable det(N_l) != 0 scan
"""

__version__ = "0.1.0"
