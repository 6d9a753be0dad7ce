"""Linear algebra of S_mu / S_{mu+1} for k = Q(zeta_l) and the modulus 2 p^mu.

Covers the generators alpha_{mu,i}, the matrices B, N_l and M_l(p), the image
of the unit group in S_1/S_2 (via the cyclotomic units xi_a) and the resulting
predictions for |Gal(K_mu / k_mu)|.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .arith import is_prime
from .cyclotomic import (
    CycElt,
    ResidueElt,
    cyclotomic_unit,
    multiplicative_order,
    params,
    phi_plus,
    residue_reduce,
)
from .errors import ConsistencyError, ParameterError, UnsupportedParametersError
from .linalg import FpMatrix, Matrix, det_exact, rank_mod_p

# h_l^+ = 1 for every l <= 67; larger l needs a user-supplied value.
KNOWN_HPLUS_BOUND = 67
_hplus_overrides: dict[int, int] = {}


def load_hplus_overrides(path: str | Path) -> dict[int, int]:
    """Load a JSON object {"l": h_l^+} and register it."""
    raw = json.loads(Path(path).read_text())
    table = {int(k): int(v) for k, v in raw.items()}
    for l, h in table.items():
        if h < 1:
            raise ParameterError(f"h^+ must be positive (l={l})")
    _hplus_overrides.update(table)
    return table


def class_number_plus(l: int) -> int:
    if l in _hplus_overrides:
        return _hplus_overrides[l]
    if l <= KNOWN_HPLUS_BOUND:
        return 1
    raise UnsupportedParametersError(f"h^+ for l={l} is unknown; supply it with an override file")


@dataclass(frozen=True)
class RayParams:
    l: int
    p: int
    mu: int = 1

    def __post_init__(self):
        params(self.l)
        if self.p < 3 or not is_prime(self.p):
            raise ParameterError(f"p must be an odd prime, got {self.p}")
        if self.p == self.l:
            raise ParameterError("p must differ from l")
        if self.mu < 1:
            raise ParameterError("mu must be positive")

    @property
    def n(self) -> int:
        return (self.l - 1) // 2


def alpha_generator(rp: RayParams, i: int) -> CycElt:
    """alpha_{mu,i}: 1 + 2p^mu zeta^i (i <= n+1), else 1 + 2p^mu(zeta^n + zeta^(n+1) - zeta^i - zeta^-i)."""
    l, n = rp.l, rp.n
    if not 1 <= i <= 2 * n:
        raise ParameterError(f"i must lie in [1, {2 * n}]")
    z = lambda j: CycElt.zeta_power(l, j)  # noqa: E731
    if i <= n + 1:
        inner = z(i)
    else:
        inner = z(n) + z(n + 1) - z(i) - z(-i)
    return 1 + 2 * rp.p**rp.mu * inner


def matrix_B(rp: RayParams) -> Matrix:
    """Rows: coordinates of (alpha_{mu,i} - 1) / (2 p^mu) in {zeta, ..., zeta^(2n)}."""
    scale = 2 * rp.p**rp.mu
    rows = []
    for i in range(1, 2 * rp.n + 1):
        a = alpha_generator(rp, i) - 1
        if a.denom != 1 or any(c % scale for c in a.coeffs):
            raise ConsistencyError("alpha_{mu,i} is not congruent to 1 mod 2p^mu")
        rows.append([c // scale for c in a.coeffs])
    return rows


def matrix_N(l: int) -> Matrix:
    n = params(l).n
    return [[int(1 <= (i * j) % l <= n) for j in range(1, n + 1)] for i in range(1, n + 1)]


def _m_by_rule(l: int) -> Matrix:
    n = params(l).n
    return [[int(1 <= (i * pow(j, -1, l)) % l <= n) for j in range(1, 2 * n + 1)] for i in range(1, n + 2)]


def _m_by_phi_plus(l: int) -> Matrix:
    n = params(l).n
    rows = []
    for i in range(1, n + 2):
        v = phi_plus(CycElt.zeta_power(l, i))
        assert v.denom == 1
        rows.append(list(v.coeffs))
    return rows


def matrix_M(l: int, p: int) -> FpMatrix:
    """M_l(p): coefficient of zeta^j in phi^+(zeta^i), i <= n+1, j <= 2n, over F_p.

    Built from phi^+ and cross-checked against the i * j^-1 membership rule.
    """
    by_phi = _m_by_phi_plus(l)
    if by_phi != _m_by_rule(l):
        raise ConsistencyError(f"two definitions of M_{l} disagree")
    return FpMatrix(p, by_phi)


def det_N(l: int) -> int:
    return det_exact(matrix_N(l))


# -- H_1 / S_2 ------------------------------------------------------------


@dataclass
class UnitImage:
    a: int
    exponent: int
    image: list[int]
    congruent_mod_2p: bool
    congruent_mod_2p2: bool


@dataclass
class H1S2Report:
    l: int
    p: int
    units: list[UnitImage]
    dimension: int
    complete: bool
    mixed_dimension: int | None = None
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "l": self.l,
            "p": self.p,
            "dimension": self.dimension,
            "complete": self.complete,
            "mixed_dimension": self.mixed_dimension,
            "generators": [
                {"a": u.a, "exponent": str(u.exponent), "image": u.image, "one_mod_2p": u.congruent_mod_2p,
                 "one_mod_2p2": u.congruent_mod_2p2}
                for u in self.units
            ],
            "notes": self.notes,
        }


def _image_mod_p(u: ResidueElt, p: int) -> list[int]:
    """Coordinates of (u - 1) / (2p) mod p, for u == 1 mod 2p given mod 2p^2."""
    one = ResidueElt.one(u.l, u.modulus)
    out = []
    for c, d in zip(u.coeffs, one.coeffs):
        diff = (c - d) % u.modulus
        if diff % (2 * p):
            raise ConsistencyError("unit power is not congruent to 1 mod 2p")
        out.append(diff // (2 * p) % p)
    return out


MIXED_SEARCH_LIMIT = 200_000


def h1s2(l: int, p: int, allow_ramified: bool = False) -> H1S2Report:
    """Image of the unit group in S_1/S_2 ~ O_k/pO_k, spanned by cyclotomic units.

    For each 1 < a < l/2, e_a is the order of xi_a mod 2p and the image vector
    is (xi_a^e_a - 1)/(2p) mod p; ``dimension`` is the rank of these single
    powers.  When p divides some e_a, single powers may miss part of the unit
    lattice, so the whole kernel is enumerated as a cross-check
    (``mixed_dimension``); ``complete`` is False if it is larger or unknown.

    ``allow_ramified`` admits p == l, where the computation is still defined
    though the surrounding theory needs p != l.
    """
    cp = params(l)
    if p < 3 or not is_prime(p):
        raise UnsupportedParametersError("p must be an odd prime")
    if p == l and not allow_ramified:
        raise UnsupportedParametersError("p divides 2l")
    m1, m2 = 2 * p, 2 * p * p
    units = []
    for a in range(2, (l + 1) // 2):
        if math.gcd(a, l) != 1:
            continue
        xi = cyclotomic_unit(l, a)
        e = multiplicative_order(residue_reduce(xi, m1))
        u = residue_reduce(xi, m2) ** e
        mod_2p = (residue_reduce(xi, m1) ** e).is_one()
        img = _image_mod_p(u, p)
        units.append(UnitImage(a, e, img, mod_2p, u.is_one()))
    vectors = [u.image for u in units]
    dim = rank_mod_p(vectors, p) if vectors else 0
    report = H1S2Report(l, p, units, dim, complete=True)
    if any(u.exponent % p == 0 for u in units) and len(units) > 1:
        # single powers can miss part of the unit lattice here; cross-check
        mixed = _mixed_dimension(l, p, units)
        report.mixed_dimension = mixed
        if mixed is None:
            report.complete = False
            report.notes.append("p divides a unit order; span of single powers is a lower bound")
        elif mixed > dim:
            report.complete = False
            report.notes.append(f"mixed products of cyclotomic units span dimension {mixed}")
    if dim > cp.n - 1 or (report.mixed_dimension or 0) > cp.n - 1:
        raise ConsistencyError("H_1/S_2 dimension exceeds n - 1")
    return report


def _mixed_dimension(l: int, p: int, units: list[UnitImage]) -> int | None:
    """Exact span of the whole cyclotomic-unit kernel, via its p-primary part.

    Write lcm(e_a) = p^k * m with p not dividing m and eta_a = xi_a^m.  The
    kernel L of c -> prod xi_a^c_a (mod 2p) satisfies m L_eta <= L <= L_eta,
    so its image in S_1/S_2 equals the image of m * L_eta.  L_eta is found by
    enumerating the p-group generated by the eta_a.
    """
    m1, m2 = 2 * p, 2 * p * p
    e = 1
    for u in units:
        e = e * u.exponent // math.gcd(e, u.exponent)
    m = e
    while m % p == 0:
        m //= p
    etas = [residue_reduce(cyclotomic_unit(l, u.a), m2) ** m for u in units]
    orders = [multiplicative_order(ResidueElt(l, m1, x.coeffs)) for x in etas]
    if math.prod(orders) > MIXED_SEARCH_LIMIT:
        return None
    kernel = []
    one2 = ResidueElt.one(l, m2)
    for c in itertools.product(*(range(o) for o in orders)):
        if not any(c):
            continue
        acc = one2
        for x, k in zip(etas, c):
            if k:
                acc = acc * x**k
        if ResidueElt(l, m1, acc.coeffs).is_one():
            kernel.append(_image_mod_p(acc, p))
    for x, o in zip(etas, orders):
        kernel.append(_image_mod_p(x**o, p))
    return rank_mod_p(kernel, p)


# -- predictions --------------------------------------------------------


@dataclass
class GaloisPrediction:
    l: int
    p: int
    rank_M: int
    p_divides_det_N: bool
    det_N: int
    h1s2_dimension: int
    h1s2_complete: bool
    order: int
    ray_class_equality: bool

    def to_json(self) -> dict:
        return {
            "l": self.l,
            "p": self.p,
            "rank_M": self.rank_M,
            "det_N": str(self.det_N),
            "p_divides_det_N": self.p_divides_det_N,
            "h1s2_dimension": self.h1s2_dimension,
            "h1s2_complete": self.h1s2_complete,
            "gal_order": str(self.order),
            "gal_exponent": self.rank_M,
            "K_equals_ray_class_field": self.ray_class_equality,
        }


def galois_predictions(l: int, p: int) -> GaloisPrediction:
    """Predicted |Gal(K_mu/k_mu)| = p^rank(M_l(p)) and whether K_mu = k_{mu+1}."""
    n = params(l).n
    hplus = class_number_plus(l)
    if p < 3 or not is_prime(p) or (l * hplus * n) % p == 0:
        raise UnsupportedParametersError(f"p={p} divides l * h^+ * n = {l * hplus * n}")
    rank = matrix_M(l, p).rank()
    dn = det_N(l)
    rep = h1s2(l, p)
    divides = dn % p == 0
    return GaloisPrediction(
        l=l,
        p=p,
        rank_M=rank,
        p_divides_det_N=divides,
        det_N=dn,
        h1s2_dimension=rep.dimension,
        h1s2_complete=rep.complete,
        order=p**rank,
        ray_class_equality=(rep.dimension == n - 1 and not divides),
    )
