"""CM data attached to (Q(zeta_l); phi_1, ..., phi_n) with zeta^phi_i = zeta^i.

Exact side: the Z-basis e_1..e_2n of Z[zeta], rho = (zeta - zeta^-1)/l, the
Riemann form E(v(a), v(b)) = Tr(rho a conj(b)) and the regular representation
h(alpha).  Numeric side: the period matrix Omega and the CM point
z_l = Omega_2^-1 Omega_1, carried with a certified per-entry error radius.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np

from .cyclotomic import CycElt, params, trace
from .errors import ConsistencyError, DomainError, ParameterError, PrecisionExhaustedError
from .linalg import det_bareiss, matmul, transpose

GUARD_BITS = 32


# -- exact data -----------------------------------------------------------


@lru_cache(maxsize=None)
def cm_basis(l: int) -> tuple[CycElt, ...]:
    """e_i = zeta^(2i) for i <= n, e_i = sum_{j <= i-n} zeta^(2j-1) for i > n."""
    n = params(l).n
    basis = []
    for i in range(1, 2 * n + 1):
        if i <= n:
            basis.append(CycElt.zeta_power(l, 2 * i))
        else:
            v = [0] * (l - 1)
            for j in range(1, i - n + 1):
                v[2 * j - 2] += 1
            basis.append(CycElt(l, v))
    return tuple(basis)


def to_cm_coords(a: CycElt) -> list[Fraction]:
    """Coordinates of a in the basis e_1..e_2n (exact, rational)."""
    l = a.l
    n = params(l).n
    x = [Fraction(0)] * (2 * n)
    for i in range(1, n + 1):
        x[i - 1] += a.coeffs[2 * i - 1]
        odd = a.coeffs[2 * i - 2]
        # zeta^(2i-1) = e_{n+i} - e_{n+i-1}
        x[n + i - 1] += odd
        if i > 1:
            x[n + i - 2] -= odd
    return [c / a.denom for c in x]


def J_matrix(n: int) -> list[list[int]]:
    J = [[0] * (2 * n) for _ in range(2 * n)]
    for i in range(n):
        J[i][n + i] = -1
        J[n + i][i] = 1
    return J


def rho(l: int) -> CycElt:
    return (CycElt.zeta_power(l, 1) - CycElt.zeta_power(l, -1)) * Fraction(1, l)


def riemann_form(l: int, a: CycElt, b: CycElt) -> int:
    """E(v(a), v(b)) = Tr_{k/Q}(rho a conj(b)); must be an integer on Z[zeta]."""
    if not (a.is_integral() and b.is_integral()):
        raise ParameterError("Riemann form arguments must be integral")
    value = trace(rho(l) * a * b.conj())
    if value.denominator != 1:
        raise ConsistencyError(f"non-integral Riemann form value {value}")
    return int(value)


def gram_matrix(l: int) -> list[list[int]]:
    e = cm_basis(l)
    return [[riemann_form(l, x, y) for y in e] for x in e]


def regular_rep(a: CycElt) -> list[list[Fraction]]:
    """h(a) with a * e_i = sum_j h_ij e_j."""
    rows = [to_cm_coords(a * e) for e in cm_basis(a.l)]
    if all(x.denominator == 1 for row in rows for x in row):
        return [[int(x) for x in row] for row in rows]
    return rows


def check_h_identities(a: CycElt, prec: int = 128) -> dict:
    """Verify h(conj a) = J th(a) J^-1 exactly and Phi(a) Omega = Omega th(a) numerically."""
    l = a.l
    n = params(l).n
    h = regular_rep(a)
    J = J_matrix(n)
    Jinv = [[-x for x in row] for row in J]
    expected = matmul(matmul(J, transpose(h)), Jinv)
    exact_ok = regular_rep(a.conj()) == expected
    if not exact_ok:
        raise ConsistencyError("h(conj a) != J th(a) J^-1")
    with mpmath.workprec(prec + GUARD_BITS):
        omega = period_matrix(l, prec + GUARD_BITS)
        phi = mpmath.diag([a.embed(k) for k in range(1, n + 1)])
        ht = mpmath.matrix([[mpmath.mpf(x.numerator) / x.denominator if isinstance(x, Fraction) else x
                             for x in row] for row in transpose(h)])
        lhs = phi * omega
        rhs = omega * ht
        residual = mpmath.mnorm(lhs - rhs, "inf")
        scale = mpmath.mnorm(omega, "inf")
        tol = mpmath.ldexp(scale, -prec + 20)
    if not residual <= tol:
        raise ConsistencyError(f"Phi(a) Omega != Omega th(a): residual {residual}")
    return {"l": l, "conjugation_identity": exact_ok, "intertwining_residual": residual,
            "tolerance": tol}


# -- numeric data ---------------------------------------------------------


def period_matrix(l: int, wp: int) -> mpmath.matrix:
    """Omega = (v(e_1) ... v(e_2n)) with rows indexed by phi_1..phi_n."""
    n = params(l).n
    e = cm_basis(l)
    with mpmath.workprec(wp):
        omega = mpmath.matrix(n, 2 * n)
        for k in range(1, n + 1):
            for j, x in enumerate(e):
                omega[k - 1, j] = x.embed(k)
    return omega


def _inf_norm(m: mpmath.matrix):
    return mpmath.mnorm(m, "inf")


def certified_solve(M, R, err_M, err_R, wp: int):
    """X ~ M^-1 R with a bound on max |X* - X| for the exact M*, R* within the radii.

    Uses an approximate inverse C and the a-posteriori estimate
    |X* - X| <= |C| (|R - M X| + |dR| + |dM| |X|) / (1 - |I - C M| - |C| |dM|)
    in the infinity norm.
    """
    n = M.rows
    with mpmath.workprec(wp):
        try:
            C = mpmath.inverse(M)
        except ZeroDivisionError as exc:
            raise PrecisionExhaustedError("matrix is numerically singular") from exc
        X = C * R
    with mpmath.workprec(2 * wp):
        G = mpmath.eye(n) - C * M
        res = R - M * X
        c = _inf_norm(C)
        dM = n * mpmath.mpf(err_M)
        dR = R.cols * mpmath.mpf(err_R)
        slop = mpmath.ldexp(n * (_inf_norm(M) * (_inf_norm(X) + c) + _inf_norm(R) + 1), -2 * wp + 8)
        beta = _inf_norm(G) + slop + c * dM
        if beta >= mpmath.mpf(0.5):
            raise PrecisionExhaustedError("matrix too ill-conditioned for the working precision")
        bound = c * (_inf_norm(res) + slop + dR + dM * _inf_norm(X)) / (1 - beta)
    return X, bound


def _positive_definite_int(rows: list[list[int]]) -> bool:
    """All leading principal minors positive (Bareiss pivots, exact)."""
    n = len(rows)
    return all(det_bareiss([r[:k] for r in rows[:k]]) > 0 for k in range(1, n + 1))


CERT_BITS = 64


def certify_lambda_min(Y: mpmath.matrix, err) -> mpmath.mpf:
    """Certified lower bound for the least eigenvalue of a symmetric matrix Y*.

    Y* differs from Y entrywise by at most ``err``.  Y is rounded to a dyadic
    grid, a float estimate L of the least eigenvalue is shrunk slightly, and
    Y - L I is checked positive definite in exact integer arithmetic.  Weyl's
    inequality (|E|_2 <= n max|E_ij|) then absorbs the entry error and the
    rounding to the grid.
    """
    n = Y.rows
    approx = np.array([[float(Y[i, j]) for j in range(n)] for i in range(n)])
    est = float(np.linalg.eigvalsh((approx + approx.T) / 2)[0])
    if est <= 0:
        raise DomainError(f"imaginary part is not positive definite (estimate {est})")
    scale = 2**CERT_BITS
    grid = [[int(mpmath.nint(mpmath.ldexp((Y[i, j] + Y[j, i]) / 2, CERT_BITS))) for j in range(n)]
            for i in range(n)]
    shift = int(est * (1 - 2**-10) * scale)
    while shift > 0:
        shifted = [[grid[i][j] - (shift if i == j else 0) for j in range(n)] for i in range(n)]
        if _positive_definite_int(shifted):
            break
        shift //= 2
    asym = max((abs(Y[i, j] - Y[j, i]) for i in range(n) for j in range(n)), default=0)
    slack = mpmath.mpf(err) + asym / 2 + mpmath.ldexp(1, -CERT_BITS)
    lam = mpmath.mpf(shift) / scale - n * slack
    if lam <= 0:
        raise DomainError("could not certify a positive least eigenvalue")
    return lam


@dataclass
class CMPoint:
    """A point of the Siegel upper half-space with a certified entry error radius."""

    n: int
    entries: mpmath.matrix
    err: mpmath.mpf
    prec: int
    lam_min: mpmath.mpf

    @classmethod
    def from_matrix(cls, z, err=0, prec: int = 128) -> "CMPoint":
        z = mpmath.matrix(z)
        n = z.rows
        if z.cols != n:
            raise ParameterError("z must be square")
        with mpmath.workprec(prec + GUARD_BITS):
            asym = max((abs(z[i, j] - z[j, i]) for i in range(n) for j in range(n)), default=mpmath.mpf(0))
            if asym > 2 * err + mpmath.ldexp(1, -prec):
                raise DomainError("z is not symmetric within its error radius")
            sym = (z + z.T) / 2
            Y = mpmath.matrix([[mpmath.im(sym[i, j]) for j in range(n)] for i in range(n)])
            lam = certify_lambda_min(Y, err)
        return cls(n, sym, mpmath.mpf(err), prec, lam)

    @property
    def real(self):
        return [[mpmath.re(self.entries[i, j]) for j in range(self.n)] for i in range(self.n)]

    @property
    def imag(self):
        return [[mpmath.im(self.entries[i, j]) for j in range(self.n)] for i in range(self.n)]

    def err_exponent(self) -> int:
        return _log2_ceil(self.err)

    def to_json(self) -> dict:
        digits = max(20, int(self.prec * 0.30103))
        return {
            "n": self.n,
            "prec": self.prec,
            "entries": [[{"re": mpmath.nstr(mpmath.re(self.entries[i, j]), digits),
                          "im": mpmath.nstr(mpmath.im(self.entries[i, j]), digits)}
                         for j in range(self.n)] for i in range(self.n)],
            "err_exponent": self.err_exponent(),
            "lambda_min": mpmath.nstr(self.lam_min, 15),
        }


def _log2_ceil(x) -> int:
    x = mpmath.mpf(x)
    if x <= 0:
        return -(10**9)
    return int(mpmath.ceil(mpmath.log(x, 2)))


def cm_point(l: int, prec: int = 128) -> CMPoint:
    """z_l = Omega_2^-1 Omega_1 with a certified error radius."""
    if prec < 64:
        raise ParameterError("precision must be at least 64 bits")
    return _cm_point_cached(l, prec)


@lru_cache(maxsize=32)
def _cm_point_cached(l: int, prec: int) -> CMPoint:
    n = params(l).n
    wp = prec + GUARD_BITS
    with mpmath.workprec(wp):
        omega = period_matrix(l, wp)
        om1 = omega[:, :n]
        om2 = omega[:, n:]
        e = cm_basis(l)
        weight = max(sum(abs(c) for c in x.coeffs) for x in e)
        entry_err = mpmath.ldexp(weight, -wp + 4)
        z, bound = certified_solve(om2, om1, entry_err, entry_err, wp)
    if bound > mpmath.ldexp(1, -prec):
        raise PrecisionExhaustedError(f"z_{l} error {bound} exceeds 2^-{prec}; raise the precision")
    return CMPoint.from_matrix(z, bound, prec)


def omega_regular_rep_check(l: int, a: CycElt, prec: int = 128) -> bool:
    return check_h_identities(a, prec)["conjugation_identity"]


def det_h(a: CycElt) -> Fraction:
    h = regular_rep(a)
    if all(isinstance(x, int) for row in h for x in row):
        return Fraction(det_bareiss(h))
    den = 1
    for row in h:
        for x in row:
            den = den * Fraction(x).denominator
    scaled = [[int(Fraction(x) * den) for x in row] for row in h]
    return Fraction(det_bareiss(scaled), den ** len(h))
