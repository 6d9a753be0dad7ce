"""Exponent matrices for the Galois action on theta quotients at z_l.

For integer vectors r_i, s_i (i = 1..n+1) the Artin symbol attached to the
j-th generator acts on Phi_(r_i/p^mu, s_i/p^mu)(z_l) by the root of unity
zeta_p^(a_ij), where

    (a; b) = 2 th(phi^+(zeta^j)) (r_i; s_i),   a_ij = -r_i.s_i + (r_i.b - a.s_i)/2.

The matrix A_l = (a_ij) is independent of p.  ``orbit`` turns this into a
numeric witness: all p^(n+1) predicted conjugates of sum_i Phi_i must be
pairwise distinct.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np

from .arith import factor, is_prime
from .cm import cm_point, regular_rep
from .cyclotomic import CycElt, params, phi_plus
from .errors import (
    ConsistencyError,
    HypothesisNotMetError,
    InconclusiveError,
    ParameterError,
    PoleOrPrecisionError,
    UnsupportedParametersError,
)
from .linalg import Matrix, det_exact
from .rayclass import class_number_plus
from .theta import Characteristic, ThetaValue, phi_quotient, precision_cap

DISTINCT_FACTOR = 4


@dataclass(frozen=True)
class CharFamily:
    l: int
    r: tuple[tuple[int, ...], ...]
    s: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = params(self.l).n
        if len(self.r) != n + 1 or len(self.s) != n + 1:
            raise ParameterError(f"a family for l={self.l} needs {n + 1} pairs (r_i, s_i)")
        if any(len(v) != n for v in self.r + self.s):
            raise ParameterError(f"vectors must have length {n}")

    @property
    def n(self) -> int:
        return params(self.l).n


def default_family(l: int) -> CharFamily:
    """r_i = (1, 0, ..., 0); (s_i)_j = 1 for j < i, else 0."""
    n = params(l).n
    r = tuple(tuple([1] + [0] * (n - 1)) for _ in range(n + 1))
    s = tuple(tuple(int(j < i) for j in range(1, n + 1)) for i in range(1, n + 2))
    return CharFamily(l, r, s)


def _h_phi_plus(l: int, j: int):
    return regular_rep(phi_plus(CycElt.zeta_power(l, j)))


def ab_vectors(l: int, i: int, j: int, fam: CharFamily) -> tuple[list[int], list[int]]:
    """(a_{1,j}; b_{1,j}) = 2 th(phi^+(zeta^j)) (r_i; s_i); both halves must be even."""
    n = params(l).n
    if not (1 <= i <= n + 1 and 1 <= j <= n + 1):
        raise ParameterError(f"i, j must lie in [1, {n + 1}]")
    return _ab(l, j, fam.r[i - 1], fam.s[i - 1])


def _ab(l, j, r, s, h=None):
    n = params(l).n
    h = _h_phi_plus(l, j) if h is None else h
    v = list(r) + list(s)
    # th(.) v: entry k is sum_m h[m][k] v[m]
    out = [2 * sum(h[m][k] * v[m] for m in range(2 * n)) for k in range(2 * n)]
    if any(Fraction(x).denominator != 1 or x % 2 for x in out):
        raise ConsistencyError(f"a/b vector not in 2Z^n for l={l}, j={j}")
    out = [int(x) for x in out]
    return out[:n], out[n:]


def a_matrix(l: int, fam: CharFamily | None = None) -> Matrix:
    fam = default_family(l) if fam is None else fam
    n = params(l).n
    hs = [_h_phi_plus(l, j) for j in range(1, n + 2)]
    rows = []
    for i in range(n + 1):
        r, s = fam.r[i], fam.s[i]
        row = []
        for j in range(n + 1):
            a, b = _ab(l, j + 1, r, s, hs[j])
            val = -sum(x * y for x, y in zip(r, s)) + Fraction(
                sum(x * y for x, y in zip(r, b)) - sum(x * y for x, y in zip(a, s)), 2
            )
            if val.denominator != 1:
                raise ConsistencyError("a_ij is not an integer")
            row.append(int(val))
        rows.append(row)
    return rows


def zeta_row(l: int) -> list[int]:
    """Multiplier exponents of the adjoined root of unity (defined for l = 5 only)."""
    if l != 5:
        raise UnsupportedParametersError("the root-of-unity augmentation is defined for l = 5 only")
    return [-2, -2, -2]


def augmented_matrix_5() -> Matrix:
    A = a_matrix(5)
    return [zeta_row(5), A[0], A[2]]


@dataclass
class AMatrixReport:
    l: int
    matrix: Matrix
    det: int
    factors: dict[int, int] | None = None
    unfactored: int = 1

    def to_json(self) -> dict:
        out = {"l": self.l, "matrix": self.matrix, "det": str(self.det)}
        if self.factors is not None:
            out["factors"] = [[str(q), e] for q, e in sorted(self.factors.items())]
            out["unfactored"] = str(self.unfactored)
        return out


def amatrix_report(l: int, with_factors: bool = False, budget: float = 60.0) -> AMatrixReport:
    A = a_matrix(l)
    d = det_exact(A)
    rep = AMatrixReport(l, A, d)
    if with_factors:
        if d == 0:
            rep.factors, rep.unfactored = {}, 0
        else:
            rep.factors, rep.unfactored = factor(d, budget=budget)
    return rep


def prime_factor_set(l: int) -> set[int]:
    d = det_exact(a_matrix(l))
    if d == 0:
        return {0}
    fac, rest = factor(d)
    if rest != 1:
        raise ConsistencyError(f"det A_{l} not fully factored (cofactor {rest})")
    return set(fac)


# -- designated sub-systems ----------------------------------------------


@dataclass(frozen=True)
class GeneratorSystem:
    """Which Phi_i enter the generator sum, which Artin generators act, and how."""

    l: int
    p: int
    rows: tuple[int, ...]          # 1-based family indices of the Phi_i in the sum
    cols: tuple[int, ...]          # 1-based Artin generator indices
    matrix: tuple[tuple[int, ...], ...]
    with_root_of_unity: bool = False

    @property
    def rank(self) -> int:
        return len(self.cols)


def _sub(A, rows, cols):
    return tuple(tuple(A[i - 1][j - 1] for j in cols) for i in rows)


def generator_system(l: int, p: int) -> GeneratorSystem:
    n = params(l).n
    if l == 5:
        return GeneratorSystem(5, p, (1, 3), (1, 2, 3), tuple(map(tuple, augmented_matrix_5())), True)
    A = a_matrix(l)
    if (l, p) in _SUBMATRIX_CASES:
        rows, cols = _SUBMATRIX_CASES[(l, p)]
        return GeneratorSystem(l, p, rows, cols, _sub(A, rows, cols))
    full = tuple(range(1, n + 2))
    return GeneratorSystem(l, p, full, full, tuple(map(tuple, A)))


# (l, p) -> (rows, columns) of A_l: drop the last Phi and the first Artin generator
_SUBMATRIX_CASES = {(11, 3): ((1, 2, 3, 4, 5), (2, 3, 4, 5, 6)), (13, 5): ((1, 2, 3, 4, 5, 6), (2, 3, 4, 5, 6, 7))}


@dataclass
class SubmatrixCheck:
    l: int
    p: int
    matrix: Matrix
    det: int
    coprime: bool

    def to_json(self) -> dict:
        return {"l": self.l, "p": self.p, "matrix": self.matrix, "det": str(self.det), "coprime_to_p": self.coprime}


def submatrix_checks(l: int, p: int) -> SubmatrixCheck:
    """Exact determinant of the designated square system for (l, p) and its coprimality to p."""
    designated = (l, p) in _SUBMATRIX_CASES or (l in (5, 7) and p != l and p > 2 and is_prime(p))
    if not designated:
        raise ParameterError(f"no designated sub-matrix for (l, p) = ({l}, {p})")
    sysm = generator_system(l, p)
    M = [list(row) for row in sysm.matrix]
    d = det_exact(M)
    return SubmatrixCheck(l, p, M, d, d % p != 0)


# -- orbit ----------------------------------------------------------------


@dataclass
class OrbitReport:
    l: int
    p: int
    mu: int
    alpha: int
    prec: int
    values: list[ThetaValue]
    conjugates: list[complex]
    min_distance: float
    err_radius: float
    distinct: bool
    notes: list[str] = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.conjugates)

    def to_json(self) -> dict:
        return {
            "l": self.l,
            "p": self.p,
            "mu": self.mu,
            "alpha": self.alpha,
            "prec": self.prec,
            "values": [v.to_json() for v in self.values],
            "conjugate_count": self.count,
            "min_distance": mpmath.nstr(self.min_distance, 15),
            "err_radius_exponent": int(mpmath.ceil(mpmath.log(self.err_radius, 2))) if self.err_radius > 0 else None,
            "distinct": self.distinct,
            "notes": self.notes,
        }


def _check_orbit_hypotheses(l: int, p: int, sysm: GeneratorSystem):
    n = params(l).n
    if p < 3 or not is_prime(p):
        raise HypothesisNotMetError("p must be an odd prime")
    hplus = class_number_plus(l)
    d = det_exact([list(r) for r in sysm.matrix])
    if (l * hplus * n * d) % p == 0:
        raise HypothesisNotMetError(f"p={p} divides l * h^+ * n * det = {l * hplus * n * d}")


def _power_value(v: ThetaValue, k: int) -> ThetaValue:
    if k == 1:
        return v
    with mpmath.workprec(v.prec + 32):
        value = v.value**k
        err = k * (abs(v.value) + v.err) ** (k - 1) * v.err + mpmath.ldexp(abs(value) + 1, -v.prec - 30)
    return ThetaValue(value, err, v.prec, v.terms, v.radius)


def orbit_values(l: int, p: int, mu: int, alpha: int, prec: int, fam: CharFamily | None = None):
    fam = default_family(l) if fam is None else fam
    sysm = generator_system(l, p)
    z = cm_point(l, prec)
    q = p**mu
    vals = []
    for i in sysm.rows:
        c = Characteristic([Fraction(x, q) for x in fam.r[i - 1]], [Fraction(x, q) for x in fam.s[i - 1]])
        v = phi_quotient(z, c, prec)
        if not v.lower_abs() > 0:
            raise PoleOrPrecisionError(f"Phi_{i} not separated from zero")
        vals.append(_power_value(v, p**alpha))
    return sysm, vals


def conjugates(sysm: GeneratorSystem, p: int, values, mu: int = 1, alpha: int = 0) -> list:
    """S_c = sum_i e((A c)_i / p) v_i for all c in (Z/p)^rank, in lexicographic order of c.

    With the root of unity adjoined, the first matrix row acts on zeta_{p^(2mu-alpha)}.
    """
    A = [list(r) for r in sysm.matrix]
    out = []
    offset = 1 if sysm.with_root_of_unity else 0
    root = mpmath.expjpi(mpmath.mpf(2) / p ** (2 * mu - alpha)) if offset else None
    units = [mpmath.expjpi(mpmath.mpf(2 * k) / p) for k in range(p)]
    for c in itertools.product(range(p), repeat=sysm.rank):
        ex = [sum(A[i][j] * c[j] for j in range(sysm.rank)) % p for i in range(len(A))]
        s = mpmath.mpc(0)
        if offset:
            s += units[ex[0]] * root
        for k, v in enumerate(values):
            s += units[ex[k + offset]] * v
        out.append(s)
    return out


def min_pairwise_distance(points) -> float:
    arr = np.array([complex(x) for x in points])
    best = np.inf
    for k in range(len(arr) - 1):
        d = np.abs(arr[k + 1 :] - arr[k])
        best = min(best, float(d.min()))
    return best


def _close_pairs_exact(points, threshold) -> list[tuple[int, int]]:
    arr = np.array([complex(x) for x in points])
    bad = []
    for k in range(len(arr) - 1):
        d = np.abs(arr[k + 1 :] - arr[k])
        for off in np.flatnonzero(d <= threshold * 4 + 1e-6):
            m = k + 1 + int(off)
            if not abs(points[k] - points[m]) > threshold:
                bad.append((k, m))
    return bad


def orbit(l: int, p: int, mu: int = 1, alpha: int = 0, prec: int = 192, cap: int | None = None,
          fam: CharFamily | None = None) -> OrbitReport:
    """Numeric witness that sum_i Phi_i^(p^alpha) has p^rank distinct predicted conjugates."""
    if mu < 1 or not 0 <= alpha <= mu - 1:
        raise ParameterError("need mu >= 1 and 0 <= alpha <= mu - 1")
    sysm = generator_system(l, p)
    _check_orbit_hypotheses(l, p, sysm)
    cap = precision_cap() if cap is None else cap
    P = prec
    notes = []
    while True:
        try:
            sysm, vals = orbit_values(l, p, mu, alpha, P, fam)
        except PoleOrPrecisionError as exc:
            notes.append(f"{P} bits: {exc}")
            if 2 * P > cap:
                raise
            P *= 2
            continue
        with mpmath.workprec(P + 32):
            conj = conjugates(sysm, p, [v.value for v in vals], mu, alpha)
            radius = sum(v.err for v in vals) + mpmath.ldexp(len(vals) + 2, -P)
        threshold = DISTINCT_FACTOR * 2 * radius
        bad = _close_pairs_exact(conj, threshold)
        dmin = min_pairwise_distance(conj)
        if not bad:
            return OrbitReport(l, p, mu, alpha, P, vals, [complex(x) for x in conj], dmin, float(radius), True, notes)
        notes.append(f"{P} bits: {len(bad)} pairs within tolerance")
        if 2 * P > cap:
            raise InconclusiveError(f"{len(bad)} conjugate pairs not separated up to {P} bits")
        P *= 2
