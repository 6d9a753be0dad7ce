"""Certified theta constants Theta(0, z; r, s) and quotients Phi_(r,s)(z).

    Theta(0, z; r, s) = sum_{x in Z^n} e(1/2 t(x+r) z (x+r) + t(x+r) s),   e(t) = exp(2 pi i t)

The sum runs over shells of increasing sup-norm.  Everything outside the
radius R is bounded by sum_{m>R} N(m) exp(-pi lam (m - 1/2)^2), with lam a
certified lower bound for the least eigenvalue of Im z and N(m) the number of
lattice points of sup-norm m.  Terms inside the box that are provably below a
threshold are skipped and their bound is added to the error.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import mpmath
import numpy as np

from .cm import CMPoint, J_matrix, certified_solve
from .errors import (
    DomainError,
    ParameterError,
    PoleOrPrecisionError,
    PrecisionExhaustedError,
)
from .linalg import matmul, transpose

GUARD_BITS = 32
DEFAULT_PREC_CAP = 1024


def precision_cap() -> int:
    raw = os.environ.get("CYCLOTHETA_PREC_CAP")
    if raw is None:
        return DEFAULT_PREC_CAP
    try:
        cap = int(raw)
    except ValueError as exc:
        raise ParameterError(f"CYCLOTHETA_PREC_CAP must be an integer, got {raw!r}") from exc
    if cap < 64:
        raise ParameterError("CYCLOTHETA_PREC_CAP must be at least 64")
    return cap


# -- characteristics ------------------------------------------------------


def _frac_vec(v) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in v)


@dataclass(frozen=True)
class Characteristic:
    r: tuple[Fraction, ...]
    s: tuple[Fraction, ...]

    def __init__(self, r, s):
        r, s = _frac_vec(r), _frac_vec(s)
        if len(r) != len(s):
            raise ParameterError("r and s must have the same length")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "s", s)

    @property
    def n(self) -> int:
        return len(self.r)

    @classmethod
    def zero(cls, n: int) -> "Characteristic":
        return cls([0] * n, [0] * n)

    def __neg__(self) -> "Characteristic":
        return Characteristic([-x for x in self.r], [-x for x in self.s])

    def shift(self, a: Sequence[int], b: Sequence[int]) -> "Characteristic":
        return Characteristic([x + y for x, y in zip(self.r, a)], [x + y for x, y in zip(self.s, b)])

    def to_json(self) -> dict:
        return {"r": [str(x) for x in self.r], "s": [str(x) for x in self.s]}


def _dot(u, v) -> Fraction:
    return sum((Fraction(x) * Fraction(y) for x, y in zip(u, v)), Fraction(0))


def vanishes_identically(c: Characteristic) -> bool:
    """Theta(0, z; r, s) is the zero function iff r, s in (1/2)Z^n and e(2 r.s) = -1."""
    half = all((2 * x).denominator == 1 for x in c.r + c.s)
    return half and (2 * _dot(c.r, c.s)) % 1 == Fraction(1, 2)


def quasiperiod_multiplier(c: Characteristic, a: Sequence[int], b: Sequence[int]) -> Fraction:
    """t with Phi_(r+a, s+b) = e(t) Phi_(r, s); t = r.b mod 1."""
    if any(Fraction(x).denominator != 1 for x in list(a) + list(b)):
        raise ParameterError("a and b must be integral")
    if len(a) != c.n or len(b) != c.n:
        raise ParameterError("shift vectors have the wrong length")
    return _dot(c.r, b) % 1


def _blocks(gamma, n):
    A = [row[:n] for row in gamma[:n]]
    B = [row[n:] for row in gamma[:n]]
    C = [row[:n] for row in gamma[n:]]
    D = [row[n:] for row in gamma[n:]]
    return A, B, C, D


def is_symplectic(gamma: Sequence[Sequence[int]]) -> bool:
    size = len(gamma)
    if size % 2 or any(len(row) != size for row in gamma):
        return False
    J = J_matrix(size // 2)
    return matmul(matmul(transpose(gamma), J), gamma) == J


def satisfies_diagonal_condition(gamma) -> bool:
    """{tA C} and {tB D} (the diagonals) are even."""
    n = len(gamma) // 2
    A, B, C, D = _blocks(gamma, n)
    ac = matmul(transpose(A), C)
    bd = matmul(transpose(B), D)
    return all(ac[i][i] % 2 == 0 and bd[i][i] % 2 == 0 for i in range(n))


def transform_pair(gamma, c: Characteristic) -> tuple[Characteristic, Fraction]:
    """(c', t) with (r'; s') = t(gamma)(r; s) and Phi_(r,s)(gamma z) = e(t) Phi_(r',s')(z)."""
    gamma = [[int(x) for x in row] for row in gamma]
    if len(gamma) != 2 * c.n:
        raise ParameterError("gamma has the wrong size")
    if not is_symplectic(gamma):
        raise ParameterError("gamma is not symplectic")
    if not satisfies_diagonal_condition(gamma):
        raise ParameterError("gamma violates the diagonal evenness condition")
    v = list(c.r) + list(c.s)
    w = [sum(gamma[k][i] * v[k] for k in range(len(v))) for i in range(len(v))]
    c2 = Characteristic(w[: c.n], w[c.n :])
    t = ((_dot(c.r, c.s) - _dot(c2.r, c2.s)) / 2) % 1
    return c2, t


def siegel_action(gamma, z: CMPoint) -> CMPoint:
    """gamma(z) = (Az + B)(Cz + D)^-1, with a certified error radius."""
    gamma = [[int(x) for x in row] for row in gamma]
    n = z.n
    if len(gamma) != 2 * n or not is_symplectic(gamma):
        raise ParameterError("gamma must be a symplectic matrix of size 2n")
    A, B, C, D = _blocks(gamma, n)
    wp = z.prec + GUARD_BITS
    with mpmath.workprec(wp):
        Z = z.entries
        num = mpmath.matrix(A) * Z + mpmath.matrix(B)
        den = mpmath.matrix(C) * Z + mpmath.matrix(D)
        rowC = max(sum(abs(x) for x in row) for row in C)
        rowA = max(sum(abs(x) for x in row) for row in A)
        norm_z = max(abs(x) for x in Z) if n else 0
        rnd = mpmath.ldexp(n * (max(rowA, rowC) + 1) * (norm_z + 1), -wp + 4)
        # gamma(z) is symmetric, so X = t(Cz+D)^-1 t(Az+B)
        X, bound = certified_solve(den.T, num.T, z.err * rowC + rnd, z.err * rowA + rnd, wp)
    return CMPoint.from_matrix(X, bound, z.prec)


# -- values ---------------------------------------------------------------


@dataclass
class ThetaValue:
    value: mpmath.mpc
    err: mpmath.mpf
    prec: int
    terms: int = 0
    radius: int = 0

    def lower_abs(self):
        return abs(self.value) - self.err

    def err_exponent(self) -> int:
        if self.err <= 0:
            return -(10**9)
        return int(mpmath.ceil(mpmath.log(self.err, 2)))

    def close_to(self, other: "ThetaValue | complex", slack=0) -> bool:
        if isinstance(other, ThetaValue):
            return abs(self.value - other.value) <= self.err + other.err + slack
        return abs(self.value - other) <= self.err + slack

    def to_json(self) -> dict:
        digits = max(15, int(self.prec * 0.30103))
        return {
            "re": mpmath.nstr(mpmath.re(self.value), digits, min_fixed=-math.inf, max_fixed=math.inf),
            "im": mpmath.nstr(mpmath.im(self.value), digits, min_fixed=-math.inf, max_fixed=math.inf),
            "err_exponent": self.err_exponent(),
            "prec": self.prec,
        }


def _shell_count(m: int, n: int) -> int:
    return (2 * m + 1) ** n - (2 * m - 1) ** n if m > 0 else 1


def tail_bound(lam, n: int, R: int):
    """sum_{m > R} N(m) exp(-pi lam (m - 1/2)^2), summed with a geometric remainder."""
    lam = mpmath.mpf(lam)
    total = mpmath.mpf(0)
    m = R + 1
    prev = None
    while True:
        t = _shell_count(m, n) * mpmath.exp(-mpmath.pi * lam * (m - mpmath.mpf(0.5)) ** 2)
        total += t
        if prev is not None and prev > 0:
            q = t / prev
            if q < 0.5 and m > R + 1:
                # ratios decrease from here on, so the rest is geometric
                total += t * q / (1 - q)
                return total
        prev = t
        m += 1


def choose_radius(lam, n: int, prec: int) -> int:
    target = mpmath.ldexp(1, -prec - 20)
    R = max(1, int(math.sqrt((prec + 20) * math.log(2) / (math.pi * float(lam)))))
    while tail_bound(lam, n, R) >= target:
        R += 1
    while R > 1 and tail_bound(lam, n, R - 1) < target:
        R -= 1
    return R


def _reduce_r(c: Characteristic) -> tuple[Fraction, ...]:
    """Shift r into [-1/2, 1/2); Theta is invariant under integral shifts of r."""
    return tuple(x - math.floor(x + Fraction(1, 2)) for x in c.r)


def theta_constant(z: CMPoint, c: Characteristic, prec: int | None = None, radius: int | None = None) -> ThetaValue:
    """Certified value of Theta(0, z; r, s) with absolute error below roughly 2^-prec."""
    n = z.n
    if c.n != n:
        raise ParameterError("characteristic length does not match z")
    if not z.lam_min > 0:
        raise DomainError("Im z is not certified positive definite")
    prec = z.prec if prec is None else prec
    wp = prec + GUARD_BITS
    lam = z.lam_min
    r = _reduce_r(c)
    with mpmath.workprec(wp):
        R = choose_radius(lam, n, prec) if radius is None else radius
        tail = tail_bound(lam, n, R)
        # float prefilter: quadratic form of Im z over the box
        Y = np.array([[float(mpmath.im(z.entries[i, j])) for j in range(n)] for i in range(n)])
        Y = (Y + Y.T) / 2
        rng = np.arange(-R, R + 1, dtype=float)
        grids = np.meshgrid(*([rng] * n), indexing="ij")
        W = np.stack([g.ravel() + float(ri) for g, ri in zip(grids, r)], axis=1)
        qf = np.einsum("ki,ij,kj->k", W, Y, W)
        box_size = W.shape[0]
        # skip when exp(-pi q) is negligible even after float error in q
        q_cut = ((prec + 30) * math.log(2) + math.log(box_size)) / math.pi
        keep = qf * (1 - 1e-9) - 1e-9 <= q_cut
        skipped = box_size - int(keep.sum())
        skip_err = skipped * mpmath.exp(-mpmath.pi * mpmath.mpf(q_cut)) * 2
        X = np.rint(W[keep] - np.array([float(x) for x in r])).astype(np.int64)
        order = sorted(range(len(X)), key=lambda k: (int(np.abs(X[k]).max()), tuple(int(t) for t in X[k])))
        zent = [[z.entries[i, j] for j in range(n)] for i in range(n)]
        rr = [mpmath.mpf(x.numerator) / x.denominator for x in r]
        ss = [mpmath.mpf(x.numerator) / x.denominator for x in c.s]
        ipi = mpmath.mpc(0, 1) * mpmath.pi
        total = mpmath.mpc(0)
        abs_sum = mpmath.mpf(0)
        max_arg = mpmath.mpf(0)
        zerr = mpmath.mpf(0)
        for k in order:
            w = [int(X[k][i]) + rr[i] for i in range(n)]
            quad = mpmath.fsum(zent[i][j] * w[i] * w[j] for i in range(n) for j in range(n))
            lin = mpmath.fsum(w[i] * ss[i] for i in range(n))
            arg = ipi * (quad + 2 * lin)
            term = mpmath.exp(arg)
            total += term
            a = abs(term)
            abs_sum += a
            max_arg = max(max_arg, abs(arg))
            l1 = sum(abs(x) for x in w)
            zerr += a * l1 * l1
        rounding = mpmath.ldexp(abs_sum * (len(order) + 16 + 4 * max_arg), -wp + 2)
        dz = mpmath.pi * z.err
        if dz * 64 * (R + 1) ** 2 * n * n >= 1:
            raise PrecisionExhaustedError("error radius of z too large for this evaluation")
        z_term = 2 * dz * zerr
        err = tail + skip_err + rounding + z_term
    return ThetaValue(total, err, prec, terms=len(order), radius=R)


def phi_quotient(z: CMPoint, c: Characteristic, prec: int | None = None) -> ThetaValue:
    """Phi_(r,s)(z) = Theta(0,z;r,s) / Theta(0,z;0,0) with propagated error."""
    num = theta_constant(z, c, prec)
    den = theta_constant(z, Characteristic.zero(z.n), prec)
    with mpmath.workprec(num.prec + GUARD_BITS):
        gap = abs(den.value) - den.err
        if not gap > 0:
            raise PoleOrPrecisionError("denominator not separated from zero at this precision")
        value = num.value / den.value
        err = (num.err + abs(value) * den.err) / gap + mpmath.ldexp(abs(value) + 1, -num.prec - GUARD_BITS + 2)
    out = ThetaValue(value, err, num.prec, terms=num.terms + den.terms, radius=max(num.radius, den.radius))
    if not err < mpmath.ldexp(max(1, abs(value)), -num.prec // 2):
        raise PoleOrPrecisionError(f"quotient error {mpmath.nstr(err, 5)} too large at {num.prec} bits")
    return out


def phi_quotient_retry(point_at: Callable[[int], CMPoint], c: Characteristic, prec: int,
                       cap: int | None = None) -> ThetaValue:
    """phi_quotient, doubling the precision on failure up to ``cap`` bits."""
    cap = precision_cap() if cap is None else cap
    p = prec
    while True:
        try:
            return phi_quotient(point_at(p), c, p)
        except (PoleOrPrecisionError, PrecisionExhaustedError) as exc:
            if 2 * p > cap:
                raise PoleOrPrecisionError(
                    f"denominator not certified nonzero up to {p} bits (cap {cap}); z may be a zero"
                ) from exc
            p *= 2


# -- random symplectic words (used by the law checks) --------------------


def symplectic_generators(n: int) -> list[list[list[int]]]:
    """J, translations by elementary symmetric matrices, and block-diagonal moves."""
    J = J_matrix(n)
    gens = [J]
    for i in range(n):
        for j in range(i, n):
            S = [[0] * n for _ in range(n)]
            S[i][j] = S[j][i] = 2 if i == j else 1
            g = [[int(a == b) for b in range(2 * n)] for a in range(2 * n)]
            for a in range(n):
                for b in range(n):
                    g[a][n + b] = S[a][b]
            gens.append(g)
    for i in range(n):
        for j in range(n):
            if i != j:
                U = [[int(a == b) for b in range(n)] for a in range(n)]
                U[i][j] = 1
                Uinv = [[int(a == b) for b in range(n)] for a in range(n)]
                Uinv[i][j] = -1
                g = [[0] * (2 * n) for _ in range(2 * n)]
                for a in range(n):
                    for b in range(n):
                        g[a][b] = U[a][b]
                        g[n + a][n + b] = Uinv[b][a]
                gens.append(g)
    return gens


def random_admissible_gamma(n: int, rng, length: int = 4) -> list[list[int]]:
    """A short random word in the generators satisfying the diagonal condition."""
    gens = symplectic_generators(n)
    while True:
        g = [[int(a == b) for b in range(2 * n)] for a in range(2 * n)]
        for _ in range(rng.randrange(1, length + 1)):
            g = matmul(g, gens[rng.randrange(len(gens))])
        if satisfies_diagonal_condition(g):
            return g


def half_integer_characteristics(n: int) -> list[Characteristic]:
    halves = [Fraction(0), Fraction(1, 2)]
    return [Characteristic(v[:n], v[n:]) for v in itertools.product(halves, repeat=2 * n)]
