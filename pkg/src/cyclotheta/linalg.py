"""Exact integer and mod-p matrix kernels.

Matrices are plain lists of rows of Python ints.  Modular elimination switches
to a vectorised numpy kernel for primes below 2^31 (products then fit in
int64); larger moduli use the pure-Python path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .arith import is_prime
from .errors import ParameterError

Matrix = list[list[int]]

BAREISS_LIMIT = 50
NUMPY_PRIME_LIMIT = 2**31
NUMPY_MIN_SIZE = 24


@dataclass
class FpMatrix:
    p: int
    rows: Matrix

    def __post_init__(self):
        self.rows = [[int(x) % self.p for x in row] for row in self.rows]

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), (len(self.rows[0]) if self.rows else 0)

    def rank(self) -> int:
        return rank_mod_p(self.rows, self.p)


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(a: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*a)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a: Sequence[Sequence], v: Sequence) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def _check_square(a: Sequence[Sequence]) -> int:
    n = len(a)
    if any(len(row) != n for row in a):
        raise ParameterError("matrix must be square")
    return n


def det_bareiss(a: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = _check_square(a)
    if n == 0:
        return 1
    m = [list(map(int, row)) for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        row_k = m[k]
        for i in range(k + 1, n):
            row_i = m[i]
            mik = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (pivot * row_i[j] - mik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * m[n - 1][n - 1]


def _rank_mod_p_py(a: Sequence[Sequence[int]], p: int, want_det: bool) -> tuple[int, int]:
    m = [[int(x) % p for x in row] for row in a]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    rank = 0
    det = 1
    for c in range(cols):
        piv = next((r for r in range(rank, rows) if m[r][c]), None)
        if piv is None:
            det = 0
            continue
        if piv != rank:
            m[rank], m[piv] = m[piv], m[rank]
            det = -det
        det = det * m[rank][c] % p
        inv = pow(m[rank][c], -1, p)
        prow = [x * inv % p for x in m[rank]]
        m[rank] = prow
        for r in range(rows):
            if r != rank and m[r][c]:
                f = m[r][c]
                m[r] = [(x - f * y) % p for x, y in zip(m[r], prow)]
        rank += 1
        if rank == rows:
            break
    if want_det and rank < rows:
        det = 0
    return rank, det % p


def _rank_mod_p_np(a: Sequence[Sequence[int]], p: int, want_det: bool) -> tuple[int, int]:
    m = np.array([[int(x) % p for x in row] for row in a], dtype=np.int64)
    rows, cols = m.shape
    rank = 0
    det = 1
    for c in range(cols):
        nz = np.flatnonzero(m[rank:, c])
        if nz.size == 0:
            det = 0
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            m[[rank, piv]] = m[[piv, rank]]
            det = -det
        pv = int(m[rank, c])
        det = det * pv % p
        inv = pow(pv, -1, p)
        m[rank] = m[rank] * inv % p
        below = m[rank + 1 :, c].copy()
        mask = below != 0
        if mask.any():
            idx = np.flatnonzero(mask) + rank + 1
            m[idx] = (m[idx] - np.outer(below[mask], m[rank])) % p
        rank += 1
        if rank == rows:
            break
    if want_det and rank < rows:
        det = 0
    return rank, det % p


def _eliminate(a, p, want_det):
    if p < 2:
        raise ParameterError("modulus must be a prime")
    size = min(len(a), len(a[0]) if a else 0)
    if p < NUMPY_PRIME_LIMIT and size >= NUMPY_MIN_SIZE:
        return _rank_mod_p_np(a, p, want_det)
    return _rank_mod_p_py(a, p, want_det)


def rank_mod_p(a: Sequence[Sequence[int]], p: int) -> int:
    if not a or not a[0]:
        return 0
    return _eliminate(a, p, False)[0]


def det_mod_p(a: Sequence[Sequence[int]], p: int) -> int:
    n = _check_square(a)
    if n == 0:
        return 1 % p
    return _eliminate(a, p, True)[1]


def hadamard_bound(a: Sequence[Sequence[int]]) -> int:
    """An integer B with |det a| <= B."""
    b = 1
    for row in a:
        b *= math.isqrt(sum(int(x) * int(x) for x in row)) + 1
    return b


def _crt_primes():
    q = NUMPY_PRIME_LIMIT - 1
    while True:
        if is_prime(q):
            yield q
        q -= 2


def det_modular(a: Sequence[Sequence[int]]) -> int:
    """Exact determinant by CRT over word-size primes, up to the Hadamard bound."""
    _check_square(a)
    bound = 2 * hadamard_bound(a) + 1
    modulus, residue = 1, 0
    for q in _crt_primes():
        r = det_mod_p(a, q)
        # combine residue (mod modulus) with r (mod q)
        t = (r - residue) * pow(modulus, -1, q) % q
        residue += modulus * t
        modulus *= q
        if modulus > bound:
            break
    return residue if residue <= modulus // 2 else residue - modulus


def det_exact(a: Sequence[Sequence[int]]) -> int:
    n = _check_square(a)
    if n <= BAREISS_LIMIT:
        return det_bareiss(a)
    return det_modular(a)


def rank_exact(a: Sequence[Sequence[Fraction | int]]) -> int:
    """Rank over Q (fraction arithmetic; small matrices only)."""
    m = [[Fraction(x) for x in row] for row in a]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    rank = 0
    for c in range(cols):
        piv = next((r for r in range(rank, rows) if m[r][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(rows):
            if r != rank and m[r][c] != 0:
                f = m[r][c] / m[rank][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[rank])]
        rank += 1
    return rank


def inverse_unimodular(a: Sequence[Sequence[int]]) -> Matrix:
    """Inverse of an integer matrix with determinant +-1 (exact, via fractions)."""
    n = _check_square(a)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for c in range(n):
        piv = next((r for r in range(c, n) if aug[r][c] != 0), None)
        if piv is None:
            raise ParameterError("matrix is singular")
        aug[c], aug[piv] = aug[piv], aug[c]
        pv = aug[c][c]
        aug[c] = [x / pv for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    out = []
    for row in aug:
        tail = row[n:]
        if any(x.denominator != 1 for x in tail):
            raise ParameterError("matrix is not unimodular")
        out.append([int(x) for x in tail])
    return out


