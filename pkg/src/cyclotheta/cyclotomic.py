"""Exact arithmetic in the cyclotomic field k = Q(zeta_l), l an odd prime.

Elements are stored in the basis {zeta, zeta^2, ..., zeta^(l-1)} of Z[zeta]
(1 is represented as -(zeta + ... + zeta^(l-1))) together with a single
positive common denominator.  Internally products are computed in
Z[x]/(x^l - 1) and projected back: a length-l vector (c_0, ..., c_{l-1}) maps
to the canonical coordinates (c_j - c_0)_{j=1..l-1}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import mpmath

from .arith import factor_complete, is_prime
from .errors import NonInvertibleError, ParameterError


@dataclass(frozen=True)
class CycParams:
    l: int

    def __post_init__(self):
        if self.l < 3 or self.l % 2 == 0 or not is_prime(self.l):
            raise ParameterError(f"l must be an odd prime >= 3, got {self.l}")

    @property
    def n(self) -> int:
        return (self.l - 1) // 2

    @property
    def degree(self) -> int:
        return self.l - 1


@lru_cache(maxsize=None)
def params(l: int) -> CycParams:
    return CycParams(l)


def _cyclic(coeffs: Sequence[int]) -> list[int]:
    return [0, *coeffs]


def _canonical(v: Sequence[int]) -> tuple[int, ...]:
    c0 = v[0]
    return tuple(c - c0 for c in v[1:])


def _cyclic_mul(a: Sequence[int], b: Sequence[int], l: int, mod: int | None = None) -> list[int]:
    out = [0] * l
    nz_b = [(j, y) for j, y in enumerate(b) if y]
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in nz_b:
            k = i + j
            if k >= l:
                k -= l
            out[k] += x * y
    if mod is not None:
        out = [c % mod for c in out]
    return out


class CycElt:
    """An element of Q(zeta_l), exact.

    ``coeffs[j-1]`` is the coefficient of zeta^j; ``denom`` is a positive
    integer shared by all coefficients, normalised so that
    gcd(coeffs, denom) == 1.
    """

    __slots__ = ("l", "coeffs", "denom")

    def __init__(self, l: int, coeffs: Iterable[int], denom: int = 1):
        coeffs = tuple(int(c) for c in coeffs)
        if len(coeffs) != l - 1:
            raise ParameterError(f"expected {l - 1} coefficients, got {len(coeffs)}")
        if denom == 0:
            raise ZeroDivisionError("zero denominator")
        if denom < 0:
            coeffs = tuple(-c for c in coeffs)
            denom = -denom
        g = math.gcd(denom, *coeffs)
        if g > 1:
            coeffs = tuple(c // g for c in coeffs)
            denom //= g
        self.l = l
        self.coeffs = coeffs
        self.denom = denom

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, l: int) -> "CycElt":
        return cls(l, [0] * (l - 1))

    @classmethod
    def rational(cls, l: int, q) -> "CycElt":
        q = Fraction(q)
        return cls(l, [-q.numerator] * (l - 1), q.denominator)

    @classmethod
    def one(cls, l: int) -> "CycElt":
        return cls.rational(l, 1)

    @classmethod
    def zeta_power(cls, l: int, j: int) -> "CycElt":
        j %= l
        if j == 0:
            return cls.one(l)
        v = [0] * (l - 1)
        v[j - 1] = 1
        return cls(l, v)

    @classmethod
    def from_cyclic(cls, l: int, v: Sequence[int], denom: int = 1) -> "CycElt":
        """Build from coefficients of 1, zeta, ..., zeta^(l-1) (length l)."""
        if len(v) != l:
            raise ParameterError(f"expected {l} cyclic coefficients")
        return cls(l, _canonical(v), denom)

    @classmethod
    def from_power_basis(cls, l: int, v: Sequence[int], denom: int = 1) -> "CycElt":
        """Build from coordinates in {1, zeta, ..., zeta^(l-2)}."""
        if len(v) != l - 1:
            raise ParameterError(f"expected {l - 1} power-basis coefficients")
        return cls.from_cyclic(l, [*v, 0], denom)

    def to_power_basis(self) -> tuple[Fraction, ...]:
        """Coordinates in {1, zeta, ..., zeta^(l-2)} (uses zeta^(l-1) = -1 - ... - zeta^(l-2))."""
        top = self.coeffs[-1]
        out = [-top] + [c - top for c in self.coeffs[:-1]]
        return tuple(Fraction(c, self.denom) for c in out)

    def cyclic(self) -> list[int]:
        return _cyclic(self.coeffs)

    # -- ring operations ---------------------------------------------
    def _check(self, other: "CycElt") -> None:
        if other.l != self.l:
            raise ParameterError(f"mismatched fields: l={self.l} vs l={other.l}")

    def _coerce(self, other) -> "CycElt":
        if isinstance(other, CycElt):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return CycElt.rational(self.l, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        d = self.denom * other.denom // math.gcd(self.denom, other.denom)
        a, b = d // self.denom, d // other.denom
        return CycElt(self.l, (a * x + b * y for x, y in zip(self.coeffs, other.coeffs)), d)

    __radd__ = __add__

    def __neg__(self):
        return CycElt(self.l, (-c for c in self.coeffs), self.denom)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        prod = _cyclic_mul(self.cyclic(), other.cyclic(), self.l)
        return CycElt(self.l, _canonical(prod), self.denom * other.denom)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ParameterError("negative powers are not supported")
        result = CycElt.one(self.l)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycElt.rational(self.l, other)
        if not isinstance(other, CycElt):
            return NotImplemented
        return self.l == other.l and self.coeffs == other.coeffs and self.denom == other.denom

    def __hash__(self):
        return hash((self.l, self.coeffs, self.denom))

    def __repr__(self):
        terms = [f"{c:+d}*z^{j}" for j, c in enumerate(self.coeffs, 1) if c]
        body = " ".join(terms) if terms else "0"
        return f"CycElt(l={self.l}: {body}" + (f" / {self.denom})" if self.denom != 1 else ")")

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_integral(self) -> bool:
        return self.denom == 1

    def rational_value(self) -> Fraction | None:
        """The rational number this element equals, or None if irrational."""
        c = self.coeffs[0]
        if any(x != c for x in self.coeffs):
            return None
        return Fraction(-c, self.denom)

    # -- Galois structure --------------------------------------------
    def galois(self, i: int) -> "CycElt":
        """Image under the automorphism zeta -> zeta^i."""
        return galois_apply(self, i)

    def conj(self) -> "CycElt":
        return galois_apply(self, self.l - 1)

    def embed(self, k: int = 1, prec: int | None = None) -> mpmath.mpc:
        """Complex value under zeta -> exp(2 pi i k / l)."""
        with mpmath.workprec(prec or mpmath.mp.prec):
            l = self.l
            total = mpmath.mpc(0)
            for j, c in enumerate(self.coeffs, 1):
                if c:
                    total += c * mpmath.expjpi(mpmath.mpf(2 * ((k * j) % l)) / l)
            return total / self.denom

    # -- serialisation -----------------------------------------------
    def to_json(self) -> dict:
        return {"l": self.l, "coeffs": list(self.coeffs), "denom": self.denom}

    @classmethod
    def from_json(cls, data: dict) -> "CycElt":
        return cls(int(data["l"]), data["coeffs"], int(data.get("denom", 1)))


def cyc_mul(a: CycElt, b: CycElt) -> CycElt:
    return a * b


def galois_apply(a: CycElt, i: int) -> CycElt:
    l = a.l
    if i % l == 0:
        raise ParameterError(f"galois index {i} is divisible by l={l}")
    i %= l
    out = [0] * l
    for j, c in enumerate(a.coeffs, 1):
        out[(i * j) % l] = c
    return CycElt(l, out[1:], a.denom)


def trace(a: CycElt) -> Fraction:
    # Tr(zeta^j) = -1 for every j not divisible by l
    return Fraction(-sum(a.coeffs), a.denom)


def norm(a: CycElt) -> Fraction:
    result = CycElt.one(a.l)
    for i in range(1, a.l):
        result = result * galois_apply(a, i)
    value = result.rational_value()
    assert value is not None, "norm must be rational"
    return value


def phi_plus(a: CycElt) -> CycElt:
    """Sum of a^(phi_i^-1) over i = 1..n."""
    l = a.l
    total = CycElt.zero(l)
    for i in range(1, (l - 1) // 2 + 1):
        total = total + galois_apply(a, pow(i, -1, l))
    return total


def phi_star(a: CycElt) -> CycElt:
    """Product of a^(phi_i^-1) over i = 1..n."""
    if a.is_zero():
        raise ParameterError("phi_star is defined on nonzero elements")
    l = a.l
    total = CycElt.one(l)
    for i in range(1, (l - 1) // 2 + 1):
        total = total * galois_apply(a, pow(i, -1, l))
    return total


def cyclotomic_unit(l: int, a: int) -> CycElt:
    """xi_a = zeta^((1-a)/2) (1 - zeta^a) / (1 - zeta), a real unit of Z[zeta].

    The half power is taken as zeta_{2l}^(1-a) with zeta_{2l} = -zeta^((l+1)/2).
    """
    params(l)
    if not (1 < a < l / 2) or math.gcd(a, l) != 1:
        raise ParameterError(f"need 1 < a < l/2 and gcd(a, l) = 1, got a={a}, l={l}")
    geom = [0] * l
    for k in range(a):
        geom[k] = 1
    shift = ((l + 1) // 2 * (1 - a)) % l
    sign = -1 if (1 - a) % 2 else 1
    rotated = [0] * l
    for k, c in enumerate(geom):
        rotated[(k + shift) % l] = sign * c
    return CycElt.from_cyclic(l, rotated)


# -- residues modulo m --------------------------------------------------


class ResidueElt:
    """Class of an integral element of Z[zeta] modulo m Z[zeta]."""

    __slots__ = ("l", "modulus", "coeffs")

    def __init__(self, l: int, modulus: int, coeffs: Iterable[int]):
        if modulus < 1:
            raise ParameterError("modulus must be positive")
        self.l = l
        self.modulus = modulus
        self.coeffs = tuple(int(c) % modulus for c in coeffs)
        if len(self.coeffs) != l - 1:
            raise ParameterError(f"expected {l - 1} coefficients")

    @property
    def params(self) -> CycParams:
        return params(self.l)

    @classmethod
    def one(cls, l: int, m: int) -> "ResidueElt":
        return cls(l, m, [-1] * (l - 1))

    def __mul__(self, other: "ResidueElt") -> "ResidueElt":
        if (other.l, other.modulus) != (self.l, self.modulus):
            raise ParameterError("mismatched residue rings")
        prod = _cyclic_mul(_cyclic(self.coeffs), _cyclic(other.coeffs), self.l, self.modulus)
        return ResidueElt(self.l, self.modulus, _canonical(prod))

    def __pow__(self, e: int) -> "ResidueElt":
        l, m = self.l, self.modulus
        result = [1] + [0] * (l - 1)
        base = _cyclic(self.coeffs)
        while e:
            if e & 1:
                result = _cyclic_mul(result, base, l, m)
            base = _cyclic_mul(base, base, l, m)
            e >>= 1
        return ResidueElt(l, m, _canonical(result))

    def __eq__(self, other):
        if not isinstance(other, ResidueElt):
            return NotImplemented
        return (self.l, self.modulus, self.coeffs) == (other.l, other.modulus, other.coeffs)

    def __hash__(self):
        return hash((self.l, self.modulus, self.coeffs))

    def __repr__(self):
        return f"ResidueElt(l={self.l}, mod {self.modulus}: {list(self.coeffs)})"

    def is_one(self) -> bool:
        m = self.modulus
        return all(c == m - 1 for c in self.coeffs)

    def norm_mod(self) -> int:
        """N_{k/Q} of any lift, reduced mod m."""
        l, m = self.l, self.modulus
        acc = [1] + [0] * (l - 1)
        v = _cyclic(self.coeffs)
        for i in range(1, l):
            img = [0] * l
            for j, c in enumerate(v):
                img[(i * j) % l] = c
            acc = _cyclic_mul(acc, img, l, m)
        can = _canonical(acc)
        return (-can[0]) % m

    def is_unit(self) -> bool:
        return math.gcd(self.norm_mod(), self.modulus) == 1

    def lift(self) -> CycElt:
        return CycElt(self.l, self.coeffs)


def residue_reduce(a: CycElt, m: int) -> ResidueElt:
    if math.gcd(a.denom, m) != 1:
        raise NonInvertibleError(f"denominator {a.denom} is not prime to {m}")
    inv = pow(a.denom, -1, m) if m > 1 else 0
    return ResidueElt(a.l, m, (c * inv for c in a.coeffs))


def unit_group_exponent_bound(l: int, m: int) -> int:
    """A multiple of the exponent of (Z[zeta_l] / m)^x.

    For q^k || m with q != l, residue degree f = ord_l(q):
    the exponent divides (q^f - 1) q^(k-1).  For q = l (totally ramified)
    it divides (l - 1) l^k.
    """
    bound = 1
    for q, k in factor_complete(m).items() if m > 1 else []:
        if q == l:
            part = (l - 1) * l**k
        else:
            f = _order_mod(q, l)
            part = (q**f - 1) * q ** (k - 1)
        bound = bound * part // math.gcd(bound, part)
    return bound


@lru_cache(maxsize=None)
def _order_mod(q: int, l: int) -> int:
    e, x = 1, q % l
    while x != 1:
        x = x * q % l
        e += 1
    return e


@lru_cache(maxsize=256)
def _exponent_factors(l: int, m: int) -> tuple[int, tuple[int, ...]]:
    bound = unit_group_exponent_bound(l, m)
    return bound, tuple(factor_complete(bound)) if bound > 1 else ()


def multiplicative_order(r: ResidueElt) -> int:
    """Least e > 0 with r^e == 1, by stripping primes from the group exponent."""
    if not r.is_unit():
        raise NonInvertibleError(f"{r!r} is not a unit")
    e, primes = _exponent_factors(r.l, r.modulus)
    for q in primes:
        while e % q == 0 and (r ** (e // q)).is_one():
            e //= q
    return e
