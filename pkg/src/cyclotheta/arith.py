"""Rational-integer helpers: primality, factorisation, small prime lists.

Factorisation is trial division up to ``TRIAL_LIMIT`` followed by Pollard's
rho with Brent's cycle detection.  Composite cofactors that survive the time
budget are returned separately instead of being silently dropped.
"""

from __future__ import annotations

import math
import random
import time
from functools import lru_cache

import gmpy2

TRIAL_LIMIT = 10**6
RHO_BUDGET_SECONDS = 60.0


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return bool(gmpy2.is_prime(n, 40))


@lru_cache(maxsize=None)
def primes_up_to(limit: int) -> tuple[int, ...]:
    """All primes <= limit (sieve of Eratosthenes)."""
    if limit < 2:
        return ()
    sieve = bytearray([1]) * (limit + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(limit) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, limit + 1, i)))
    return tuple(i for i, flag in enumerate(sieve) if flag)


def odd_primes_up_to(limit: int) -> list[int]:
    return [q for q in primes_up_to(limit) if q != 2]


def pollard_brent(n: int, rng: random.Random, deadline: float | None = None) -> int | None:
    """Return a non-trivial factor of the odd composite ``n``, or None on timeout."""
    if n % 2 == 0:
        return 2
    m = 128
    while True:
        y = rng.randrange(1, n)
        c = rng.randrange(1, n)
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
            if deadline is not None and time.monotonic() > deadline:
                return None
        if g == n:
            # backtrack one step at a time from the last saved position
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def factor(n: int, budget: float = RHO_BUDGET_SECONDS, seed: int = 0) -> tuple[dict[int, int], int]:
    """Factor ``|n|``.

    Returns ``(factors, unfactored)`` where ``factors`` maps primes to
    exponents and ``unfactored`` is the product of composite cofactors the rho
    stage could not split within ``budget`` seconds per cofactor (1 if the
    factorisation is complete).  ``n == 0`` is rejected.
    """
    n = abs(int(n))
    if n == 0:
        raise ValueError("cannot factor 0")
    factors: dict[int, int] = {}
    for q in primes_up_to(TRIAL_LIMIT):
        if q * q > n:
            break
        while n % q == 0:
            factors[q] = factors.get(q, 0) + 1
            n //= q
    if n > 1 and n <= TRIAL_LIMIT**2:
        factors[n] = factors.get(n, 0) + 1
        n = 1
    unfactored = 1
    rng = random.Random(seed)
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if is_prime(m):
            factors[m] = factors.get(m, 0) + 1
            continue
        root = gmpy2.iroot(m, 2)
        if root[1]:
            stack.extend([int(root[0])] * 2)
            continue
        d = pollard_brent(m, rng, time.monotonic() + budget)
        if d is None:
            unfactored *= m
        else:
            stack.extend([d, m // d])
    return dict(sorted(factors.items())), unfactored


def factor_complete(n: int) -> dict[int, int]:
    """Factor ``n`` and fail loudly if any cofactor stays composite."""
    fac, rest = factor(n)
    if rest != 1:
        raise RuntimeError(f"could not fully factor {n}: cofactor {rest}")
    return fac


def multiplicative_order_int(a: int, m: int) -> int:
    """Order of ``a`` in (Z/mZ)^x."""
    if math.gcd(a, m) != 1:
        raise ValueError("a must be prime to m")
    phi = 1
    for q, k in factor_complete(m).items():
        phi *= (q - 1) * q ** (k - 1)
    e = phi
    for q in factor_complete(phi):
        while e % q == 0 and pow(a, e // q, m) == 1:
            e //= q
    return e
