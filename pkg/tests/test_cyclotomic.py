from fractions import Fraction

import mpmath
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from cyclotheta.cyclotomic import (
    CycElt,
    ResidueElt,
    cyc_mul,
    cyclotomic_unit,
    galois_apply,
    multiplicative_order,
    norm,
    params,
    phi_plus,
    phi_star,
    residue_reduce,
    trace,
    unit_group_exponent_bound,
)
from cyclotheta.errors import NonInvertibleError, ParameterError

PRIMES = [3, 5, 7, 11, 13]
x = sympy.symbols("x")


def elements(l, lo=-6, hi=6):
    return st.lists(st.integers(lo, hi), min_size=l - 1, max_size=l - 1).map(lambda c: CycElt(l, c))


@st.composite
def same_field(draw, k=2):
    l = draw(st.sampled_from(PRIMES))
    return [draw(elements(l)) for _ in range(k)]


def to_sympy(a: CycElt):
    return sum(c * x**j for j, c in enumerate(a.coeffs, 1)) / a.denom


def sympy_reduce(expr, l):
    return sympy.rem(sympy.expand(expr), sympy.cyclotomic_poly(l, x), x)


def test_params_validation():
    assert params(7).n == 3 and params(7).degree == 6
    for bad in (2, 9, 1, -7):
        with pytest.raises(ParameterError):
            params(bad)


def test_zeta_times_zeta_inverse_is_one():
    one = CycElt.zeta_power(5, 1) * CycElt.zeta_power(5, 4)
    assert one == CycElt.one(5)
    assert one.coeffs == (-1, -1, -1, -1)


def test_norm_element_l3():
    z = CycElt.zeta_power(3, 1)
    prod = (1 - z) * (1 - z * z)
    assert prod == CycElt.rational(3, 3)
    # numeric oracle at 30 digits
    with mpmath.workdps(30):
        w = mpmath.expjpi(mpmath.mpf(2) / 3)
        assert mpmath.nint(mpmath.re((1 - w) * (1 - w * w))) == 3


@given(same_field(3))
def test_ring_laws(els):
    a, b, c = els
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert a * CycElt.one(a.l) == a
    assert a - a == CycElt.zero(a.l)


@given(same_field(2))
def test_product_matches_polynomial_oracle(els):
    a, b = els
    l = a.l
    got = sympy_reduce(to_sympy(cyc_mul(a, b)), l)
    want = sympy_reduce(to_sympy(a) * to_sympy(b), l)
    assert sympy.expand(got - want) == 0


def test_mismatched_fields_rejected():
    with pytest.raises(ParameterError):
        CycElt.one(5) * CycElt.one(7)


def test_galois_examples():
    assert galois_apply(CycElt.zeta_power(5, 1), 2) == CycElt.zeta_power(5, 2)
    a = CycElt.zeta_power(5, 1) + CycElt.zeta_power(5, 4)
    assert galois_apply(a, 4) == a
    assert galois_apply(CycElt.zeta_power(7, 2), 4) == CycElt.zeta_power(7, 1)
    with pytest.raises(ParameterError):
        galois_apply(a, 5)


@given(st.sampled_from(PRIMES).flatmap(lambda l: st.tuples(elements(l), st.integers(1, l - 1), st.integers(1, l - 1))))
def test_galois_composition(data):
    a, i, j = data
    l = a.l
    assert galois_apply(galois_apply(a, i), j) == galois_apply(a, (i * j) % l)
    assert galois_apply(a, l - 1) == a.conj()


def test_trace_and_norm_examples():
    for l in PRIMES:
        z = CycElt.zeta_power(l, 1)
        assert trace(z) == -1
        assert trace(CycElt.one(l)) == l - 1
        assert norm(1 - z) == l


@given(st.sampled_from(PRIMES).flatmap(elements))
def test_trace_matches_embeddings(a):
    with mpmath.workprec(128):
        s = mpmath.fsum(a.embed(k) for k in range(1, a.l))
    assert abs(s - trace(a)) < mpmath.mpf(2) ** -40


@given(st.sampled_from(PRIMES).flatmap(elements))
def test_norm_matches_embeddings(a):
    with mpmath.workprec(200):
        prod = mpmath.fprod(a.embed(k) for k in range(1, a.l))
    assert abs(prod - norm(a)) < mpmath.mpf(2) ** -60 * (1 + abs(prod))


def test_phi_examples():
    assert phi_plus(CycElt.zeta_power(5, 1)) == CycElt.zeta_power(5, 1) + CycElt.zeta_power(5, 3)
    assert phi_plus(CycElt.zeta_power(3, 1)) == CycElt.zeta_power(3, 1)
    for l in PRIMES:
        assert phi_plus(CycElt.one(l)) == CycElt.rational(l, params(l).n)
    assert phi_star(CycElt.zeta_power(5, 1)) == CycElt.zeta_power(5, 4)
    s = phi_star(CycElt.zeta_power(5, 1))
    assert s * s.conj() == CycElt.one(5)
    a = CycElt(3, [2, -5])
    assert phi_star(a) == a
    with pytest.raises(ParameterError):
        phi_star(CycElt.zero(5))


@given(same_field(2))
def test_reflex_maps_are_homomorphisms(els):
    a, b = els
    assert phi_plus(a + b) == phi_plus(a) + phi_plus(b)
    if not a.is_zero() and not b.is_zero():
        assert phi_star(a * b) == phi_star(a) * phi_star(b)


@given(st.sampled_from(PRIMES).flatmap(elements))
def test_phi_star_times_conjugate_is_norm(a):
    if a.is_zero():
        return
    s = phi_star(a)
    assert s * s.conj() == CycElt.rational(a.l, norm(a))


def test_cyclotomic_units_are_real_units():
    for l in [5, 7, 11, 13, 17, 19]:
        for a in range(2, (l + 1) // 2):
            xi = cyclotomic_unit(l, a)
            assert xi.conj() == xi
            assert abs(norm(xi)) == 1


def test_cyclotomic_unit_numeric_value():
    with mpmath.workdps(40):
        got = cyclotomic_unit(7, 3).embed(1)
        want = mpmath.sin(3 * mpmath.pi / 7) / mpmath.sin(mpmath.pi / 7)
        # independent evaluation of the defining formula with zeta_{2l} = exp(pi i / l)
        z = mpmath.expjpi(mpmath.mpf(2) / 7)
        direct = mpmath.expjpi(mpmath.mpf(1 - 3) / 7) * (1 - z**3) / (1 - z)
        assert abs(got - want) < mpmath.mpf(10) ** -30
        assert abs(direct - want) < mpmath.mpf(10) ** -30
        assert mpmath.re(got) > 0


def test_cyclotomic_unit_range():
    for a in (0, 1, 4, 5, 7):
        with pytest.raises(ParameterError):
            cyclotomic_unit(7, a)


def test_known_order_l5_p7():
    xi = cyclotomic_unit(5, 2)
    assert multiplicative_order(residue_reduce(xi, 14)) == 48
    assert not (residue_reduce(xi, 98) ** 48).is_one()
    assert multiplicative_order(ResidueElt.one(5, 14)) == 1


def _brute_order(r):
    acc = r
    e = 1
    while not acc.is_one():
        acc = acc * r
        e += 1
    return e


@given(st.sampled_from([3, 5, 7]).flatmap(lambda l: st.tuples(elements(l, -20, 20), st.sampled_from([6, 10, 14, 22, 18, 50]))))
def test_order_matches_brute_force(data):
    a, m = data
    r = residue_reduce(a, m)
    if not r.is_unit():
        with pytest.raises(NonInvertibleError):
            multiplicative_order(r)
        return
    e = multiplicative_order(r)
    assert e == _brute_order(r)
    assert unit_group_exponent_bound(a.l, m) % e == 0


def test_residue_requires_coprime_denominator():
    half = CycElt(5, [1, 0, 0, 0], 2)
    with pytest.raises(NonInvertibleError):
        residue_reduce(half, 14)


def test_json_round_trip():
    a = CycElt(7, [1, -2, 3, 0, 0, 5], 4)
    assert CycElt.from_json(a.to_json()) == a
    assert a.to_json() == {"l": 7, "coeffs": [1, -2, 3, 0, 0, 5], "denom": 4}


def test_normalisation_by_gcd():
    a = CycElt(5, [2, 4, 6, 8], 4)
    assert a.denom == 2 and a.coeffs == (1, 2, 3, 4)


def test_power_basis_round_trip():
    a = CycElt(7, [1, -2, 3, 0, 0, 5], 3)
    assert CycElt.from_power_basis(7, [int(c * 3) for c in a.to_power_basis()], 3) == a


def test_rational_value():
    assert CycElt.rational(5, Fraction(3, 2)).rational_value() == Fraction(3, 2)
    assert CycElt.zeta_power(5, 1).rational_value() is None
