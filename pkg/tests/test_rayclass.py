import itertools
import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cyclotheta.arith import odd_primes_up_to
from cyclotheta.cyclotomic import CycElt, cyclotomic_unit, params, residue_reduce
from cyclotheta.errors import ParameterError, UnsupportedParametersError
from cyclotheta.linalg import det_exact, rank_mod_p
from cyclotheta.rayclass import (
    RayParams,
    _m_by_phi_plus,
    _m_by_rule,
    alpha_generator,
    class_number_plus,
    det_N,
    galois_predictions,
    h1s2,
    load_hplus_overrides,
    matrix_B,
    matrix_M,
    matrix_N,
)

L97 = odd_primes_up_to(97)


def z(l, j):
    return CycElt.zeta_power(l, j)


def test_alpha_examples():
    assert alpha_generator(RayParams(5, 3), 2) == 1 + 6 * z(5, 2)
    assert alpha_generator(RayParams(5, 3), 4) == 1 + 6 * (z(5, 2) + z(5, 3) - z(5, 4) - z(5, 1))
    # for l = 3, i = 2 = n + 1 still falls in the first range
    assert alpha_generator(RayParams(3, 5, 2), 2) == 1 + 50 * z(3, 2)
    with pytest.raises(ParameterError):
        alpha_generator(RayParams(5, 3), 5)
    with pytest.raises(ParameterError):
        RayParams(5, 5)


def test_matrix_B_examples():
    assert matrix_B(RayParams(5, 3)) == [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [-1, 1, 1, -1]]
    assert det_exact(matrix_B(RayParams(3, 7))) == 1
    assert det_exact(matrix_B(RayParams(13, 3))) == -1


@pytest.mark.parametrize("l", L97)
def test_det_B_sign(l):
    p = 3 if l != 3 else 5
    assert det_exact(matrix_B(RayParams(l, p))) == (-1) ** (params(l).n - 1)


def test_matrix_N_examples():
    assert matrix_N(3) == [[1]]
    assert matrix_N(5) == [[1, 1], [1, 0]]
    assert matrix_N(7) == [[1, 1, 1], [1, 0, 0], [1, 0, 1]]
    assert det_N(5) == -1 and det_N(7) == -1 and det_N(3) == 1


@pytest.mark.parametrize("l", [3, 5, 7, 11, 13, 31])
def test_N_complement_symmetry(l):
    # n_{i,l-j} is read off the full-width rule, since l - j > n
    n = params(l).n
    full = lambda i, j: int(1 <= (i * j) % l <= n)  # noqa: E731
    N = matrix_N(l)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            assert N[i - 1][j - 1] + full(i, l - j) == 1


@pytest.mark.parametrize("l", L97)
def test_M_definitions_agree(l):
    assert _m_by_phi_plus(l) == _m_by_rule(l)
    for p in (3, 5, 7):
        if p != l:
            matrix_M(l, p)


def test_M_examples():
    assert matrix_M(3, 5).rows == [[1, 0], [0, 1]]
    assert matrix_M(11, 3).rank() == 5
    assert matrix_M(13, 5).rank() == 6


@pytest.mark.parametrize("l", [5, 7, 11, 13, 17, 19, 23])
def test_full_rank_when_p_prime_to_det_N(l):
    d = det_N(l)
    n = params(l).n
    for p in (3, 5, 7, 11, 13):
        if p == l:
            continue
        r = matrix_M(l, p).rank()
        assert (r == n + 1) == (d % p != 0)


def test_h1s2_examples():
    r = h1s2(5, 7)
    assert r.dimension == 1 and [u.exponent for u in r.units] == [48]
    assert h1s2(5, 3).dimension == 0
    r = h1s2(7, 13)
    assert r.dimension == 2 and [u.exponent for u in r.units] == [84, 84]
    with pytest.raises(UnsupportedParametersError):
        h1s2(7, 7)
    assert h1s2(7, 7, allow_ramified=True).l == 7


@pytest.mark.parametrize("l,p", [(5, 11), (7, 3), (7, 17), (11, 3), (11, 23), (13, 5)])
def test_h1s2_congruences(l, p):
    rep = h1s2(l, p)
    assert rep.dimension <= params(l).n - 1
    for u in rep.units:
        xi = cyclotomic_unit(l, u.a)
        assert (residue_reduce(xi, 2 * p) ** u.exponent).is_one()
        assert u.congruent_mod_2p
        if any(u.image):
            assert not (residue_reduce(xi, 2 * p * p) ** u.exponent).is_one()
    json.dumps(rep.to_json())


def _brute_unit_span(l, p, bound):
    """Span of images of every product prod xi_a^c_a, 0 <= c_a <= bound, that is 1 mod 2p."""
    m1, m2 = 2 * p, 2 * p * p
    units = [cyclotomic_unit(l, a) for a in range(2, (l + 1) // 2)]
    r2 = [residue_reduce(u, m2) for u in units]
    vecs = []
    for c in itertools.product(range(bound + 1), repeat=len(units)):
        acc = residue_reduce(CycElt.one(l), m2)
        for x, k in zip(r2, c):
            acc = acc * x**k
        if _one_mod(acc, m1):
            one = residue_reduce(CycElt.one(l), m2)
            vecs.append([((a - b) % m2) // m1 % p for a, b in zip(acc.coeffs, one.coeffs)])
    return rank_mod_p(vecs, p) if vecs else 0


def _one_mod(acc, m1):
    one = [c % m1 for c in residue_reduce(CycElt.one(acc.l), acc.modulus).coeffs]
    return [c % m1 for c in acc.coeffs] == one


@pytest.mark.parametrize("l,p", [(7, 3), (7, 13), (7, 29), (7, 43)])
def test_h1s2_against_brute_force_kernel(l, p):
    rep = h1s2(l, p)
    exps = [u.exponent for u in rep.units]
    bound = max(exps) if max(exps) <= 200 else None
    if bound is None:
        pytest.skip("unit orders too large for exhaustive search")
    want = _brute_unit_span(l, p, bound)
    got = rep.mixed_dimension if rep.mixed_dimension is not None else rep.dimension
    assert want == got


def test_predictions():
    g = galois_predictions(11, 3)
    assert g.order == 3**5 and not g.ray_class_equality
    g = galois_predictions(7, 5)
    assert g.order == 5**4 and g.rank_M == 4
    assert galois_predictions(5, 7).ray_class_equality
    with pytest.raises(UnsupportedParametersError):
        galois_predictions(7, 3)  # 3 divides n


def test_hplus_table(tmp_path, monkeypatch):
    from cyclotheta import rayclass

    monkeypatch.setattr(rayclass, "_hplus_overrides", {})
    assert class_number_plus(67) == 1
    with pytest.raises(UnsupportedParametersError):
        class_number_plus(163)
    f = tmp_path / "h.json"
    f.write_text(json.dumps({"163": 5}))
    assert load_hplus_overrides(f) == {163: 5}
    assert class_number_plus(163) == 5
    with pytest.raises(UnsupportedParametersError):
        galois_predictions(163, 5)  # p divides h^+


@given(st.sampled_from([5, 7, 11, 13]), st.sampled_from([3, 5, 7, 11]))
def test_rank_bounds(l, p):
    if p == l:
        return
    n = params(l).n
    assert 1 <= matrix_M(l, p).rank() <= n + 1
