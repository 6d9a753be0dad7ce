"""Golden and law check suites behind ``cyclotheta verify``.

Each suite is a fixed, ordered list of tasks.  Tasks are plain module-level
functions so they can run in a worker pool; results are collected in task
order, and all randomness is seeded, so the JSON report does not depend on
the number of workers.
"""

from __future__ import annotations

import random
from fractions import Fraction
from multiprocessing import Pool

import mpmath

from .arith import odd_primes_up_to
from .cm import CMPoint, J_matrix, check_h_identities, cm_point, gram_matrix, regular_rep
from .cyclotomic import CycElt, cyclotomic_unit, params, residue_reduce
from .errors import CyclothetaError
from .linalg import det_exact
from .rayclass import RayParams, det_N, h1s2, matrix_B, matrix_M
from .reciprocity import a_matrix, orbit, prime_factor_set, submatrix_checks
from .tables import (
    A7,
    A_DET_PRIME_FACTORS,
    A_DETS,
    H1S2_DIMENSION,
    H1S2_EXPONENTS,
    M_RANKS,
    SUBMATRIX_DETS,
)
from .theta import (
    Characteristic,
    phi_quotient,
    quasiperiod_multiplier,
    random_admissible_gamma,
    siegel_action,
    theta_constant,
    transform_pair,
    vanishes_identically,
    half_integer_characteristics,
)

SUITES = ("paper-tables", "theta-laws", "cm-identities", "orbits")
LAW_PREC = 192


def _check(name: str, ok: bool, **detail) -> dict:
    return {"name": name, "pass": bool(ok), "detail": {k: detail[k] for k in sorted(detail)}}


# -- published tables ------------------------------------------------------


def task_a_matrices() -> list[dict]:
    out = [_check("A_7 matrix", a_matrix(7) == A7, matrix=a_matrix(7))]
    for l, want in sorted(A_DETS.items()):
        got = det_exact(a_matrix(l))
        out.append(_check(f"det A_{l}", got == want, expected=str(want), computed=str(got)))
    return out


def task_submatrices() -> list[dict]:
    out = []
    for (l, p), want in sorted(SUBMATRIX_DETS.items()):
        rep = submatrix_checks(l, p)
        out.append(_check(f"designated determinant l={l} p={p}", rep.det == want and rep.coprime,
                          expected=str(want), computed=str(rep.det), coprime_to_p=rep.coprime))
    return out


def task_factor_set(l: int) -> list[dict]:
    got = sorted(prime_factor_set(l))
    want = sorted(A_DET_PRIME_FACTORS[l])
    return [_check(f"prime factors of det A_{l}", got == want, expected=[str(q) for q in want],
                   computed=[str(q) for q in got])]


def task_ranks() -> list[dict]:
    out = []
    for (l, p), want in sorted(M_RANKS.items()):
        got = matrix_M(l, p).rank()
        out.append(_check(f"rank M_{l}({p})", got == want, expected=want, computed=got))
    bad = []
    for l in odd_primes_up_to(31):
        n = params(l).n
        dn = det_N(l)
        for p in odd_primes_up_to(31):
            if p == l:
                continue
            full = matrix_M(l, p).rank() == n + 1
            if full != (dn % p != 0):
                bad.append([l, p])
    out.append(_check("rank M_l(p) = n+1 iff p does not divide det N_l (l, p <= 31)", not bad, failures=bad))
    return out


def task_h1s2_row(l: int, p: int) -> list[dict]:
    rep = h1s2(l, p, allow_ramified=(p == l))
    congruent = all(u.congruent_mod_2p for u in rep.units)
    want = H1S2_DIMENSION[l][p]
    table = H1S2_EXPONENTS[l][p]
    table_ok = []
    for u, e in zip(rep.units, table):
        table_ok.append((residue_reduce(cyclotomic_unit(l, u.a), 2 * p) ** e).is_one())
    return [
        _check(
            f"H1/S2 l={l} p={p}",
            congruent and rep.dimension == want,
            computed_exponents=[str(u.exponent) for u in rep.units],
            congruent_mod_2p=congruent,
            expected_dimension=want,
            computed_dimension=rep.dimension,
            complete=rep.complete,
            listed_exponents=[str(e) for e in table],
            listed_exponents_congruent=table_ok,
        )
    ]


# -- cm identities --------------------------------------------------------


def h_zeta_pattern(l: int) -> list[list[int]]:
    """The block form of h(zeta) in the basis e_1..e_2n, written out directly."""
    n = params(l).n
    h = [[0] * (2 * n) for _ in range(2 * n)]
    for i in range(n - 1):
        h[i][n + i] = -1
        h[i][n + i + 1] = 1
    for j in range(n):
        h[n - 1][j] = -1
    h[n - 1][2 * n - 1] = -1
    for i in range(n):
        for j in range(i + 1):
            h[n + i][j] = 1
    return h


def task_cm_identities(l: int) -> list[dict]:
    n = params(l).n
    B = matrix_B(RayParams(l, 3 if l != 3 else 5))
    dB = det_exact(B)
    h = regular_rep(CycElt.zeta_power(l, 1))
    return [
        _check(f"Gram matrix = J (l={l})", gram_matrix(l) == J_matrix(n)),
        _check(f"det B = (-1)^(n-1) (l={l})", dB == (-1) ** (n - 1), computed=str(dB)),
        _check(f"h(zeta) block pattern (l={l})", h == h_zeta_pattern(l)),
    ]


def task_h_conjugation(count: int = 100, seed: int = 7) -> list[dict]:
    rng = random.Random(seed)
    bad = []
    for k in range(count):
        l = rng.choice(odd_primes_up_to(31))
        a = CycElt(l, [rng.randint(-5, 5) for _ in range(l - 1)])
        try:
            check_h_identities(a, prec=96)
        except CyclothetaError:
            bad.append(k)
    return [_check(f"h(conj a) = J th(a) J^-1 on {count} random a", not bad, failures=bad)]


# -- theta laws -----------------------------------------------------------


def random_point(rng: random.Random, n: int, prec: int = LAW_PREC) -> CMPoint:
    with mpmath.workprec(prec + 32):
        A = [[rng.uniform(-0.4, 0.4) for _ in range(n)] for _ in range(n)]
        z = mpmath.matrix(n, n)
        for i in range(n):
            for j in range(i, n):
                x = rng.uniform(-0.5, 0.5)
                y = sum(A[i][k] * A[j][k] for k in range(n)) + (0.8 if i == j else 0.0)
                z[i, j] = z[j, i] = mpmath.mpc(x, y)
    return CMPoint.from_matrix(z, 0, prec)


def random_characteristic(rng: random.Random, n: int) -> Characteristic:
    def q():
        d = rng.choice([2, 3, 4, 5, 6, 7])
        return Fraction(rng.randrange(-d, d + 1), d)

    return Characteristic([q() for _ in range(n)], [q() for _ in range(n)])


def _agree(a, b, t: Fraction = Fraction(0)):
    """|a - e(t) b| within the combined error radii."""
    with mpmath.workprec(a.prec + 32):
        mult = mpmath.expjpi(2 * mpmath.mpf(t.numerator) / t.denominator)
        diff = abs(a.value - mult * b.value)
        tol = a.err + b.err + mpmath.ldexp(1, -a.prec - 16)
    return diff <= tol, diff, tol


def task_theta_i() -> list[dict]:
    z = CMPoint.from_matrix([[mpmath.mpc(0, 1)]], 0, LAW_PREC)
    v = theta_constant(z, Characteristic([0], [0]), LAW_PREC)
    with mpmath.workprec(LAW_PREC + 64):
        ref = mpmath.pi ** mpmath.mpf(0.25) / mpmath.gamma(mpmath.mpf(0.75))
        diff = abs(v.value - ref)
    return [_check("Theta(0,i;0,0) = pi^(1/4)/Gamma(3/4) to 50 digits", diff < mpmath.mpf(10) ** -50 and diff <= v.err,
                   err_exponent=v.err_exponent())]


def task_igusa(seed: int = 11) -> list[dict]:
    rng = random.Random(seed)
    bad = []
    for n in (1, 2):
        z = random_point(rng, n)
        for c in half_integer_characteristics(n):
            v = theta_constant(z, c, LAW_PREC)
            small = abs(v.value) + v.err < mpmath.ldexp(1, -LAW_PREC + 30)
            large = abs(v.value) - v.err > mpmath.ldexp(1, -20)
            decided = vanishes_identically(c)
            if not ((decided and small) or (not decided and large)):
                bad.append(c.to_json())
    return [_check("vanishing criterion on half-integral characteristics (n = 1, 2)", not bad, failures=bad)]


def task_conjugation_symmetry(count: int = 50, seed: int = 13) -> list[dict]:
    rng = random.Random(seed)
    bad = []
    for k in range(count):
        n = rng.choice([1, 2, 3])
        z = random_point(rng, n)
        c = random_characteristic(rng, n)
        ok, _, _ = _agree(phi_quotient(z, c), phi_quotient(z, -c))
        if not ok:
            bad.append(k)
    return [_check(f"Phi(-r,-s) = Phi(r,s) on {count} random cases", not bad, failures=bad)]


def task_quasiperiodicity(count: int = 50, seed: int = 17) -> list[dict]:
    rng = random.Random(seed)
    bad = []
    for k in range(count):
        n = rng.choice([1, 2])
        z = random_point(rng, n)
        c = random_characteristic(rng, n)
        a = [rng.randint(-2, 2) for _ in range(n)]
        b = [rng.randint(-2, 2) for _ in range(n)]
        t = quasiperiod_multiplier(c, a, b)
        ok, _, _ = _agree(phi_quotient(z, c.shift(a, b)), phi_quotient(z, c), t)
        if not ok:
            bad.append(k)
    return [_check(f"Phi(r+a,s+b) = e(r.b) Phi(r,s) on {count} random cases", not bad, failures=bad)]


def task_transformation(count: int = 20, seed: int = 19) -> list[dict]:
    rng = random.Random(seed)
    bad = []
    done = 0
    while done < count:
        n = 1 if done % 2 == 0 else 2
        z = random_point(rng, n)
        gamma = random_admissible_gamma(n, rng, length=3)
        gz = siegel_action(gamma, z)
        if gz.lam_min < 0.2:
            continue  # keep the lattice sums at desk scale
        c = random_characteristic(rng, n)
        c2, t = transform_pair(gamma, c)
        ok, _, _ = _agree(phi_quotient(gz, c), phi_quotient(z, c2), t)
        if not ok:
            bad.append(done)
        done += 1
    return [_check(f"Phi(r,s)(gamma z) = e(t) Phi(r',s')(z) on {count} random admissible gamma", not bad,
                   failures=bad)]


def task_tail_soundness(seed: int = 23) -> list[dict]:
    rng = random.Random(seed)
    bad = []
    for k in range(6):
        n = 1 + k % 3
        z = random_point(rng, n)
        c = random_characteristic(rng, n)
        v = theta_constant(z, c, LAW_PREC)
        w = theta_constant(z, c, LAW_PREC, radius=v.radius + 2)
        if not abs(v.value - w.value) <= v.err:
            bad.append(k)
    return [_check("enlarging the box by 2 stays within the reported error", not bad, failures=bad)]


# -- orbits ---------------------------------------------------------------


def task_orbit(l: int, p: int, prec: int = LAW_PREC) -> list[dict]:
    try:
        rep = orbit(l, p, 1, 0, prec, cap=512)
    except CyclothetaError as exc:
        return [_check(f"orbit l={l} p={p}", False, error=str(exc))]
    expected = p ** (params(l).n + 1)
    return [_check(f"orbit l={l} p={p}: {expected} distinct conjugates",
                   rep.distinct and rep.count == expected,
                   conjugates=rep.count, precision=rep.prec,
                   min_distance=mpmath.nstr(rep.min_distance, 6),
                   err_radius_exponent=int(mpmath.ceil(mpmath.log(rep.err_radius, 2))))]


def task_cm_points() -> list[dict]:
    bad = []
    for l in odd_primes_up_to(31):
        try:
            z = cm_point(l, LAW_PREC)
            if not z.lam_min > 0:
                bad.append(l)
        except CyclothetaError:
            bad.append(l)
    return [_check("z_l symmetric with Im z_l certified positive definite (l <= 31)", not bad, failures=bad)]


TASKS = {
    "paper-tables": lambda: (
        [("task_a_matrices", ()), ("task_submatrices", ())]
        + [("task_factor_set", (l,)) for l in (3, 7, 11, 13, 17, 19, 23, 29, 31)]
        + [("task_ranks", ())]
        + [("task_h1s2_row", (l, p)) for l in (5, 7) for p in sorted(H1S2_EXPONENTS[l])]
    ),
    "cm-identities": lambda: (
        [("task_cm_identities", (l,)) for l in odd_primes_up_to(31)]
        + [("task_h_conjugation", ()), ("task_cm_points", ())]
    ),
    "theta-laws": lambda: [
        ("task_theta_i", ()),
        ("task_igusa", ()),
        ("task_conjugation_symmetry", ()),
        ("task_quasiperiodicity", ()),
        ("task_transformation", ()),
        ("task_tail_soundness", ()),
    ],
    "orbits": lambda: [("task_orbit", (7, 5)), ("task_orbit", (5, 3))],
}


def _run_task(task):
    name, args = task
    return globals()[name](*args)


def run_suite(suite: str, jobs: int = 1) -> dict:
    if suite not in TASKS:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    tasks = TASKS[suite]()
    if jobs > 1:
        with Pool(jobs) as pool:
            results = pool.map(_run_task, tasks, chunksize=1)
    else:
        results = [_run_task(t) for t in tasks]
    checks = [c for group in results for c in group]
    return {"suite": suite, "pass": all(c["pass"] for c in checks), "checks": checks}
