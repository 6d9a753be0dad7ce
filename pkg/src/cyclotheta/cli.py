"""Command-line front end.

Every subcommand prints one JSON document on stdout (keys sorted, exact
integers as decimal strings).  Exit codes: 0 ok, 1 verification mismatch or
numerical failure, 2 usage error, 3 conjecture counterexample.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction

from . import __version__
from .arith import is_prime, odd_primes_up_to
from .errors import CyclothetaError, HypothesisNotMetError, ParameterError

log = logging.getLogger("cyclotheta")

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_COUNTEREXAMPLE = 0, 1, 2, 3


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True) + "\n")


def cmd_nl(args) -> int:
    from .rayclass import det_N

    _emit({"l": args.l, "det": str(det_N(args.l))})
    return EXIT_OK


def cmd_mrank(args) -> int:
    from .cyclotomic import params
    from .rayclass import det_N, galois_predictions, matrix_M

    M = matrix_M(args.l, args.p)
    out = {
        "l": args.l,
        "p": args.p,
        "n": params(args.l).n,
        "rank": M.rank(),
        "det_N": str(det_N(args.l)),
        "p_divides_det_N": det_N(args.l) % args.p == 0,
    }
    try:
        out["prediction"] = galois_predictions(args.l, args.p).to_json()
    except CyclothetaError as exc:
        out["prediction"] = None
        out["prediction_unavailable"] = str(exc)
    _emit(out)
    return EXIT_OK


def cmd_h1s2(args) -> int:
    from .rayclass import h1s2

    if (args.p is None) == (args.pmax is None):
        raise ParameterError("give exactly one of --p and --pmax")
    primes = [args.p] if args.p is not None else odd_primes_up_to(args.pmax)
    reports = []
    for p in primes:
        if p == args.l and args.p is None and not args.allow_ramified:
            continue
        reports.append(h1s2(args.l, p, allow_ramified=args.allow_ramified).to_json())
    _emit(reports[0] if args.p is not None else {"l": args.l, "rows": reports})
    return EXIT_OK


def cmd_cmpoint(args) -> int:
    from .cm import cm_point

    _emit({"l": args.l, "z": cm_point(args.l, args.prec).to_json()})
    return EXIT_OK


def cmd_theta(args) -> int:
    from .cm import cm_point
    from .cyclotomic import params
    from .reciprocity import default_family
    from .theta import Characteristic, phi_quotient_retry

    n = params(args.l).n
    if not 1 <= args.i <= n + 1:
        raise ParameterError(f"--i must lie in [1, {n + 1}]")
    if args.p < 3 or not is_prime(args.p):
        raise ParameterError("--p must be an odd prime")
    fam = default_family(args.l)
    q = args.p**args.mu
    c = Characteristic([Fraction(x, q) for x in fam.r[args.i - 1]], [Fraction(x, q) for x in fam.s[args.i - 1]])
    v = phi_quotient_retry(lambda P: cm_point(args.l, P), c, args.prec)
    _emit({"l": args.l, "p": args.p, "mu": args.mu, "i": args.i, "characteristic": c.to_json(),
           "phi": v.to_json()})
    return EXIT_OK


def cmd_amatrix(args) -> int:
    from .reciprocity import amatrix_report

    _emit(amatrix_report(args.l, with_factors=args.factor).to_json())
    return EXIT_OK


def cmd_orbit(args) -> int:
    from .reciprocity import orbit

    rep = orbit(args.l, args.p, args.mu, args.alpha, args.prec)
    _emit(rep.to_json())
    return EXIT_OK if rep.distinct else EXIT_MISMATCH


def cmd_scan(args) -> int:
    from .scan import run_scan

    def progress(cert):
        log.info("l=%d certified", cert["l"])

    state = run_scan(args.bound, args.jobs, args.state, progress=progress)
    report = state.report()
    _emit(report)
    if report["counterexamples"]:
        for ce in report["counterexamples"]:
            sys.stderr.write(f"CONJECTURE COUNTEREXAMPLE: det N_{ce['l']} = {ce['det']}\n")
        return EXIT_COUNTEREXAMPLE
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import run_suite

    report = run_suite(args.suite, jobs=args.jobs)
    _emit(report)
    return EXIT_OK if report["pass"] else EXIT_MISMATCH


def _odd_prime(text: str) -> int:
    try:
        v = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text}") from exc
    if v < 3 or not is_prime(v):
        raise argparse.ArgumentTypeError(f"{v} is not an odd prime")
    return v


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text}") from exc
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cyclotheta", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true", help="progress messages on stderr")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("nl", help="exact det(N_l)")
    p.add_argument("--l", type=_odd_prime, required=True)
    p.set_defaults(func=cmd_nl)

    p = sub.add_parser("mrank", help="rank of M_l(p) and the Galois-group prediction")
    p.add_argument("--l", type=_odd_prime, required=True)
    p.add_argument("--p", type=_odd_prime, required=True)
    p.set_defaults(func=cmd_mrank)

    p = sub.add_parser("h1s2", help="image of the cyclotomic units in H_1/S_2")
    p.add_argument("--l", type=_odd_prime, required=True)
    p.add_argument("--p", type=_odd_prime)
    p.add_argument("--pmax", type=_positive, help="all odd primes up to this bound")
    p.add_argument("--allow-ramified", action="store_true", help="also accept p = l")
    p.set_defaults(func=cmd_h1s2)

    p = sub.add_parser("cmpoint", help="the CM point z_l with a certified error")
    p.add_argument("--l", type=_odd_prime, required=True)
    p.add_argument("--prec", type=_positive, default=128)
    p.set_defaults(func=cmd_cmpoint)

    p = sub.add_parser("theta", help="Phi_[r0,s0;mu,i](z_l)_p")
    p.add_argument("--l", type=_odd_prime, required=True)
    p.add_argument("--p", type=_odd_prime, required=True)
    p.add_argument("--mu", type=_positive, default=1)
    p.add_argument("--i", type=_positive, required=True)
    p.add_argument("--prec", type=_positive, default=192)
    p.set_defaults(func=cmd_theta)

    p = sub.add_parser("amatrix", help="the exponent matrix A_l for the default family")
    p.add_argument("--l", type=_odd_prime, required=True)
    p.add_argument("--factor", action="store_true", help="factor the determinant")
    p.set_defaults(func=cmd_amatrix)

    p = sub.add_parser("orbit", help="distinctness of the predicted conjugates of the generator sum")
    p.add_argument("--l", type=_odd_prime, required=True)
    p.add_argument("--p", type=_odd_prime, required=True)
    p.add_argument("--mu", type=_positive, default=1)
    p.add_argument("--alpha", type=int, default=0)
    p.add_argument("--prec", type=_positive, default=192)
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("scan", help="certify det(N_l) != 0 for all odd primes l <= bound")
    p.add_argument("--bound", type=_positive, required=True)
    p.add_argument("--jobs", type=_positive, default=1)
    p.add_argument("--state", help="JSON-lines state file (resumable)")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("verify", help="run a golden / law check suite")
    p.add_argument("--suite", required=True, choices=["paper-tables", "theta-laws", "cm-identities", "orbits"])
    p.add_argument("--jobs", type=_positive, default=1)
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (ParameterError, HypothesisNotMetError, ValueError) as exc:
        sys.stderr.write(f"cyclotheta: error: {exc}\n")
        return EXIT_USAGE
    except CyclothetaError as exc:
        sys.stderr.write(f"cyclotheta: {type(exc).__name__}: {exc}\n")
        return EXIT_MISMATCH


if __name__ == "__main__":
    sys.exit(main())
