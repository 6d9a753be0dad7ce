"""Resumable scan certifying det(N_l) != 0 for odd primes l up to a bound.

A certificate is either (q, det N_l mod q) with a nonzero residue for a word
size prime q, or the exact determinant.  Progress goes to an append-only
JSON-lines state file, flushed and fsync'd every ``BATCH`` entries, so an
interrupted scan resumes without redoing finished l.  The final report depends
only on the bound: worker count and resume history do not change it.
"""

from __future__ import annotations

import json
import os
import random
import time
from dataclasses import dataclass, field
from multiprocessing import Pool
from pathlib import Path

from .arith import is_prime, odd_primes_up_to
from .linalg import det_bareiss, det_mod_p, det_modular
from .rayclass import matrix_N

BATCH = 50
MAX_ZERO_RESIDUES = 5
WITNESS_BITS = 31


def witness_primes(l: int):
    """Deterministic stream of 31-bit primes seeded by l."""
    rng = random.Random(l)
    while True:
        q = rng.randrange(2 ** (WITNESS_BITS - 1), 2**WITNESS_BITS) | 1
        while not is_prime(q):
            q += 2
        if q < 2**WITNESS_BITS:
            yield q


def certify(l: int) -> dict:
    """Certificate for det(N_l) != 0, or a counterexample record with the exact det."""
    N = matrix_N(l)
    if len(N) <= 2:
        d = det_bareiss(N)
        return {"l": l, "det": str(d)} if d else {"l": l, "det": "0", "counterexample": True}
    primes = witness_primes(l)
    for _ in range(MAX_ZERO_RESIDUES):
        q = next(primes)
        r = det_mod_p(N, q)
        if r:
            return {"l": l, "prime": q, "residue": r}
    d = det_modular(N)
    if d == 0:
        return {"l": l, "det": "0", "counterexample": True}
    return {"l": l, "det": str(d)}


def check_certificate(cert: dict) -> bool:
    """Independently recompute a certificate."""
    N = matrix_N(cert["l"])
    if "prime" in cert:
        r = det_mod_p(N, cert["prime"])
        return r == cert["residue"] and r != 0
    return str(det_modular(N) if len(N) > 2 else det_bareiss(N)) == cert["det"]


@dataclass
class ScanState:
    bound: int
    witnesses: dict[int, dict] = field(default_factory=dict)
    started: float | None = None
    updated: float | None = None

    @property
    def completed(self) -> list[int]:
        return sorted(self.witnesses)

    @property
    def counterexamples(self) -> list[int]:
        return sorted(l for l, c in self.witnesses.items() if c.get("counterexample"))

    def report(self) -> dict:
        """Deterministic summary (no timestamps)."""
        targets = odd_primes_up_to(self.bound)
        done = [l for l in targets if l in self.witnesses]
        return {
            "bound": self.bound,
            "certified": len([l for l in done if not self.witnesses[l].get("counterexample")]),
            "total": len(targets),
            "counterexamples": [{"l": l, "det": self.witnesses[l]["det"]} for l in self.counterexamples
                                if l <= self.bound],
            "witnesses": {str(l): {k: v for k, v in self.witnesses[l].items() if k != "l"} for l in done},
        }


def load_state(path: Path) -> tuple[dict[int, dict], float | None, int]:
    """Read finished entries; returns (entries, started, byte length of the valid prefix)."""
    entries: dict[int, dict] = {}
    started = None
    valid = 0
    if not path.exists():
        return entries, started, 0
    with path.open("rb") as fh:
        for raw in fh:
            if not raw.endswith(b"\n"):
                break
            try:
                rec = json.loads(raw)
            except json.JSONDecodeError:
                break
            valid += len(raw)
            if rec.get("type") == "header":
                started = started or rec.get("started")
            elif rec.get("type") == "cert":
                cert = rec["cert"]
                entries[int(cert["l"])] = cert
    return entries, started, valid


def _append(fh, records):
    for rec in records:
        fh.write(json.dumps(rec, sort_keys=True) + "\n")
    fh.flush()
    os.fsync(fh.fileno())


def run_scan(bound: int, jobs: int = 1, state_path: str | Path | None = None,
             progress=None) -> ScanState:
    if bound < 3:
        raise ValueError("bound must be at least 3")
    targets = odd_primes_up_to(bound)
    state = ScanState(bound)
    fh = None
    if state_path is not None:
        path = Path(state_path)
        entries, started, valid = load_state(path)
        state.witnesses.update(entries)
        state.started = started
        fh = path.open("ab")
        fh.truncate(valid)  # drop a torn trailing line
        fh.close()
        fh = path.open("a")
        if started is None:
            state.started = time.time()
            _append(fh, [{"type": "header", "bound": bound, "started": state.started}])
    todo = [l for l in targets if l not in state.witnesses]
    pending = []

    def flush():
        if fh is not None and pending:
            _append(fh, [{"type": "cert", "cert": c, "updated": time.time()} for c in pending])
        pending.clear()

    try:
        if jobs > 1 and len(todo) > 1:
            with Pool(jobs) as pool:
                results = pool.imap(certify, todo, chunksize=1)
                for cert in results:
                    _record(state, cert, pending, flush, progress)
        else:
            for l in todo:
                _record(state, certify(l), pending, flush, progress)
    finally:
        flush()
        if fh is not None:
            fh.close()
    state.updated = time.time()
    return state


def _record(state, cert, pending, flush, progress):
    state.witnesses[cert["l"]] = cert
    pending.append(cert)
    if progress is not None:
        progress(cert)
    if len(pending) >= BATCH:
        flush()
