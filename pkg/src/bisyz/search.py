"""Exhaustive sweeps over monomial supports, with symmetry pruning and resumable storage.

A sweep answers, for fixed (m, n, a, b, r): is there a basepoint-free monomial V of
dimension r with M_V stable? Records go to a JSONL file in canonical support order; a
sidecar checkpoint holds the number of completed records and the task hash.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from itertools import combinations, permutations
from math import comb
from pathlib import Path
from typing import Iterator, Optional

from .constructions import range_classify
from .core import Ambient, BisyzError, Monomial, Polarization, dim_graded_piece, enumerate_monomials, pure_powers
from .linsys import monomial_system, random_general_system
from .stability import (
    DEFAULT_RANK_CAP,
    INCONCLUSIVE,
    NOT_SEMISTABLE,
    NOT_STABLE,
    STABLE,
    STRATEGIES,
    certify,
)

RESULT_DIR_ENV = "BISYZ_RESULT_DIR"
DEFAULT_RESULT_DIR = "bisyz-results"

YES, NO, OPEN = "YES", "NO", "OPEN"
NO_MONOMIAL_BPF = "NO_MONOMIAL_BPF"
INCOMPLETE = "INCOMPLETE"


def result_dir() -> Path:
    return Path(os.environ.get(RESULT_DIR_ENV, DEFAULT_RESULT_DIR))


@dataclass(frozen=True)
class SearchTask:
    m: int
    n: int
    a: int
    b: int
    r: int
    strategy: str = "gap-then-brute"
    symmetry: bool = True
    rank_cap: int = DEFAULT_RANK_CAP
    max_records: Optional[int] = None
    time_budget_s: Optional[float] = None

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise BisyzError(f"unknown strategy {self.strategy!r}")
        h0 = dim_graded_piece(self.ambient, (self.a, self.b))
        if not self.m + self.n + 1 <= self.r <= h0:
            raise BisyzError(f"r = {self.r} outside {self.m + self.n + 1}..{h0}")

    @property
    def ambient(self) -> Ambient:
        return Ambient(self.m, self.n)

    @property
    def polarization(self) -> Polarization:
        return Polarization(self.a, self.b)

    def task_hash(self) -> str:
        # limits change how far a run gets, not what it computes
        core = {k: v for k, v in asdict(self).items() if k not in ("max_records", "time_budget_s")}
        core["strategy"] = STRATEGIES[self.strategy]
        blob = json.dumps(core, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def stem(self) -> str:
        return f"sweep-m{self.m}n{self.n}a{self.a}b{self.b}r{self.r}"


# ----- symmetry -----------------------------------------------------------------------------

def symmetry_maps(amb: Ambient, L: Polarization, symmetry: bool = True) -> list:
    """Group elements as functions on monomials: S_(m+1) x S_(n+1), plus the factor swap
    when m = n and a = b."""
    if not symmetry:
        return [lambda u: u]
    maps = []
    for sx in permutations(range(amb.m + 1)):
        for sy in permutations(range(amb.n + 1)):
            maps.append(_perm_map(sx, sy, False))
            if amb.m == amb.n and L.a == L.b:
                maps.append(_perm_map(sx, sy, True))
    return maps


def _perm_map(sx, sy, swap):
    def act(u: Monomial) -> Monomial:
        alpha = tuple(u.alpha[sx[i]] for i in range(len(sx)))
        beta = tuple(u.beta[sy[j]] for j in range(len(sy)))
        return Monomial(beta, alpha) if swap else Monomial(alpha, beta)
    return act


def support_key(support) -> tuple:
    return tuple(u.key() for u in sorted(support))


def orbit(support, maps) -> set:
    return {tuple(sorted(g(u) for u in support)) for g in maps}


def canonical_support(support, maps) -> tuple:
    """Lexicographically least image of the support under the group."""
    return min(orbit(support, maps), key=support_key)


def raw_support_count(amb: Ambient, L: Polarization, r: int) -> int:
    h0 = dim_graded_piece(amb, (L.a, L.b))
    floor = (amb.m + 1) * (amb.n + 1)
    return comb(h0 - floor, r - floor) if r >= floor else 0


def enumerate_supports(task: SearchTask) -> Iterator[tuple[tuple, int]]:
    """Canonical bpf supports of size r with their orbit sizes, sorted by support."""
    amb, L = task.ambient, task.polarization
    pure = pure_powers(amb, L)
    floor = len(pure)
    if task.r < floor:
        return iter(())
    pure_set = set(pure)
    extras = [u for u in enumerate_monomials(amb, (L.a, L.b)) if u not in pure_set]
    maps = symmetry_maps(amb, L, task.symmetry)
    found = []
    for pick in combinations(extras, task.r - floor):
        support = tuple(sorted(pure + list(pick)))
        images = orbit(support, maps)
        least = min(images, key=support_key)
        if least == support:
            found.append((support, len(images)))
    found.sort(key=lambda item: support_key(item[0]))
    return iter(found)


# ----- sweeping -----------------------------------------------------------------------------

def _certify_support(job):
    m, n, a, b, texts, strategy, rank_cap = job
    amb, L = Ambient(m, n), Polarization(a, b)
    sys = monomial_system(amb, L, texts)
    cert = certify(sys, strategy, rank_cap)
    return cert.verdict.to_json(), cert.content_hash()


def _write_atomic(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(text)
        fh.flush()
        os.fsync(fh.fileno())
    os.replace(tmp, path)


def _read_checkpoint(path: Path) -> Optional[dict]:
    if not path.exists():
        return None
    return json.loads(path.read_text(encoding="utf-8"))


def _truncate_lines(path: Path, keep: int) -> None:
    if not path.exists():
        if keep:
            raise BisyzError(f"checkpoint claims {keep} records but {path} is missing")
        return
    with open(path, "rb") as fh:
        lines = fh.read().splitlines(keepends=True)
    if len(lines) < keep:
        raise BisyzError(f"checkpoint claims {keep} records but {path} holds {len(lines)}")
    if len(lines) != keep:
        with open(path, "wb") as fh:
            fh.writelines(lines[:keep])


@dataclass
class SweepResult:
    task: SearchTask
    records_path: Path
    checkpoint_path: Path
    total: int
    completed: int
    complete: bool
    summary: dict


def summarize(task: SearchTask, records: list[dict], total: int, complete: bool) -> dict:
    floor = (task.m + 1) * (task.n + 1)
    counts = {STABLE: 0, NOT_STABLE: 0, NOT_SEMISTABLE: 0, INCONCLUSIVE: 0}
    first_stable = None
    for rec in records:
        kind = rec["verdict"]["kind"]
        counts[kind] = counts.get(kind, 0) + 1
        if kind == STABLE and first_stable is None:
            first_stable = rec["support"]
    if task.r < floor:
        answer = NO_MONOMIAL_BPF
    elif first_stable is not None:
        answer = YES
    elif not complete:
        answer = INCOMPLETE
    elif counts[INCONCLUSIVE]:
        answer = OPEN
    else:
        answer = NO
    return {
        "m": task.m, "n": task.n, "a": task.a, "b": task.b, "r": task.r,
        "answer": answer,
        "supports": total,
        "checked": len(records),
        "complete": complete,
        "counts": counts,
        "witness": first_stable,
        "raw_supports": raw_support_count(task.ambient, task.polarization, task.r),
        "orbit_total": sum(rec["orbit_size"] for rec in records),
    }


def sweep(task: SearchTask, out_dir: Optional[Path] = None, jobs: int = 1, resume: bool = True) -> SweepResult:
    """Certify every canonical support, streaming records in canonical order.

    With ``resume`` an existing checkpoint for the same task is honoured: the JSONL is cut
    back to the checkpointed count and the sweep continues from there.
    """
    out_dir = Path(out_dir) if out_dir is not None else result_dir()
    out_dir.mkdir(parents=True, exist_ok=True)
    records_path = out_dir / f"{task.stem()}.jsonl"
    ckpt_path = out_dir / f"{task.stem()}.ckpt"
    supports = list(enumerate_supports(task))
    thash = task.task_hash()

    done = 0
    ckpt = _read_checkpoint(ckpt_path) if resume else None
    if ckpt is not None:
        if ckpt.get("task_hash") != thash:
            raise BisyzError(f"checkpoint {ckpt_path} belongs to a different task")
        done = int(ckpt["completed"])
        _truncate_lines(records_path, done)
    else:
        records_path.write_text("", encoding="utf-8")
        _write_atomic(ckpt_path, json.dumps({"completed": 0, "task_hash": thash}) + "\n")

    todo = supports[done:]
    if task.max_records is not None:
        todo = todo[: task.max_records]
    deadline = None if task.time_budget_s is None else time.monotonic() + task.time_budget_s
    jobs_in = [
        (task.m, task.n, task.a, task.b, [u.text() for u in sup], task.strategy, task.rank_cap)
        for sup, _ in todo
    ]

    def emit(results):
        nonlocal done
        with open(records_path, "a", encoding="utf-8") as fh:
            for (sup, orbit_size), (verdict, chash) in zip(todo, results):
                rec = {
                    "index": done,
                    "m": task.m, "n": task.n, "a": task.a, "b": task.b, "r": task.r,
                    "support": [u.text() for u in sup],
                    "orbit_size": orbit_size,
                    "verdict": verdict,
                    "certificate": chash,
                }
                fh.write(json.dumps(rec, sort_keys=True) + "\n")
                fh.flush()
                done += 1
                _write_atomic(ckpt_path, json.dumps({"completed": done, "task_hash": thash}) + "\n")
                if deadline is not None and time.monotonic() > deadline:
                    return

    if jobs > 1 and len(jobs_in) > 1:
        pool = ProcessPoolExecutor(max_workers=jobs)
        try:
            # map yields in submission order, so the single writer stays canonical
            emit(pool.map(_certify_support, jobs_in, chunksize=1))
        finally:
            pool.shutdown(wait=True, cancel_futures=True)
    else:
        emit(_certify_support(j) for j in jobs_in)

    records = load_records(records_path)
    complete = done == len(supports)
    return SweepResult(task, records_path, ckpt_path, len(supports), done, complete,
                       summarize(task, records, len(supports), complete))


def load_records(path: Path) -> list[dict]:
    if not Path(path).exists():
        return []
    with open(path, encoding="utf-8") as fh:
        return [json.loads(line) for line in fh if line.strip()]


def sample_general(amb: Ambient, L: Polarization, r: int, samples: int, seed: int,
                   strategy: str = "gap-then-brute", field: str = "rational") -> dict:
    """Certify random r-dimensional subspaces of the complete system. Sampling only: the
    answer is YES when some sample is stable and OPEN otherwise, never NO."""
    support = enumerate_monomials(amb, (L.a, L.b))
    verdicts = []
    for k in range(samples):
        sys = random_general_system(amb, L, support, r, seed + k * 1000, field)
        cert = certify(sys, strategy)
        verdicts.append({"seed": sys.seed, "resample": sys.resample, "verdict": cert.verdict.kind})
    stable = [v for v in verdicts if v["verdict"] == STABLE]
    return {
        "m": amb.m, "n": amb.n, "a": L.a, "b": L.b, "r": r,
        "mode": "sampled-general",
        "answer": YES if stable else OPEN,
        "samples": verdicts,
    }


def brenner_report(amb: Ambient, L: Polarization, run_sweeps: bool = True, max_supports: int = 2000,
                   out_dir: Optional[Path] = None, jobs: int = 1, strategy: str = "gap-then-brute") -> list[dict]:
    """One row per r in m+n+1..h0: range class, predicted answer and sweep answer."""
    h0 = dim_graded_piece(amb, (L.a, L.b))
    floor = (amb.m + 1) * (amb.n + 1)
    rows = []
    for r in range(amb.m + amb.n + 1, h0 + 1):
        rc = range_classify(amb.m, amb.n, L.a, L.b, r)
        row = {"r": r, "class": rc.value, "prediction": rc.prediction, "sweep": None, "note": ""}
        if r < floor:
            row["sweep"] = NO_MONOMIAL_BPF
            row["note"] = "no bpf monomial support"
        elif run_sweeps and raw_support_count(amb, L, r) <= max_supports:
            task = SearchTask(amb.m, amb.n, L.a, L.b, r, strategy)
            res = sweep(task, out_dir=out_dir, jobs=jobs, resume=False)
            row["sweep"] = res.summary["answer"]
            row["supports"] = res.summary["supports"]
            row["witness"] = res.summary["witness"]
        else:
            row["note"] = "not computed"
        rows.append(row)
    return rows


def format_report(rows: list[dict]) -> str:
    lines = [f"{'r':>4}  {'class':<16}{'prediction':<12}{'sweep':<18}note"]
    for row in rows:
        lines.append(f"{row['r']:>4}  {row['class']:<16}{row['prediction']:<12}{str(row['sweep'] or '-'):<18}{row['note']}")
    return "\n".join(lines)


__all__ = [
    "SearchTask", "enumerate_supports", "sweep", "SweepResult", "summarize", "load_records",
    "brenner_report", "format_report", "sample_general", "canonical_support", "orbit",
    "symmetry_maps", "raw_support_count", "result_dir", "YES", "NO", "OPEN", "NO_MONOMIAL_BPF",
    "INCOMPLETE",
]
