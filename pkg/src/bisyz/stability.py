"""Slope-stability verdicts for syzygy bundles M_V.

A section of wedge^q M_V (x, y) with (x, y) in the violation region obstructs the
cohomological criterion. For q = 1 it is an honest subsheaf O(-x, -y) of M_V and refutes
stability; for q >= 2 it only makes the sufficient criterion inconclusive.
"""

from __future__ import annotations

import hashlib
import json
import logging
import time
from dataclasses import dataclass, field
from typing import Optional

from .core import (
    Ambient,
    BisyzError,
    Bidegree,
    Polarization,
    syzygy_bundle_numerics,
)
from .linsys import MONOMIAL, BpfStatus, LinearSystem, bpf_status
from .syzygy import h0_twist, h0_wedge_twist, min_syzygy_total_degree

log = logging.getLogger(__name__)

CERT_VERSION = "1"
DEFAULT_RANK_CAP = 10

STABLE = "StableCertified"
NOT_STABLE = "NotStable"
NOT_SEMISTABLE = "NotSemistable"
INCONCLUSIVE = "Inconclusive"

DEGREE_GAP = "DegreeGap"
BRUTE_FORCE = "BruteForceCohomological"
RANK1 = "Rank1Witness"

STRATEGIES = {
    "degree-gap": "DegreeGapOnly",
    "brute-force": "BruteForceOnly",
    "gap-then-brute": "GapThenBruteForce",
}
for _v in list(STRATEGIES.values()):
    STRATEGIES[_v] = _v


class NotBasepointFree(BisyzError):
    pass


@dataclass(frozen=True)
class Witness:
    q: int
    twist: Bidegree
    h0: int
    comparison: str  # "equal" | "strict"

    def to_json(self) -> dict:
        return {"q": self.q, "x": self.twist.x, "y": self.twist.y, "h0": self.h0, "comparison": self.comparison}


@dataclass
class StabilityVerdict:
    kind: str
    method: str
    witness: Optional[Witness] = None
    checked_region: Optional[list] = None
    t_min: Optional[int] = None
    orientation: Optional[str] = None
    obstruction: Optional[tuple] = None  # (q, x, y, h0) for a q >= 2 section

    def to_json(self) -> dict:
        out = {"kind": self.kind, "method": self.method}
        if self.t_min is not None:
            out["t_min"] = self.t_min
        if self.orientation is not None:
            out["orientation"] = self.orientation
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        if self.checked_region is not None:
            out["checked_region"] = [list(c) for c in self.checked_region]
        if self.obstruction is not None:
            out["obstruction"] = dict(zip(("q", "x", "y", "h0"), self.obstruction))
        return out


def _region_lhs(amb: Ambient, L: Polarization, twist) -> int:
    x, y = twist
    return L.b * amb.m * x + L.a * amb.n * y


def _region_rhs(amb: Ambient, L: Polarization, q: int) -> int:
    return q * L.a * L.b * (amb.m + amb.n)


def compare_slope(amb: Ambient, L: Polarization, r: int, q: int, twist) -> Optional[str]:
    """"equal" or "strict" when (x,y) lies in the q-violation region, None otherwise.

    b m x + a n y against q a b (m+n) / (r-1), cross-multiplied.
    """
    lhs = _region_lhs(amb, L, twist) * (r - 1)
    rhs = _region_rhs(amb, L, q)
    if lhs < rhs:
        return "strict"
    if lhs == rhs:
        return "equal"
    return None


def violation_region(amb: Ambient, L: Polarization, r: int, q: int) -> list[Bidegree]:
    """Effective twists (x, y) with (b m x + a n y)(r-1) <= q a b (m+n), in scan order."""
    if r < 3 or not 1 <= q <= r - 2:
        raise BisyzError(f"q = {q} outside 1..r-2 for r = {r}")
    rhs = _region_rhs(amb, L, q)
    out = []
    s = 0
    while True:
        row = [Bidegree(x, s - x) for x in range(s + 1)
               if _region_lhs(amb, L, (x, s - x)) * (r - 1) <= rhs]
        if not row:
            # the left side grows with x+y, so once a whole diagonal fails all later ones do
            break
        out.extend(row)
        s += 1
    return out


def _require_bpf(sys: LinearSystem, assume_bpf: bool) -> BpfStatus:
    status = bpf_status(sys)
    if status.usable:
        return status
    if assume_bpf and status.value == "Unknown":
        return status
    detail = f" at torus-fixed point {status.point}" if status.point else ""
    raise NotBasepointFree(f"linear system is not certified basepoint-free ({status.value}{detail})")


def certify_degree_gap(sys: LinearSystem, assume_bpf: bool = False) -> StabilityVerdict:
    """StableCertified iff (r-1) t_min min(m,n) > max(a,b)(m+n), else Inconclusive.

    The q = 1 part of this test is a proof: a subsheaf O(-x,-y) needs x+y >= t_min. For
    q >= 2 it relies on sections of wedge^q M_V (x,y) having x+y >= q t_min, which fails for
    some monomial systems (see tests/test_stability.py), so brute force can disagree.
    """
    _require_bpf(sys, assume_bpf)
    oriented, orientation = sys, "as-given"
    if sys.polarization.a < sys.polarization.b:
        oriented, orientation = sys.transposed(), "swapped"
    amb, L = oriented.ambient, oriented.polarization
    t = min_syzygy_total_degree(oriented)
    ok = (oriented.r - 1) * t * min(amb.m, amb.n) > max(L.a, L.b) * (amb.m + amb.n)
    return StabilityVerdict(STABLE if ok else INCONCLUSIVE, DEGREE_GAP, t_min=t, orientation=orientation)


def _h0_sound(sys: LinearSystem, q: int, twist) -> int:
    """Wedge h^0 where a nonzero answer is confirmed over the system's own field."""
    h = h0_wedge_twist(sys, q, twist)
    if h and sys.kind != MONOMIAL and sys.prime is None:
        # F_p rank can drop; only the rational kernel may support a refutation
        h = h0_wedge_twist(sys, q, twist, method="exact")
    return h


def find_rank1_destabilizer(sys: LinearSystem) -> Optional[Witness]:
    """First twist of the q = 1 violation region carrying a section of M_V."""
    if sys.r < 3:
        return None
    amb, L, r = sys.ambient, sys.polarization, sys.r
    for tw in violation_region(amb, L, r, 1):
        h = _h0_sound(sys, 1, tw)
        if h:
            return Witness(1, tw, h, compare_slope(amb, L, r, 1, tw))
    return None


def certify_brute_force(sys: LinearSystem, rank_cap: int = DEFAULT_RANK_CAP,
                        assume_bpf: bool = False) -> StabilityVerdict:
    """Check h^0(wedge^q M_V (x,y)) = 0 over every violation region, q = 1..r-2."""
    _require_bpf(sys, assume_bpf)
    amb, L, r = sys.ambient, sys.polarization, sys.r
    if r - 1 > rank_cap:
        raise BisyzError(
            f"rank {r - 1} exceeds the brute-force cap {rank_cap}; use the degree-gap method"
        )
    checked: list[tuple[int, int, int]] = []
    witnesses: list[Witness] = []
    for q in range(1, r - 1):
        for tw in violation_region(amb, L, r, q):
            h = _h0_sound(sys, q, tw)
            checked.append((q, tw.x, tw.y))
            if not h:
                continue
            if q == 1:
                witnesses.append(Witness(1, tw, h, compare_slope(amb, L, r, 1, tw)))
                continue
            log.info("cohomological obstruction at q=%d twist=%s for %s", q, tuple(tw), sys.content_hash())
            return StabilityVerdict(INCONCLUSIVE, BRUTE_FORCE, checked_region=checked,
                                    obstruction=(q, tw.x, tw.y, h))
        if q == 1 and witnesses:
            strict = [w for w in witnesses if w.comparison == "strict"]
            w = strict[0] if strict else witnesses[0]
            return StabilityVerdict(NOT_SEMISTABLE if strict else NOT_STABLE, BRUTE_FORCE, witness=w,
                                    checked_region=checked)
    return StabilityVerdict(STABLE, BRUTE_FORCE, checked_region=checked)


@dataclass
class Certificate:
    system: LinearSystem
    strategy: str
    bpf: BpfStatus
    verdict: StabilityVerdict
    steps: list = field(default_factory=list)
    timings_ms: dict = field(default_factory=dict)

    def to_json(self, with_timings: bool = True) -> dict:
        sys = self.system
        out = {
            "version": CERT_VERSION,
            "system": sys.to_json(),
            "strategy": self.strategy,
            "bpf": self.bpf.to_json(),
            "numerics": syzygy_bundle_numerics(sys.ambient, sys.polarization, sys.r).to_json(),
            "verdict": self.verdict.to_json(),
            "steps": [s.to_json() for s in self.steps],
        }
        if with_timings:
            out["timings_ms"] = dict(self.timings_ms)
        return out

    def content_hash(self) -> str:
        blob = json.dumps(self.to_json(with_timings=False), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def certify(sys: LinearSystem, strategy: str = "gap-then-brute", rank_cap: int = DEFAULT_RANK_CAP,
            assume_bpf: bool = False) -> Certificate:
    if strategy not in STRATEGIES:
        raise BisyzError(f"unknown strategy {strategy!r}; choose from degree-gap, brute-force, gap-then-brute")
    strategy = STRATEGIES[strategy]
    status = _require_bpf(sys, assume_bpf)
    steps, timings = [], {}

    def run(name, fn):
        start = time.perf_counter()
        v = fn()
        timings[name] = int(round((time.perf_counter() - start) * 1000))
        steps.append(v)
        return v

    if strategy == "DegreeGapOnly":
        final = run("degree_gap", lambda: certify_degree_gap(sys, assume_bpf))
    elif strategy == "BruteForceOnly":
        final = run("brute_force", lambda: certify_brute_force(sys, rank_cap, assume_bpf))
    else:
        final = run("degree_gap", lambda: certify_degree_gap(sys, assume_bpf))
        if final.kind != STABLE and sys.r - 1 <= rank_cap:
            final = run("brute_force", lambda: certify_brute_force(sys, rank_cap, assume_bpf))
    return Certificate(sys, strategy, status, final, steps, timings)


def certificate_from_json(data: dict) -> tuple[LinearSystem, dict]:
    if str(data.get("version")) != CERT_VERSION:
        raise BisyzError(f"unsupported certificate version {data.get('version')!r}")
    return LinearSystem.from_json(data["system"]), data["verdict"]


def recheck_certificate(data: dict) -> list[str]:
    """Re-verify every claim of a certificate from its system alone; returns the problems found."""
    problems: list[str] = []
    sys, verdict = certificate_from_json(data)
    amb, L, r = sys.ambient, sys.polarization, sys.r
    status = bpf_status(sys)
    if status.to_json() != data.get("bpf"):
        problems.append(f"bpf status mismatch: recomputed {status.to_json()}")
    numerics = syzygy_bundle_numerics(amb, L, r).to_json()
    if numerics != data.get("numerics"):
        problems.append(f"numerics mismatch: recomputed {numerics}")
    kind, method = verdict.get("kind"), verdict.get("method")
    if kind in (NOT_STABLE, NOT_SEMISTABLE):
        w = verdict.get("witness")
        if not w or w.get("q") != 1:
            return problems + ["refutation without a q = 1 witness"]
        tw = Bidegree(w["x"], w["y"])
        exact = "exact" if sys.prime is None else "auto"
        h = h0_twist(sys, tw, method=exact)
        if h <= 0 or h != w.get("h0"):
            problems.append(f"witness h0 recomputed as {h}, certificate says {w.get('h0')}")
        cmp = compare_slope(amb, L, r, 1, tw)
        if cmp is None or cmp != w.get("comparison"):
            problems.append(f"slope comparison recomputed as {cmp}, certificate says {w.get('comparison')}")
        if (kind == NOT_SEMISTABLE) != (cmp == "strict"):
            problems.append("verdict kind does not match the slope comparison")
    elif kind == STABLE and method == DEGREE_GAP:
        oriented = sys.transposed() if L.a < L.b else sys
        t = min_syzygy_total_degree(oriented)
        if t != verdict.get("t_min"):
            problems.append(f"t_min recomputed as {t}, certificate says {verdict.get('t_min')}")
        if not (r - 1) * t * min(amb.m, amb.n) > max(L.a, L.b) * (amb.m + amb.n):
            problems.append("degree-gap inequality fails")
    elif kind == STABLE and method == BRUTE_FORCE:
        region = {(q, tw.x, tw.y) for q in range(1, r - 1) for tw in violation_region(amb, L, r, q)}
        claimed = {tuple(c) for c in verdict.get("checked_region") or []}
        if not region <= claimed:
            problems.append(f"checked region misses {sorted(region - claimed)[:5]}")
        for q, x, y in sorted(region):
            h = _h0_sound(sys, q, (x, y))
            if h:
                problems.append(f"h0(wedge^{q} M_V({x},{y})) = {h}, not 0")
                break
    elif kind == STABLE:
        problems.append(f"unknown certification method {method!r}")
    elif kind != INCONCLUSIVE:
        problems.append(f"unknown verdict kind {kind!r}")
    return problems


__all__ = [
    "violation_region", "compare_slope", "certify_degree_gap", "certify_brute_force",
    "find_rank1_destabilizer", "certify", "Certificate", "StabilityVerdict", "Witness",
    "recheck_certificate", "NotBasepointFree", "STABLE", "NOT_STABLE", "NOT_SEMISTABLE",
    "INCONCLUSIVE", "DEGREE_GAP", "BRUTE_FORCE",
]
