"""Range classification in r, the degree t_r, and monomial systems with a large syzygy gap.

Throughout a' = max(a, b), b' = min(a, b) and mu = min(m, n). For r with

    a'(m+n)/(b' mu) + 1 < r <= a'(m+n)/mu + 1                       (range B)

the goal is a monomial W in R_(a,b) containing every pure power, with no syzygy of total
twist below t_r and dim W >= a'(m+n)/((t_r - 1) mu) + 1. Any r-subset of W through the pure
powers then passes the degree-gap test.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .core import (
    Ambient,
    BisyzError,
    Monomial,
    Polarization,
    dim_graded_piece,
    enumerate_monomials,
    fraction_text,
    lcm_gap,
    pure_powers,
)
from .linsys import LinearSystem, monomial_system
from .syzygy import min_syzygy_total_degree

INVALID_TOO_SMALL = "InvalidTooSmall"
GAP_GENERAL = "GapGeneral"
RANGE_B = "RangeB"
RANGE_A = "RangeA"
INVALID_TOO_LARGE = "InvalidTooLarge"

ALTERNATION = "alternation"
EPSILON_TAIL = "epsilon_tail"
PACKING = "packing_repair"


class RangeError(BisyzError):
    def __init__(self, msg: str, range_class: "RangeClass"):
        super().__init__(msg)
        self.range_class = range_class


class ConstructionUnavailable(BisyzError):
    pass


class ConstructionError(BisyzError):
    def __init__(self, msg: str, recipe: "ConstructionRecipe"):
        super().__init__(msg)
        self.recipe = recipe


def _normalized(m, n, a, b):
    return max(a, b), min(a, b), min(m, n)


def general_threshold(m, n, a, b) -> Fraction:
    a1, b1, mu = _normalized(m, n, a, b)
    return Fraction(a1 * (m + n), b1 * mu) + 1


def range_b_upper(m, n, a, b) -> Fraction:
    a1, _, mu = _normalized(m, n, a, b)
    return Fraction(a1 * (m + n), mu) + 1


@dataclass(frozen=True)
class RangeClass:
    value: str
    threshold: Fraction
    monomial_gap_note: bool
    gap_range_empty: bool  # threshold < m+n+1: no GapGeneral dimensions at all
    monomial_gap_empty: bool  # threshold < (m+1)(n+1): every bpf monomial V has r in the stable range
    h0: int

    @property
    def predicted_stable(self) -> bool:
        return self.value in (RANGE_A, RANGE_B)

    @property
    def prediction(self) -> str:
        if self.predicted_stable:
            return "stable"
        if self.value == GAP_GENERAL:
            return "open"
        return "n/a"

    def to_json(self) -> dict:
        return {
            "class": self.value,
            "threshold": fraction_text(self.threshold),
            "monomial_gap_note": self.monomial_gap_note,
            "gap_range_empty": self.gap_range_empty,
            "monomial_gap_empty": self.monomial_gap_empty,
            "h0": self.h0,
            "prediction": self.prediction,
        }


def range_classify(m: int, n: int, a: int, b: int, r: int) -> RangeClass:
    Ambient(m, n), Polarization(a, b)
    a1, b1, mu = _normalized(m, n, a, b)
    h0 = dim_graded_piece(Ambient(m, n), (a, b))
    threshold = general_threshold(m, n, a, b)
    if r > h0:
        value = INVALID_TOO_LARGE
    elif r <= m + n:
        value = INVALID_TOO_SMALL
    elif r <= threshold:
        value = GAP_GENERAL
    elif r <= range_b_upper(m, n, a, b):
        value = RANGE_B
    else:
        value = RANGE_A
    return RangeClass(
        value=value,
        threshold=threshold,
        monomial_gap_note=r < (m + 1) * (n + 1),
        gap_range_empty=a1 < mu * b1,
        monomial_gap_empty=a1 * (m + n) < (m * n + m + n) * mu * b1,
        h0=h0,
    )


def t_r(m: int, n: int, a: int, b: int, r: int) -> int:
    """The unique t with a'(m+n)/(t mu) + 1 < r <= a'(m+n)/((t-1) mu) + 1."""
    rc = range_classify(m, n, a, b, r)
    if rc.value != RANGE_B:
        raise RangeError(f"r = {r} is in {rc.value}, not in range B for {(m, n, a, b)}", rc)
    a1, b1, mu = _normalized(m, n, a, b)
    # (r-1) mu t > a'(m+n) >= (r-1) mu (t-1)
    s = (r - 1) * mu
    t = a1 * (m + n) // s + 1
    assert Fraction(a1 * (m + n), t * mu) + 1 < r <= Fraction(a1 * (m + n), (t - 1) * mu) + 1
    assert 2 <= t <= b1
    return t


def epsilon(a1: int, t: int) -> int:
    if t < 2:
        raise BisyzError("epsilon needs t >= 2")
    return (a1 // (t - 1)) % 2


def dimension_bound(m, n, a, b, t) -> Fraction:
    a1, _, mu = _normalized(m, n, a, b)
    return Fraction(a1 * (m + n), (t - 1) * mu) + 1


# ----- monomial families -------------------------------------------------------------------

def _mono(amb: Ambient, xs: dict, ys: dict) -> Monomial:
    alpha = [0] * (amb.m + 1)
    beta = [0] * (amb.n + 1)
    for i, e in xs.items():
        alpha[i] += e
    for j, e in ys.items():
        beta[j] += e
    return Monomial(tuple(alpha), tuple(beta))


def _ladder(amb, a, b, t, variant, eps, xp, xq, ys, yt, ks, shift=0, base=0, first=1):
    """Members x_p^(a - d) x_q^d y_s^(b - e) y_t^e with d = shift + k(t-1) for k in ks.

    e = base + offset with a 0/1 offset: the plain alternation starts at ``first``, the
    epsilon-anchored variant ends at ``eps`` and alternates backwards.
    """
    ks = list(ks)
    out = []
    for j, k in enumerate(ks):
        if variant == ALTERNATION:
            off = (first + j) % 2
        else:
            off = (eps + len(ks) - 1 - j) % 2
        e = base + off
        d = shift + k * (t - 1)
        out.append(_mono(amb, {xp: a - d, xq: d}, {ys: b - e, yt: e}))
    return out


def _case_a(amb, a, b, t, K, variant, eps):
    fam_a = _ladder(amb, a, b, t, variant, eps, 0, 1, 0, 1, range(1, K), base=0, first=1)
    fam_b = _ladder(amb, a, b, t, variant, eps, 0, 1, 0, 1, range(0, K), shift=1, base=t - 1, first=0)
    return [("A", fam_a), ("B", fam_b)]


def _case_b(amb, a, b, t, K, variant, eps, blocks):
    # x-side is the large one; only y0, y1 appear
    fams = []
    for i in range(1, blocks):
        fams.append((f"A{i}", _ladder(amb, a, b, t, variant, eps, i - 1, i, 0, 1, range(1, K), base=0, first=1)))
        fams.append((f"B{i}", _ladder(amb, a, b, t, variant, eps, i, i + 1, 0, 1, range(1, K), base=1, first=1)))
    return fams


def _case_c(amb, a, b, t, K, variant, eps, blocks):
    # y-side is the large one; only x0, x1 appear; the last block wraps around to y0
    fams = []
    for i in range(1, blocks + 1):
        nxt = i + 1 if i < blocks else 0
        fams.append((f"A{i}", _ladder(amb, a, b, t, variant, eps, 0, 1, i, nxt, range(1, K), base=0, first=1)))
    return fams


@dataclass
class ConstructionRecipe:
    m: int
    n: int
    a: int
    b: int
    r: int
    case_label: str
    subcase: str
    t_r: int
    epsilon: int
    variant: str
    tail_adjusted: bool
    orientation: str
    monomials: list
    families: dict = field(default_factory=dict)
    deleted: list = field(default_factory=list)
    report: dict = field(default_factory=dict)
    attempts: list = field(default_factory=list)

    @property
    def N(self) -> int:
        return len(self.monomials)

    @property
    def verified(self) -> bool:
        rep = self.report
        return bool(rep) and all(rep[k] for k in ("distinct", "pure_powers", "t_min_ok", "bound_met"))

    def system(self) -> LinearSystem:
        return monomial_system(Ambient(self.m, self.n), Polarization(self.a, self.b), self.monomials)

    def to_json(self) -> dict:
        return {
            "parameters": {"m": self.m, "n": self.n, "a": self.a, "b": self.b, "r": self.r},
            "case": self.case_label,
            "subcase": self.subcase,
            "t_r": self.t_r,
            "epsilon": self.epsilon,
            "variant": self.variant,
            "tail_adjusted": self.tail_adjusted,
            "orientation": self.orientation,
            "N": self.N,
            "monomials": [u.text() for u in sorted(self.monomials)],
            "deleted": [u.text() for u in self.deleted],
            "family_sizes": {k: len(v) for k, v in self.families.items()},
            "verification": self.report,
            "attempts": self.attempts,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def verify_recipe(amb: Ambient, L: Polarization, monos: list, t: int) -> dict:
    """Distinctness, pure powers, t_min >= t via the syzygy scan, and the dimension bound."""
    a1 = max(L.a, L.b)
    distinct = len(set(monos)) == len(monos) and all(u.bidegree == (L.a, L.b) for u in monos)
    pure = set(pure_powers(amb, L)) <= set(monos)
    t_min = None
    if distinct and len(monos) >= 2:
        t_min = min_syzygy_total_degree(monomial_system(amb, L, monos))
    bound = dimension_bound(amb.m, amb.n, L.a, L.b, t)
    return {
        "distinct": distinct,
        "pure_powers": pure,
        "t_min": t_min,
        "t_min_ok": t_min is not None and t_min >= t,
        "bound": fraction_text(bound),
        "N": len(monos),
        "bound_met": len(monos) >= bound,
        "a_normalized": a1,
    }


def _family_candidate(amb, L, t, variant):
    """Emit the pure powers and the block families for the oriented (a >= b) setting."""
    m, n, a, b = amb.m, amb.n, L.a, L.b
    K = a // (t - 1)
    eps = epsilon(a, t)
    even = a % (t - 1) == 0 and K % 2 == 0
    if m == 1 and n == 1:
        case = "A"
        fams = _case_a(amb, a, b, t, K, variant, eps)
    elif min(m, n) == 1 and m > 1:
        case = "B"
        fams = _case_b(amb, a, b, t, K, variant, eps, m)
    elif min(m, n) == 1:
        case = "C"
        fams = _case_c(amb, a, b, t, K, variant, eps, n)
    else:
        case = "D"
        fams = _case_b(amb, a, b, t, K, variant, eps, m) if m >= n else _case_c(amb, a, b, t, K, variant, eps, n)
    subcase = "none"
    if case == "A":
        subcase = "WideB" if 2 * (t - 1) <= b else "NarrowB"
    deleted = []
    kept = {}
    for name, members in fams:
        members = list(members)
        if even and name.startswith("A") and members:
            deleted.append(members.pop())
        if subcase == "NarrowB" and name == "B" and members:
            deleted.append(members.pop(0))
        kept[name] = members
    order = []
    for u in pure_powers(amb, L):
        order.append(u)
    for name, _ in fams:
        order.extend(kept[name])
    return case, subcase, eps, {name: list(mem) for name, mem in fams}, deleted, order


def _packing(amb, L, t, seeds):
    """Pure powers, then seed monomials, then the whole basis in canonical order, keeping
    each monomial whose lcm gap to everything kept is at least t."""
    chosen: list[Monomial] = []
    seen = set()
    for u in list(pure_powers(amb, L)) + list(seeds) + enumerate_monomials(amb, (L.a, L.b)):
        if u in seen:
            continue
        seen.add(u)
        if all(lcm_gap(u, v) >= t for v in chosen):
            chosen.append(u)
    return chosen


def build_W(m: int, n: int, a: int, b: int, r: int, strict: bool = True) -> ConstructionRecipe:
    """A verified monomial W for r in range B.

    The block families are tried with the plain alternation of y-exponents, then with the
    tail anchored by epsilon; if both fail the conditions, a greedy repair packs monomials at
    pairwise lcm gap >= t_r around the family members. With ``strict`` an unmet dimension
    bound raises ConstructionError; otherwise the best verified packing is returned.
    """
    t = t_r(m, n, a, b, r)
    amb, L = Ambient(m, n), Polarization(a, b)
    swapped = a < b
    o_amb, o_L = (amb.swapped(), L.swapped()) if swapped else (amb, L)

    def finish(recipe_monos):
        if swapped:
            return [u.transposed() for u in recipe_monos]
        return recipe_monos

    attempts = []
    last = None
    family_monos: list[Monomial] = []
    for variant in (ALTERNATION, EPSILON_TAIL):
        case, subcase, eps, fams, deleted, order = _family_candidate(o_amb, o_L, t, variant)
        family_monos.extend(u for u in order if u not in family_monos)
        distinct_order = len(set(order)) == len(order)
        monos = order if distinct_order else list(dict.fromkeys(order))
        report = verify_recipe(o_amb, o_L, order if distinct_order else monos, t)
        if not distinct_order:
            report["distinct"] = False
        attempts.append({"variant": variant, **{k: report[k] for k in ("distinct", "t_min", "t_min_ok", "N", "bound_met")}})
        recipe = ConstructionRecipe(
            m, n, a, b, r, case, subcase, t, eps, variant, variant == EPSILON_TAIL,
            "swapped" if swapped else "as-given", finish(monos), fams, finish(deleted), report,
        )
        last = recipe
        if distinct_order and report["pure_powers"] and report["t_min_ok"] and report["bound_met"]:
            recipe.attempts = attempts
            return recipe

    seeded = _packing(o_amb, o_L, t, family_monos)
    plain = _packing(o_amb, o_L, t, [])
    bound = dimension_bound(o_amb.m, o_amb.n, o_L.a, o_L.b, t)
    monos = seeded if len(seeded) >= bound or len(seeded) >= len(plain) else plain
    report = verify_recipe(o_amb, o_L, monos, t)
    attempts.append({"variant": PACKING, **{k: report[k] for k in ("distinct", "t_min", "t_min_ok", "N", "bound_met")}})
    recipe = ConstructionRecipe(
        m, n, a, b, r, last.case_label, last.subcase, t, last.epsilon, PACKING, True,
        last.orientation, finish(monos), last.families, [], report, attempts,
    )
    if not (report["distinct"] and report["pure_powers"] and report["t_min_ok"]):
        raise ConstructionError(f"packing lost a defining condition: {report}", recipe)  # pragma: no cover
    if strict and not report["bound_met"]:
        raise ConstructionError(
            f"no verified W of dimension >= {report['bound']} for {(m, n, a, b, r)}: "
            f"best has N = {report['N']} at t_r = {t}; candidates {[u.text() for u in sorted(recipe.monomials)]}",
            recipe,
        )
    return recipe


def build_V(m: int, n: int, a: int, b: int, r: int) -> LinearSystem:
    """Pure powers plus the first r - (m+1)(n+1) non-pure monomials of the W recipe."""
    floor = (m + 1) * (n + 1)
    if r < floor:
        raise ConstructionUnavailable(
            f"r = {r} < (m+1)(n+1) = {floor}: no basepoint-free monomial system of this dimension"
        )
    recipe = build_W(m, n, a, b, r, strict=False)
    if r > recipe.N:
        raise ConstructionUnavailable(
            f"r = {r} exceeds the verified W dimension N = {recipe.N} "
            f"(bound {recipe.report['bound']}, t_r = {recipe.t_r})"
        )
    amb, L = Ambient(m, n), Polarization(a, b)
    pure = set(pure_powers(amb, L))
    extra = [u for u in recipe.monomials if u not in pure][: r - floor]
    sys = monomial_system(amb, L, sorted(pure) + extra)
    if min_syzygy_total_degree(sys) < recipe.t_r:
        raise ConstructionError("subsystem lost the syzygy gap", recipe)  # pragma: no cover
    return sys


def packing_number(m: int, n: int, a: int, b: int, t: int) -> int:
    """Size of the greedy gap-t packing through the pure powers (a lower bound on the optimum)."""
    amb, L = Ambient(m, n), Polarization(a, b)
    if a < b:
        amb, L = amb.swapped(), L.swapped()
    return len(_packing(amb, L, t, []))


def pairwise_gap(monos) -> int:
    return min(lcm_gap(u, v) for u, v in combinations(monos, 2))


__all__ = [
    "range_classify", "RangeClass", "t_r", "epsilon", "build_W", "build_V", "ConstructionRecipe",
    "ConstructionUnavailable", "ConstructionError", "RangeError", "dimension_bound",
    "general_threshold", "range_b_upper", "verify_recipe", "packing_number",
    "INVALID_TOO_SMALL", "GAP_GENERAL", "RANGE_B", "RANGE_A", "INVALID_TOO_LARGE",
]
