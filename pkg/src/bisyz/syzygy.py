"""Global sections of twists of M_V and of its exterior powers.

For a basepoint-free V = <f_1..f_r> in R_(a,b),

    H^0(wedge^q M_V (x, y)) = ker( wedge^q V (x) R_(x,y) -> wedge^(q-1) V (x) R_(x+a, y+b) ),

the Koszul contraction e_I (x) g -> sum_j (-1)^j e_(I - i_j) (x) f_(i_j) g. For q = 1 this is the
space of syzygies of bidegree (a+x, b+y). Monomial systems are finely graded by Z^(m+n+2),
which splits every such matrix into small blocks.
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

from .core import (
    BisyzError,
    Bidegree,
    dim_graded_piece,
    enumerate_monomials,
    lcm_gap,
    scan_key,
    variables,
)
from .linalg import DEFAULT_PRIME, kernel_basis_mod_p, rank_mod_p, rank_rational
from .linsys import MONOMIAL, LinearSystem

METHODS = ("auto", "exact", "modp", "count")


def _twist(sys: LinearSystem, twist) -> tuple[int, int, int, int]:
    x, y = twist
    return x, y, sys.polarization.a + x, sys.polarization.b + y


def _field_rank(sys: LinearSystem, rows, method: str) -> int:
    p = sys.prime
    if p is not None:
        return rank_mod_p(rows, p)
    if method == "exact":
        return rank_rational(rows)
    return rank_mod_p(rows, DEFAULT_PRIME)


def evaluation_columns(sys: LinearSystem, twist):
    """Columns of (g_i) -> sum g_i f_i on R_(x,y)^r, indexed by (i, u).

    Returns (column labels, codomain basis, columns as {row: value}).
    """
    x, y, X, Y = _twist(sys, twist)
    amb = sys.ambient
    src = enumerate_monomials(amb, (x, y))
    dst = enumerate_monomials(amb, (X, Y))
    row_of = {w: k for k, w in enumerate(dst)}
    labels, cols = [], []
    for i, form in enumerate(sys.forms()):
        for u in src:
            col: dict[int, object] = {}
            for mono, c in form.items():
                k = row_of[mono * u]
                col[k] = col.get(k, 0) + c
            labels.append((i, u))
            cols.append({k: v for k, v in col.items() if v})
    return labels, dst, cols


def _h0_count(sys: LinearSystem, twist) -> int:
    x, y, _, _ = _twist(sys, twist)
    src = enumerate_monomials(sys.ambient, (x, y))
    images = {f * u for f in sys.support for u in src}
    return sys.r * len(src) - len(images)


def h0_twist(sys: LinearSystem, twist, method: str = "auto") -> int:
    """h^0(M_V(x, y)).

    ``method``: "auto" counts distinct products for monomial systems and ranks over F_p
    otherwise; "exact" ranks over Q (prime-field systems always rank in their own field);
    "modp" forces F_p; "count" forces the monomial fast path. Over F_p the result is an
    upper bound for the rational answer, and equal to it for all but finitely many primes.
    """
    if method not in METHODS:
        raise BisyzError(f"unknown method {method!r}")
    x, y = twist
    if x < 0 or y < 0:
        return 0
    if sys.kind == MONOMIAL and method in ("auto", "count"):
        return _h0_count(sys, twist)
    if method == "count":
        raise BisyzError("the counting path only applies to monomial systems")
    _, _, cols = evaluation_columns(sys, twist)
    if not cols:
        return 0
    if sys.kind == MONOMIAL and method == "auto":
        method = "exact"
    return len(cols) - _field_rank(sys, cols, method)


def _koszul_basis(sys: LinearSystem, q: int, twist):
    amb = sys.ambient
    return [(I, u) for I in combinations(range(sys.r), q) for u in enumerate_monomials(amb, twist)]


def koszul_differential(sys: LinearSystem, q: int, twist):
    """Matrix of wedge^q V (x) R_(x,y) -> wedge^(q-1) V (x) R_(x+a, y+b).

    Returns (domain basis, codomain basis, columns); basis entries are (I, monomial) with I a
    sorted index tuple, columns map codomain positions to values.
    """
    if q < 1 or q > sys.r:
        raise BisyzError(f"exterior power q = {q} out of range 1..{sys.r}")
    x, y, X, Y = _twist(sys, twist)
    forms = sys.forms()
    dom = _koszul_basis(sys, q, (x, y))
    cod = _koszul_basis(sys, q - 1, (X, Y))
    pos = {b: k for k, b in enumerate(cod)}
    cols = []
    for I, u in dom:
        col: dict[int, object] = {}
        for j, i in enumerate(I):
            J = I[:j] + I[j + 1:]
            sign = -1 if j % 2 else 1
            for mono, c in forms[i].items():
                k = pos[(J, mono * u)]
                col[k] = col.get(k, 0) + sign * c
        cols.append({k: v for k, v in col.items() if v})
    return dom, cod, cols


def _monomial_wedge_h0(sys: LinearSystem, q: int, twist) -> int:
    # fine degree of e_I (x) u is u * prod_{i in I} f_i; the differential preserves it
    src = enumerate_monomials(sys.ambient, twist)
    exps = [f.exponents for f in sys.support]
    blocks: dict[tuple, list] = defaultdict(list)
    for I in combinations(range(sys.r), q):
        base = [sum(col) for col in zip(*(exps[i] for i in I))]
        for u in src:
            deg = tuple(b + e for b, e in zip(base, u.exponents))
            blocks[deg].append((I, u.exponents))
    total = 0
    for members in blocks.values():
        if q == 1:
            # one column per f_i dividing the fine degree, all hitting the same target
            total += len(members) - 1
            continue
        rows: dict[tuple, dict[int, int]] = defaultdict(dict)
        for c, (I, u) in enumerate(members):
            for j, i in enumerate(I):
                J = I[:j] + I[j + 1:]
                target = (J, tuple(p + e for p, e in zip(exps[i], u)))
                rows[target][c] = -1 if j % 2 else 1
        total += len(members) - rank_rational(list(rows.values()))
    return total


def h0_wedge_twist(sys: LinearSystem, q: int, twist, method: str = "auto") -> int:
    """h^0(wedge^q M_V (x, y)) for 1 <= q <= r-1."""
    if method not in METHODS:
        raise BisyzError(f"unknown method {method!r}")
    if q < 1 or q > sys.r - 1:
        raise BisyzError(f"exterior power q = {q} outside 1..{sys.r - 1}")
    x, y = twist
    if x < 0 or y < 0:
        return 0
    if sys.kind == MONOMIAL and method in ("auto", "count"):
        return _monomial_wedge_h0(sys, q, (x, y))
    if method == "count":
        raise BisyzError("the counting path only applies to monomial systems")
    _, _, cols = koszul_differential(sys, q, (x, y))
    if not cols:
        return 0
    if sys.kind == MONOMIAL and method == "auto":
        method = "exact"
    return len(cols) - _field_rank(sys, cols, method)


def twists_by_total(max_total: int, min_total: int = 0):
    """Effective twists in scan order: total degree, then x."""
    for s in range(min_total, max_total + 1):
        for x in range(s + 1):
            yield Bidegree(x, s - x)


def first_syzygy_twist(sys: LinearSystem, method: str = "auto") -> Bidegree:
    """The first twist in scan order carrying a nonzero syzygy."""
    a, b = sys.polarization.a, sys.polarization.b
    for tw in twists_by_total(a + b, 1):
        if h0_twist(sys, tw, method) > 0:
            return tw
    # a Koszul relation f_j e_i - f_i e_j always exists at (a, b) once r >= 2
    raise BisyzError("no syzygy up to total degree a+b; the system needs r >= 2")


def min_syzygy_total_degree(sys: LinearSystem, method: str = "auto") -> int:
    """t_min: least x+y with h^0(M_V(x,y)) > 0.

    Over F_p (general systems, default method) the value can only be smaller than the
    rational one, so degree-gap certificates built on it stay sound.
    """
    return first_syzygy_twist(sys, method).total


def pairwise_lcm_gaps(sys: LinearSystem) -> list[int]:
    if sys.kind != MONOMIAL:
        raise BisyzError("lcm gaps are defined for monomial systems")
    return [lcm_gap(u, v) for u, v in combinations(sys.support, 2)]


def taylor_bound(sys: LinearSystem) -> int:
    """Largest pairwise lcm twist; minimal syzygies of a monomial system live at or below it."""
    return max(pairwise_lcm_gaps(sys))


@dataclass
class MinimalGenerators:
    counts: dict[Bidegree, int]
    bound: int
    truncated: bool

    def multiset(self) -> list[Bidegree]:
        out = []
        for deg in sorted(self.counts, key=scan_key):
            out.extend([deg] * self.counts[deg])
        return out

    def to_json(self) -> list:
        return [[d.x, d.y, c] for d, c in sorted(self.counts.items(), key=lambda kv: scan_key(kv[0]))]


def _kernel_at(sys: LinearSystem, twist):
    labels, dst, cols = evaluation_columns(sys, twist)
    p = sys.prime or DEFAULT_PRIME
    return labels, kernel_basis_mod_p(cols, len(dst), p)


def minimal_generator_bidegrees(sys: LinearSystem, bound: Optional[int] = None) -> MinimalGenerators:
    """Number of minimal generators of syz(f_1..f_r) in each twist (x, y) with x+y <= bound.

    Count at D = dim Syz_D - dim(sum over variables v of v * Syz_(D - deg v)), the second term
    being one rank of the stacked, multiplied kernel bases. Ranks are taken over F_p.
    """
    a, b = sys.polarization.a, sys.polarization.b
    default = taylor_bound(sys) if sys.kind == MONOMIAL and sys.r >= 2 else a + b
    if bound is None:
        bound = default
    truncated = bound < default or sys.kind != MONOMIAL
    p = sys.prime or DEFAULT_PRIME
    amb = sys.ambient
    var_list = variables(amb)
    kernels: dict[Bidegree, tuple] = {}
    counts: dict[Bidegree, int] = {}
    for tw in twists_by_total(bound, 1):
        labels, basis = _kernel_at(sys, tw)
        kernels[tw] = (labels, basis)
        if not basis:
            continue
        col_of = {lab: k for k, lab in enumerate(labels)}
        stacked = []
        for v in var_list:
            lower = Bidegree(tw.x - v.bidegree.x, tw.y - v.bidegree.y)
            if not lower.effective() or lower not in kernels:
                continue
            low_labels, low_basis = kernels[lower]
            for vec in low_basis:
                stacked.append({
                    col_of[(low_labels[k][0], low_labels[k][1] * v)]: c for k, c in vec.items()
                })
        generated = rank_mod_p(stacked, p) if stacked else 0
        fresh = len(basis) - generated
        if fresh:
            counts[tw] = fresh
    return MinimalGenerators(counts, bound, truncated)


@dataclass
class SyzygyProfile:
    system: str
    table: dict[Bidegree, int]
    t_min: int
    mingens: Optional[MinimalGenerators] = None
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {
            "system": self.system,
            "table": [[d.x, d.y, h] for d, h in sorted(self.table.items(), key=lambda kv: scan_key(kv[0]))],
            "t_min": self.t_min,
        }
        if self.mingens is not None:
            out["mingens"] = self.mingens.to_json()
            if self.mingens.truncated:
                out["truncated_at"] = self.mingens.bound
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def syzygy_profile(sys: LinearSystem, max_total: Optional[int] = None, with_mingens: bool = False,
                   method: str = "auto") -> SyzygyProfile:
    a, b = sys.polarization.a, sys.polarization.b
    if max_total is None:
        max_total = a + b
    table = {tw: h0_twist(sys, tw, method) for tw in twists_by_total(max_total)}
    t_min = min_syzygy_total_degree(sys, method)
    mingens = minimal_generator_bidegrees(sys) if with_mingens else None
    return SyzygyProfile(sys.content_hash(), table, t_min, mingens)


__all__ = [
    "h0_twist", "h0_wedge_twist", "koszul_differential", "evaluation_columns",
    "min_syzygy_total_degree", "first_syzygy_twist", "minimal_generator_bidegrees",
    "MinimalGenerators", "SyzygyProfile", "syzygy_profile", "twists_by_total",
    "taylor_bound", "pairwise_lcm_gaps", "dim_graded_piece",
]
