"""Line-bundle cohomology on P^m x P^n and the tangent space to the moduli point of M_V."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import comb
from typing import Optional, Union

from .core import Ambient, BisyzError, Polarization, dim_graded_piece

NOT_ESTABLISHED = "not-established"


def h_projective(n: int, d: int, i: int) -> int:
    """h^i(P^n, O(d))."""
    if i == 0 and d >= 0:
        return comb(n + d, n)
    if i == n and d <= -n - 1:
        return comb(-d - 1, n)
    return 0


def h_product(amb: Ambient, deg, i: int) -> int:
    """h^i(P^m x P^n, O(p, q)) by Kunneth."""
    p, q = deg
    return sum(
        h_projective(amb.m, p, i1) * h_projective(amb.n, q, i - i1)
        for i1 in range(0, min(i, amb.m) + 1)
        if i - i1 <= amb.n
    )


def euler_projective(n: int, d: int) -> int:
    """chi(P^n, O(d)) = C(n+d, n) as a polynomial in d."""
    num = 1
    for k in range(1, n + 1):
        num *= d + k
    den = 1
    for k in range(1, n + 1):
        den *= k
    return num // den


@dataclass
class ModuliReport:
    m: int
    n: int
    a: int
    b: int
    r: int
    h0: int
    case_label: str
    hypotheses: list
    smooth_point: Union[bool, str]
    tangent_dim: Optional[int]
    rigid: Optional[bool]
    correction: int = 0
    cross_checks: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "parameters": {"m": self.m, "n": self.n, "a": self.a, "b": self.b, "r": self.r},
            "h0": self.h0,
            "case": self.case_label,
            "assumes": "M_V L-stable",
            "hypotheses": [[name, value] for name, value in self.hypotheses],
            "smooth_point": self.smooth_point,
            "tangent_dim": self.tangent_dim,
            "correction": self.correction,
            "rigid": self.rigid,
            "cross_checks": self.cross_checks,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def moduli_tangent_dim(amb: Ambient, L: Polarization, r: int) -> ModuliReport:
    """Tangent dimension at [M_V], assuming M_V is L-stable."""
    h0 = dim_graded_piece(amb, (L.a, L.b))
    d = amb.m + amb.n
    if not d + 1 <= r <= h0:
        raise BisyzError(f"r = {r} outside {d + 1}..{h0}")
    minus_L = (-L.a, -L.b)
    hyps = [
        ("h1(O_X)", h_product(amb, (0, 0), 1)),
        ("h2(O_X)", h_product(amb, (0, 0), 2)),
        ("h3(O_X)", h_product(amb, (0, 0), 3)),
        ("h1(O_X(L))", h_product(amb, (L.a, L.b), 1)),
    ]
    base_ok = all(v == 0 for _, v in hyps)
    smooth: Union[bool, str] = True if base_ok else NOT_ESTABLISHED
    correction = 0
    checks = {}
    if d >= 4:
        case = "a"
        checks["h2(O_X(-L))"] = h_product(amb, minus_L, 2)
    elif d == 3 and r == h0:
        case = "b"
    elif d == 3:
        case = "c"
        h3 = h_product(amb, minus_L, 3)
        hyps.append(("h3(O_X(-L))", h3))
        if h3:
            smooth = NOT_ESTABLISHED
    else:
        case = "d"
        h2 = h_product(amb, minus_L, 2)
        correction = r * h2
        checks["h2(O_X(-L))"] = h2
        checks["h3(O_X(-L))"] = h_product(amb, minus_L, 3)
    if smooth is True:
        tangent = r * (h0 - r) + correction
        rigid = tangent == 0
    else:
        tangent, rigid = None, None
    return ModuliReport(amb.m, amb.n, L.a, L.b, r, h0, case, hyps, smooth, tangent, rigid, correction, checks)


__all__ = ["h_projective", "h_product", "euler_projective", "moduli_tangent_dim", "ModuliReport", "NOT_ESTABLISHED"]
