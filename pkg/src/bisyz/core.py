"""Bigraded Cox ring of P^m x P^n: monomials, graded dimensions, intersection numbers.

The ring is K[x_0..x_m, y_0..y_n] with deg x_i = (1, 0) and deg y_j = (0, 1).
Everything here is exact integer arithmetic; slopes are :class:`fractions.Fraction`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterator, NamedTuple


class BisyzError(ValueError):
    """Precondition violation (bad range, bad input, non-bpf system, ...)."""


@dataclass(frozen=True)
class Ambient:
    m: int
    n: int

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise BisyzError(f"need m, n >= 1, got ({self.m}, {self.n})")

    @property
    def dim(self) -> int:
        return self.m + self.n

    def swapped(self) -> "Ambient":
        return Ambient(self.n, self.m)


@dataclass(frozen=True)
class Polarization:
    a: int
    b: int

    def __post_init__(self):
        if self.a < 1 or self.b < 1:
            raise BisyzError(f"O(a,b) is ample only for a, b >= 1, got ({self.a}, {self.b})")

    def swapped(self) -> "Polarization":
        return Polarization(self.b, self.a)


class Bidegree(NamedTuple):
    x: int
    y: int

    @property
    def total(self) -> int:
        return self.x + self.y

    def effective(self) -> bool:
        return self.x >= 0 and self.y >= 0


def scan_key(deg) -> tuple[int, int]:
    """Sort key for twists: total degree first, then x."""
    return (deg[0] + deg[1], deg[0])


@dataclass(frozen=True)
class Monomial:
    alpha: tuple[int, ...]
    beta: tuple[int, ...]

    def __post_init__(self):
        if any(e < 0 for e in self.alpha) or any(e < 0 for e in self.beta):
            raise BisyzError(f"negative exponent in {self.alpha}, {self.beta}")

    @property
    def bidegree(self) -> Bidegree:
        return Bidegree(sum(self.alpha), sum(self.beta))

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.alpha) - 1, len(self.beta) - 1)

    @property
    def exponents(self) -> tuple[int, ...]:
        return self.alpha + self.beta

    def key(self) -> tuple[int, ...]:
        # x0 > x1 > ... > y0 > y1 > ...: larger exponents on earlier variables come first
        return tuple(-e for e in self.alpha + self.beta)

    def __lt__(self, other: "Monomial") -> bool:
        return self.key() < other.key()

    def _check(self, other: "Monomial"):
        if self.shape != other.shape:
            raise BisyzError(f"monomials live in different rings: {self.shape} vs {other.shape}")

    def __mul__(self, other: "Monomial") -> "Monomial":
        self._check(other)
        return Monomial(
            tuple(p + q for p, q in zip(self.alpha, other.alpha)),
            tuple(p + q for p, q in zip(self.beta, other.beta)),
        )

    def divides(self, other: "Monomial") -> bool:
        self._check(other)
        return all(p <= q for p, q in zip(self.exponents, other.exponents))

    def quotient(self, other: "Monomial") -> "Monomial":
        """self / other; raises if other does not divide self."""
        if not other.divides(self):
            raise BisyzError(f"{other} does not divide {self}")
        return Monomial(
            tuple(p - q for p, q in zip(self.alpha, other.alpha)),
            tuple(p - q for p, q in zip(self.beta, other.beta)),
        )

    def lcm(self, other: "Monomial") -> "Monomial":
        self._check(other)
        return Monomial(
            tuple(max(p, q) for p, q in zip(self.alpha, other.alpha)),
            tuple(max(p, q) for p, q in zip(self.beta, other.beta)),
        )

    def transposed(self) -> "Monomial":
        """Image under the factor swap P^m x P^n -> P^n x P^m."""
        return Monomial(self.beta, self.alpha)

    def text(self) -> str:
        parts = []
        for name, exps in (("x", self.alpha), ("y", self.beta)):
            for i, e in enumerate(exps):
                if e == 1:
                    parts.append(f"{name}{i}")
                elif e > 1:
                    parts.append(f"{name}{i}^{e}")
        return " ".join(parts) if parts else "1"

    def __str__(self) -> str:
        return self.text()

    def __repr__(self) -> str:
        return f"Monomial({self.text()!r})"


def monomial_lcm(u: Monomial, v: Monomial) -> Monomial:
    return u.lcm(v)


def monomial_divides(u: Monomial, v: Monomial) -> bool:
    return u.divides(v)


def variable(amb: Ambient, name: str, index: int) -> Monomial:
    alpha = [0] * (amb.m + 1)
    beta = [0] * (amb.n + 1)
    (alpha if name == "x" else beta)[index] = 1
    return Monomial(tuple(alpha), tuple(beta))


def variables(amb: Ambient) -> list[Monomial]:
    """All m+n+2 variables, x's first."""
    return [variable(amb, "x", i) for i in range(amb.m + 1)] + [
        variable(amb, "y", j) for j in range(amb.n + 1)
    ]


_TERM = re.compile(r"\s*([xy])(\d+)(?:\^(\d+))?")


def parse_monomial(text: str, amb: Ambient) -> Monomial:
    """Parse e.g. ``"x0^2 y1"``; unmentioned variables get exponent 0."""
    alpha = [0] * (amb.m + 1)
    beta = [0] * (amb.n + 1)
    s = text.strip()
    if s == "1":
        return Monomial(tuple(alpha), tuple(beta))
    if not s:
        raise BisyzError("empty monomial")
    pos = 0
    while pos < len(s):
        match = _TERM.match(s, pos)
        if match is None or match.end() == pos:
            raise BisyzError(f"cannot parse monomial {text!r} at position {pos}")
        name, idx, exp = match.group(1), int(match.group(2)), match.group(3)
        target, bound = (alpha, amb.m) if name == "x" else (beta, amb.n)
        if idx > bound:
            raise BisyzError(f"variable {name}{idx} out of range in {text!r} for P^{amb.m} x P^{amb.n}")
        target[idx] += 1 if exp is None else int(exp)
        pos = match.end()
        while pos < len(s) and s[pos].isspace():
            pos += 1
    return Monomial(tuple(alpha), tuple(beta))


def parse_monomial_list(text: str, amb: Ambient) -> list[Monomial]:
    """Comma-separated monomials, order preserved."""
    items = [t for t in text.split(",")]
    if any(not t.strip() for t in items):
        raise BisyzError(f"empty entry in monomial list {text!r}")
    return [parse_monomial(t, amb) for t in items]


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    # descending in lexicographic order
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def dim_graded_piece(amb: Ambient, deg) -> int:
    p, q = deg
    if p < 0 or q < 0:
        return 0
    return comb(amb.m + p, amb.m) * comb(amb.n + q, amb.n)


def enumerate_monomials(amb: Ambient, deg) -> list[Monomial]:
    """Basis of R_(p,q) in canonical order; empty for non-effective degrees."""
    p, q = deg
    if p < 0 or q < 0:
        return []
    return [
        Monomial(al, be)
        for al in _compositions(p, amb.m + 1)
        for be in _compositions(q, amb.n + 1)
    ]


def top_self_intersection(amb: Ambient, L: Polarization) -> int:
    """L^(m+n) = C(m+n, m) a^m b^n."""
    return comb(amb.m + amb.n, amb.m) * L.a**amb.m * L.b**amb.n


def mixed_intersection(amb: Ambient, L: Polarization, D) -> int:
    """D . L^(m+n-1) for D = O(x, y)."""
    m, n, a, b = amb.m, amb.n, L.a, L.b
    x, y = D
    d1 = m + n - 1
    return comb(d1, m - 1) * a ** (m - 1) * b**n * x + comb(d1, m) * a**m * b ** (n - 1) * y


@dataclass(frozen=True)
class BundleNumerics:
    rank: int
    c1: Bidegree
    slope: Fraction

    def to_json(self) -> dict:
        return {"rank": self.rank, "c1": list(self.c1), "slope": fraction_text(self.slope)}


def syzygy_bundle_numerics(amb: Ambient, L: Polarization, r: int) -> BundleNumerics:
    if r < 2:
        raise BisyzError(f"syzygy bundle needs dim V >= 2, got r = {r}")
    return BundleNumerics(
        rank=r - 1,
        c1=Bidegree(-L.a, -L.b),
        slope=Fraction(-top_self_intersection(amb, L), r - 1),
    )


def fraction_text(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def pure_powers(amb: Ambient, L: Polarization) -> list[Monomial]:
    """The (m+1)(n+1) monomials x_i^a y_j^b in canonical order."""
    out = []
    for i in range(amb.m + 1):
        for j in range(amb.n + 1):
            alpha = [0] * (amb.m + 1)
            beta = [0] * (amb.n + 1)
            alpha[i] = L.a
            beta[j] = L.b
            out.append(Monomial(tuple(alpha), tuple(beta)))
    return sorted(out)


def lcm_gap(u: Monomial, v: Monomial) -> int:
    """Total degree of lcm(u, v) minus the common total degree of u and v.

    This is the total twist of the pairwise syzygy between two monomials of equal bidegree.
    """
    return sum(max(0, p - q) for p, q in zip(u.exponents, v.exponents))
