"""Linear systems V in H^0(O(a,b)) on P^m x P^n and their basepoint-freeness."""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .core import (
    Ambient,
    BisyzError,
    Monomial,
    Polarization,
    enumerate_monomials,
    parse_monomial,
    pure_powers,
)
from .linalg import DEFAULT_PRIME, is_probable_prime, rank_mod_p, rank_rational

MONOMIAL = "monomial"
GENERAL = "general"

# coefficients of generic systems are uniform integers in [-SAMPLE_RANGE, SAMPLE_RANGE]
SAMPLE_RANGE = 10**6
MAX_RESAMPLES = 64


@dataclass(frozen=True)
class BpfStatus:
    value: str  # Certified | RefutedAtTorusFixedPoint | AssertedGeneric | Unknown
    point: Optional[tuple[int, int]] = None

    @property
    def usable(self) -> bool:
        return self.value in ("Certified", "AssertedGeneric")

    def to_json(self) -> dict:
        out = {"value": self.value}
        if self.point is not None:
            out["point"] = list(self.point)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "BpfStatus":
        point = data.get("point")
        return cls(data["value"], tuple(point) if point is not None else None)


CERTIFIED = BpfStatus("Certified")
ASSERTED_GENERIC = BpfStatus("AssertedGeneric")
UNKNOWN = BpfStatus("Unknown")


def parse_field(field: str) -> Optional[int]:
    """``"rational"`` -> None, ``"prime:<p>"`` -> p."""
    if field == "rational":
        return None
    if field.startswith("prime:"):
        p = int(field.split(":", 1)[1])
        if p <= 2**30 or not is_probable_prime(p):
            raise BisyzError(f"prime field needs a prime above 2^30, got {p}")
        return p
    raise BisyzError(f"unknown field {field!r}")


@dataclass(frozen=True)
class LinearSystem:
    ambient: Ambient
    polarization: Polarization
    kind: str
    support: tuple[Monomial, ...]
    coeffs: Optional[tuple[tuple, ...]] = None
    field: str = "rational"
    seed: Optional[int] = None
    resample: int = 0

    def __post_init__(self):
        amb, L = self.ambient, self.polarization
        if self.kind not in (MONOMIAL, GENERAL):
            raise BisyzError(f"unknown system kind {self.kind!r}")
        if len(set(self.support)) != len(self.support):
            seen, dups = set(), []
            for u in self.support:
                if u in seen:
                    dups.append(u.text())
                seen.add(u)
            raise BisyzError(f"duplicate monomials in support: {', '.join(dups)}")
        for u in self.support:
            if u.shape != (amb.m, amb.n):
                raise BisyzError(f"monomial {u} does not live on P^{amb.m} x P^{amb.n}")
            if tuple(u.bidegree) != (L.a, L.b):
                raise BisyzError(f"monomial {u} has bidegree {tuple(u.bidegree)}, expected ({L.a}, {L.b})")
        if self.kind == MONOMIAL:
            if self.coeffs is not None:
                raise BisyzError("monomial systems carry no coefficient matrix")
            if not self.support:
                raise BisyzError("empty linear system")
            return
        if self.coeffs is None:
            raise BisyzError("general systems need a coefficient matrix")
        p = parse_field(self.field)
        if any(len(row) != len(self.support) for row in self.coeffs):
            raise BisyzError("coefficient rows must match the support size")
        rows = [dict((j, v) for j, v in enumerate(row) if v) for row in self.coeffs]
        rank = rank_rational(rows) if p is None else rank_mod_p(rows, p)
        if rank != len(self.coeffs):
            raise BisyzError(f"coefficient matrix has rank {rank}, expected full row rank {len(self.coeffs)}")

    @property
    def r(self) -> int:
        return len(self.support) if self.kind == MONOMIAL else len(self.coeffs)

    @property
    def prime(self) -> Optional[int]:
        return parse_field(self.field)

    def forms(self) -> list[dict[Monomial, object]]:
        """The r sections f_1..f_r as {monomial: coefficient}."""
        if self.kind == MONOMIAL:
            return [{u: 1} for u in self.support]
        return [
            {u: c for u, c in zip(self.support, row) if c}
            for row in self.coeffs
        ]

    def transposed(self) -> "LinearSystem":
        """The same system seen on P^n x P^m (factors swapped)."""
        support = tuple(u.transposed() for u in self.support)
        coeffs = self.coeffs
        if self.kind == MONOMIAL:
            support = tuple(sorted(support))
        else:
            order = sorted(range(len(support)), key=lambda j: support[j])
            support = tuple(support[j] for j in order)
            coeffs = tuple(tuple(row[j] for j in order) for row in coeffs)
        return LinearSystem(
            self.ambient.swapped(), self.polarization.swapped(), self.kind,
            support, coeffs, self.field, self.seed, self.resample,
        )

    def to_json(self) -> dict:
        out = {
            "m": self.ambient.m,
            "n": self.ambient.n,
            "a": self.polarization.a,
            "b": self.polarization.b,
            "kind": self.kind,
        }
        if self.kind == MONOMIAL:
            out["support"] = [[list(u.alpha), list(u.beta)] for u in sorted(self.support)]
            return out
        order = sorted(range(len(self.support)), key=lambda j: self.support[j])
        out["support"] = [[list(self.support[j].alpha), list(self.support[j].beta)] for j in order]
        out["coeffs"] = [[_coeff_text(row[j]) for j in order] for row in self.coeffs]
        out["field"] = self.field
        if self.seed is not None:
            out["seed"] = self.seed
            out["resample"] = self.resample
        return out

    def content_hash(self) -> str:
        blob = json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    @classmethod
    def from_json(cls, data: dict) -> "LinearSystem":
        amb = Ambient(int(data["m"]), int(data["n"]))
        L = Polarization(int(data["a"]), int(data["b"]))
        support = tuple(Monomial(tuple(al), tuple(be)) for al, be in data["support"])
        kind = data.get("kind", MONOMIAL)
        if kind == MONOMIAL:
            return cls(amb, L, MONOMIAL, tuple(sorted(support)))
        coeffs = tuple(tuple(_parse_coeff(c) for c in row) for row in data["coeffs"])
        return cls(
            amb, L, GENERAL, support, coeffs, data.get("field", "rational"),
            data.get("seed"), int(data.get("resample", 0)),
        )


def _coeff_text(c) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _parse_coeff(c):
    if isinstance(c, int):
        return c
    v = Fraction(str(c))
    return v.numerator if v.denominator == 1 else v


def monomial_system(amb: Ambient, L: Polarization, support: Sequence) -> LinearSystem:
    """Build a monomial system; accepts Monomial objects or monomial strings."""
    monos = [parse_monomial(u, amb) if isinstance(u, str) else u for u in support]
    return LinearSystem(amb, L, MONOMIAL, tuple(sorted(monos)))


def general_system(amb, L, support, coeffs, field="rational") -> LinearSystem:
    monos = [parse_monomial(u, amb) if isinstance(u, str) else u for u in support]
    return LinearSystem(amb, L, GENERAL, tuple(monos), tuple(tuple(r) for r in coeffs), field)


def complete_system(amb: Ambient, L: Polarization) -> LinearSystem:
    return LinearSystem(amb, L, MONOMIAL, tuple(enumerate_monomials(amb, (L.a, L.b))))


def pure_power_set(amb: Ambient, L: Polarization) -> list[Monomial]:
    return pure_powers(amb, L)


def _torus_point_of(u: Monomial) -> Optional[tuple[int, int]]:
    """(i, j) if u = x_i^a y_j^b, else None."""
    xi = [i for i, e in enumerate(u.alpha) if e]
    yj = [j for j, e in enumerate(u.beta) if e]
    if len(xi) == 1 and len(yj) == 1:
        return (xi[0], yj[0])
    return None


def basepoint_free_monomial(sys: LinearSystem) -> BpfStatus:
    if sys.kind != MONOMIAL:
        raise BisyzError("basepoint_free_monomial needs a monomial system; use basepoint_free_general")
    present = {_torus_point_of(u) for u in sys.support}
    for i in range(sys.ambient.m + 1):
        for j in range(sys.ambient.n + 1):
            if (i, j) not in present:
                return BpfStatus("RefutedAtTorusFixedPoint", (i, j))
    return CERTIFIED


def basepoint_free_general(sys: LinearSystem) -> BpfStatus:
    if sys.kind != GENERAL:
        return basepoint_free_monomial(sys)
    amb = sys.ambient
    p = sys.prime
    col_of = {_torus_point_of(u): k for k, u in enumerate(sys.support)}
    for i in range(amb.m + 1):
        for j in range(amb.n + 1):
            k = col_of.get((i, j))
            # at the fixed point only x_i^a y_j^b survives
            values = [] if k is None else [row[k] for row in sys.coeffs]
            if not any((v % p if p else v) for v in values):
                return BpfStatus("RefutedAtTorusFixedPoint", (i, j))
    support_bpf = len(col_of.keys() - {None}) == (amb.m + 1) * (amb.n + 1)
    if support_bpf and sys.r >= amb.m + amb.n + 1 and sys.seed is not None:
        return ASSERTED_GENERIC
    return UNKNOWN


def bpf_status(sys: LinearSystem) -> BpfStatus:
    if sys.kind == MONOMIAL:
        return basepoint_free_monomial(sys)
    return basepoint_free_general(sys)


def random_general_system(
    amb: Ambient, L: Polarization, support: Sequence, r: int, seed: int, field: str = "rational"
) -> LinearSystem:
    """Generic r-dimensional subspace of span(support), a pure function of (support, r, seed)."""
    monos = [parse_monomial(u, amb) if isinstance(u, str) else u for u in support]
    monos = sorted(monos)
    if r > len(monos):
        raise BisyzError(f"cannot pick {r} independent sections from {len(monos)} monomials")
    if r < 1:
        raise BisyzError("r must be positive")
    p = parse_field(field)
    for k in range(MAX_RESAMPLES):
        rng = random.Random(seed + k)
        if p is None:
            coeffs = [[rng.randint(-SAMPLE_RANGE, SAMPLE_RANGE) for _ in monos] for _ in range(r)]
            rank = rank_rational([dict(enumerate(row)) for row in coeffs])
        else:
            coeffs = [[rng.randrange(p) for _ in monos] for _ in range(r)]
            rank = rank_mod_p([dict(enumerate(row)) for row in coeffs], p)
        if rank == r:
            return LinearSystem(
                amb, L, GENERAL, tuple(monos), tuple(tuple(row) for row in coeffs), field, seed, k
            )
    raise BisyzError(f"no full-rank sample after {MAX_RESAMPLES} attempts")  # pragma: no cover


__all__ = [
    "BpfStatus", "LinearSystem", "MONOMIAL", "GENERAL", "DEFAULT_PRIME", "SAMPLE_RANGE",
    "monomial_system", "general_system", "complete_system", "pure_power_set",
    "basepoint_free_monomial", "basepoint_free_general", "bpf_status", "random_general_system",
    "parse_field",
]
