"""Exact rank and kernel computations over Q and over prime fields.

Matrices are sparse: a list of rows, each row a ``dict`` mapping column index to a
nonzero entry. Entries may be ``int`` or ``Fraction`` for the rational routines.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm

# 2^31 - 1; any prime above 2^30 is accepted where a field is configurable
DEFAULT_PRIME = 2147483647


def is_probable_prime(p: int) -> bool:
    if p < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for q in small:
        if p % q == 0:
            return p == q
    d, s = p - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for w in small:
        x = pow(w, d, p)
        if x in (1, p - 1):
            continue
        for _ in range(s - 1):
            x = x * x % p
            if x == p - 1:
                break
        else:
            return False
    return True


def dense_to_sparse(rows) -> list[dict]:
    return [{j: v for j, v in enumerate(row) if v} for row in rows]


def transpose(rows: list[dict]) -> list[dict]:
    out: dict[int, dict] = {}
    for i, row in enumerate(rows):
        for j, v in row.items():
            out.setdefault(j, {})[i] = v
    return [out[j] for j in sorted(out)]


def _integral_row(row: dict) -> dict:
    den = 1
    for v in row.values():
        if isinstance(v, Fraction):
            den = lcm(den, v.denominator)
    if den == 1:
        return {j: int(v) for j, v in row.items() if v}
    return {j: int(v * den) for j, v in row.items() if v}


def _primitive(row: dict) -> dict:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    if g > 1:
        return {j: v // g for j, v in row.items()}
    return row


def rank_rational(rows) -> int:
    """Exact rank over Q by fraction-free elimination with content removal."""
    work = [_primitive(_integral_row(r)) for r in rows]
    work = [r for r in work if r]
    pivots: dict[int, dict] = {}
    for row in work:
        while row:
            col = min(row)
            piv = pivots.get(col)
            if piv is None:
                pivots[col] = row
                break
            pv, rv = piv[col], row[col]
            new = {j: v * pv for j, v in row.items()}
            for j, v in piv.items():
                w = new.get(j, 0) - rv * v
                if w:
                    new[j] = w
                else:
                    new.pop(j, None)
            row = _primitive(new) if new else new
    return len(pivots)


def _reduce_mod(row: dict, p: int) -> dict:
    out = {}
    for j, v in row.items():
        if isinstance(v, Fraction):
            if v.denominator % p == 0:
                raise ZeroDivisionError(f"denominator divisible by the prime {p}")
            w = v.numerator * pow(v.denominator, -1, p) % p
        else:
            w = v % p
        if w:
            out[j] = w
    return out


def rank_mod_p(rows, p: int = DEFAULT_PRIME) -> int:
    """Rank over F_p. For integer matrices this never exceeds the rank over Q."""
    pivots: dict[int, dict] = {}
    for raw in rows:
        row = _reduce_mod(raw, p)
        while row:
            col = min(row)
            piv = pivots.get(col)
            if piv is None:
                inv = pow(row[col], -1, p)
                pivots[col] = {j: v * inv % p for j, v in row.items()}
                break
            factor = row[col]
            for j, v in piv.items():
                w = (row.get(j, 0) - factor * v) % p
                if w:
                    row[j] = w
                else:
                    row.pop(j, None)
    return len(pivots)


def kernel_basis_mod_p(columns: list[dict], nrows: int, p: int = DEFAULT_PRIME) -> list[dict]:
    """Basis of {c : sum_j c_j * columns[j] = 0} over F_p.

    ``columns[j]`` maps row index to entry. Returned vectors map column index to entry.
    """
    ncols = len(columns)
    # reduced row echelon form of A, computed row-wise
    rows: list[dict] = [dict() for _ in range(nrows)]
    for j, col in enumerate(columns):
        for i, v in _reduce_mod(col, p).items():
            rows[i][j] = v
    pivot_rows: list[dict] = []
    pivot_cols: list[int] = []
    for row in rows:
        for pr, pc in zip(pivot_rows, pivot_cols):
            f = row.get(pc)
            if f:
                for j, v in pr.items():
                    w = (row.get(j, 0) - f * v) % p
                    if w:
                        row[j] = w
                    else:
                        row.pop(j, None)
        if not row:
            continue
        col = min(row)
        inv = pow(row[col], -1, p)
        row = {j: v * inv % p for j, v in row.items()}
        for k, pr in enumerate(pivot_rows):
            f = pr.get(col)
            if f:
                for j, v in row.items():
                    w = (pr.get(j, 0) - f * v) % p
                    if w:
                        pr[j] = w
                    else:
                        pr.pop(j, None)
        pivot_rows.append(row)
        pivot_cols.append(col)
    pivot_set = set(pivot_cols)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = {free: 1}
        for pr, pc in zip(pivot_rows, pivot_cols):
            v = pr.get(free)
            if v:
                vec[pc] = (-v) % p
        basis.append(vec)
    return basis
