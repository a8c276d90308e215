"""Independent reference computations used to freeze expected values.

Nothing here imports the package's linear algebra or enumeration code: monomials are plain
exponent tuples, matrices are dense, ranks come from numpy (0/+-1 matrices) or sympy (exact).
"""

from __future__ import annotations

from itertools import combinations, product

import numpy as np
import sympy


def exponents(nvars: int, degree: int) -> list[tuple[int, ...]]:
    """All exponent vectors of the given total degree, by filtering the full box."""
    return [e for e in product(range(degree + 1), repeat=nvars) if sum(e) == degree]


def bigraded_exponents(m: int, n: int, p: int, q: int) -> list[tuple[int, ...]]:
    if p < 0 or q < 0:
        return []
    return [ex + ey for ex in exponents(m + 1, p) for ey in exponents(n + 1, q)]


def _add(u, v):
    return tuple(i + j for i, j in zip(u, v))


def _rank(mat, exact: bool) -> int:
    if not len(mat) or not len(mat[0]):
        return 0
    if exact:
        return sympy.Matrix(mat).rank()
    return int(np.linalg.matrix_rank(np.array(mat, dtype=float)))


def forms_of(system) -> list[dict[tuple, object]]:
    """Sections as {exponent tuple: coefficient}, read from the system's JSON form."""
    data = system.to_json()
    supp = [tuple(al) + tuple(be) for al, be in data["support"]]
    if data["kind"] == "monomial":
        return [{u: 1} for u in supp]
    return [
        {u: sympy.Rational(c) for u, c in zip(supp, row) if sympy.Rational(c) != 0}
        for row in data["coeffs"]
    ]


def h0_dense(system, x: int, y: int) -> int:
    """Kernel dimension of (g_i) -> sum g_i f_i on R_(x,y)^r, by dense rank."""
    m, n = system.ambient.m, system.ambient.n
    a, b = system.polarization.a, system.polarization.b
    src = bigraded_exponents(m, n, x, y)
    if not src:
        return 0
    tgt = {u: k for k, u in enumerate(bigraded_exponents(m, n, x + a, y + b))}
    forms = forms_of(system)
    exact = system.kind != "monomial"
    cols = []
    for f in forms:
        for g in src:
            col = [0] * len(tgt)
            for u, c in f.items():
                col[tgt[_add(u, g)]] += c
            cols.append(col)
    mat = [list(row) for row in zip(*cols)]
    return len(cols) - _rank(mat, exact)


def koszul_dense(forms, m, n, a, b, q, x, y):
    """Dense matrix (rows = codomain) of wedge^q V (x) R_(x,y) -> wedge^(q-1) V (x) R_(x+a,y+b)."""
    r = len(forms)
    dom = [(I, u) for I in combinations(range(r), q) for u in bigraded_exponents(m, n, x, y)]
    cod = [(J, u) for J in combinations(range(r), q - 1) for u in bigraded_exponents(m, n, x + a, y + b)]
    pos = {c: k for k, c in enumerate(cod)}
    mat = [[0] * len(dom) for _ in cod]
    for c, (I, g) in enumerate(dom):
        for j, i in enumerate(I):
            J = I[:j] + I[j + 1:]
            for u, coef in forms[i].items():
                mat[pos[(J, _add(u, g))]][c] += (-1) ** j * coef
    return dom, cod, mat


def wedge_h0_dense(system, q: int, x: int, y: int) -> int:
    m, n = system.ambient.m, system.ambient.n
    a, b = system.polarization.a, system.polarization.b
    if x < 0 or y < 0:
        return 0
    dom, cod, mat = koszul_dense(forms_of(system), m, n, a, b, q, x, y)
    if not dom:
        return 0
    return len(dom) - _rank(mat, system.kind != "monomial")


def t_min_dense(system) -> int:
    a, b = system.polarization.a, system.polarization.b
    for s in range(1, a + b + 1):
        for x in range(s + 1):
            if h0_dense(system, x, s - x):
                return s
    raise AssertionError("no syzygy found")


def mingens_by_components(support: list[tuple[int, ...]], m: int, n: int, a: int, b: int, bound: int) -> dict:
    """Minimal first syzygies of a monomial ideal, counted fine degree by fine degree.

    At fine degree w the syzygy space is spanned by pairwise relations among the generators
    dividing w; relations already produced from strictly smaller lcm's are the ones whose pair
    lies in a common connected component of the graph joining i, j when lcm(f_i, f_j) is a
    proper divisor of w. So the number of new generators at w is (#components - 1) when w is
    itself an lcm of some subset, which happens exactly at the pairwise lcm lattice.
    """
    def divides(u, v):
        return all(i <= j for i, j in zip(u, v))

    def lcm(u, v):
        return tuple(max(i, j) for i, j in zip(u, v))

    r = len(support)
    lcms = set()
    for k in range(2, r + 1):
        for S in combinations(range(r), k):
            w = support[S[0]]
            for i in S[1:]:
                w = lcm(w, support[i])
            lcms.add(w)
    counts: dict[tuple[int, int], int] = {}
    for w in lcms:
        tx, ty = sum(w[: m + 1]) - a, sum(w[m + 1:]) - b
        if tx + ty > bound:
            continue
        idx = [i for i in range(r) if divides(support[i], w)]
        parent = {i: i for i in idx}

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for i, j in combinations(idx, 2):
            l = lcm(support[i], support[j])
            if l != w and divides(l, w):
                parent[find(i)] = find(j)
        comps = len({find(i) for i in idx})
        if comps > 1:
            counts[(tx, ty)] = counts.get((tx, ty), 0) + comps - 1
    return counts


def max_packing(m: int, n: int, a: int, b: int, t: int, include_pure: bool = True) -> int:
    """Largest set of bidegree-(a,b) monomials with pairwise lcm gap >= t, containing all pure
    powers, by branch and bound. Only for small P^1 x P^1 style instances."""
    mons = bigraded_exponents(m, n, a, b)

    def gap(u, v):
        return sum(max(0, i - j) for i, j in zip(u, v))

    pure = [u for u in mons if sum(1 for e in u if e) == 2 and max(u[: m + 1]) == a and max(u[m + 1:]) == b]
    base = pure if include_pure else []
    if any(gap(u, v) < t for u, v in combinations(base, 2)):
        return 0
    rest = [u for u in mons if u not in base and all(gap(u, v) >= t for v in base)]
    best = [0]

    def grow(chosen, cand):
        if len(chosen) + len(cand) <= best[0]:
            return
        if not cand:
            best[0] = max(best[0], len(chosen))
            return
        u, tail = cand[0], cand[1:]
        grow(chosen + [u], [v for v in tail if gap(u, v) >= t])
        grow(chosen, tail)

    grow([], rest)
    return len(base) + best[0]
