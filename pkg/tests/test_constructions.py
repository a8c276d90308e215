from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bisyz.constructions import (
    GAP_GENERAL,
    INVALID_TOO_LARGE,
    INVALID_TOO_SMALL,
    PACKING,
    RANGE_A,
    RANGE_B,
    ConstructionError,
    ConstructionUnavailable,
    RangeError,
    build_V,
    build_W,
    dimension_bound,
    epsilon,
    pairwise_gap,
    range_classify,
    t_r,
)
from bisyz.core import Ambient, BisyzError, Polarization, dim_graded_piece, pure_powers
from bisyz.linsys import bpf_status
from bisyz.stability import STABLE, certify_degree_gap
from bisyz.syzygy import min_syzygy_total_degree

from .oracles import max_packing, t_min_dense

GRID = [(m, n, a, b) for (m, n) in [(1, 1), (1, 2), (2, 1), (1, 3), (2, 2), (2, 3), (3, 3)]
        for a in range(2, 7) for b in range(2, 7)]


def range_b(m, n, a, b):
    h0 = dim_graded_piece(Ambient(m, n), (a, b))
    return [r for r in range(1, h0 + 2) if range_classify(m, n, a, b, r).value == RANGE_B]


def test_t_r_examples():
    assert t_r(1, 1, 4, 3, 5) == 3
    assert t_r(2, 2, 6, 2, 8) == 2
    assert t_r(1, 1, 6, 4, 13) == 2
    with pytest.raises(RangeError) as err:
        t_r(1, 1, 6, 4, 14)
    assert err.value.range_class.value == RANGE_A


def test_epsilon_examples():
    assert (epsilon(6, 3), epsilon(8, 3), epsilon(7, 3)) == (1, 0, 1)
    with pytest.raises(BisyzError):
        epsilon(6, 1)


def test_classify_examples():
    rc = range_classify(1, 1, 2, 1, 5)
    assert (rc.value, rc.threshold, rc.prediction) == (GAP_GENERAL, Fraction(5), "open")
    assert range_classify(1, 1, 2, 1, 6).value == RANGE_A
    assert range_classify(2, 3, 5, 2, 8).value == RANGE_B
    assert range_classify(2, 3, 5, 2, 8).monomial_gap_note
    assert range_classify(1, 1, 2, 1, 2).value == INVALID_TOO_SMALL
    assert range_classify(1, 1, 2, 1, 7).value == INVALID_TOO_LARGE


@pytest.mark.parametrize("m,n,a,b", GRID)
def test_classes_partition_and_t_r_is_unique(m, n, a, b):
    h0 = dim_graded_piece(Ambient(m, n), (a, b))
    mu, a1 = min(m, n), max(a, b)
    order = [INVALID_TOO_SMALL, GAP_GENERAL, RANGE_B, RANGE_A, INVALID_TOO_LARGE]
    seen = []
    for r in range(1, h0 + 2):
        value = range_classify(m, n, a, b, r).value
        seen.append(order.index(value))
        if value == RANGE_B:
            t = t_r(m, n, a, b, r)
            inside = lambda s: Fraction(a1 * (m + n), s * mu) + 1 < r <= Fraction(a1 * (m + n), (s - 1) * mu) + 1
            assert inside(t)
            assert 2 <= t <= min(a, b)
            assert not (t > 2 and inside(t - 1)) and not inside(t + 1)
        else:
            with pytest.raises(RangeError):
                t_r(m, n, a, b, r)
    # classes appear in increasing order of r
    assert seen == sorted(seen)


def test_build_W_example():
    recipe = build_W(1, 1, 6, 4, 8)
    assert (recipe.case_label, recipe.subcase, recipe.t_r) == ("A", "WideB", 2)
    assert recipe.verified
    assert recipe.N >= 13
    data = recipe.to_json()
    assert data["verification"]["t_min"] >= 2 and data["N"] == recipe.N


def test_case_a_family_sizes_before_deletions():
    for (a, b, r) in [(6, 4, 8), (6, 4, 7), (5, 3, 6), (6, 5, 9)]:
        recipe = build_W(1, 1, a, b, r, strict=False)
        K = a // (recipe.t_r - 1)
        assert len(recipe.families["A"]) == K - 1
        assert len(recipe.families["B"]) == K


def test_case_labels():
    assert build_W(1, 2, 5, 3, 9, strict=False).case_label == "C"
    assert build_W(2, 1, 5, 3, 9, strict=False).case_label == "B"
    assert build_W(2, 2, 6, 2, 8, strict=False).case_label == "D"


def test_build_V_examples():
    V = build_V(1, 1, 6, 4, 8)
    assert V.r == 8
    assert set(pure_powers(V.ambient, V.polarization)) <= set(V.support)
    assert min_syzygy_total_degree(V) >= 2
    assert certify_degree_gap(V).kind == STABLE
    for a, b in [(2, 2), (3, 2), (6, 4)]:
        with pytest.raises(ConstructionUnavailable):
            build_V(1, 1, a, b, 3)
    assert range_classify(2, 3, 5, 2, 8).value == RANGE_B
    with pytest.raises(ConstructionUnavailable):
        build_V(2, 3, 5, 2, 8)


def test_strict_build_reports_the_unmet_bound():
    # t_r = 2 here; the best gap-2 packing through the pure powers of (3,2) has 5 members, the bound is 7
    with pytest.raises(ConstructionError) as err:
        build_W(1, 1, 3, 2, 5)
    assert not err.value.recipe.report["bound_met"]
    assert err.value.recipe.variant == PACKING


@pytest.mark.parametrize("a,b,r", [(3, 2, 5), (3, 3, 5), (4, 2, 6), (4, 3, 6), (5, 2, 7), (3, 2, 7)])
def test_unmet_bound_is_below_the_optimum(a, b, r):
    # exact branch-and-bound: no monomial W with the pure powers reaches the dimension bound
    t = t_r(1, 1, a, b, r)
    best = max_packing(1, 1, max(a, b), min(a, b), t)
    assert best < dimension_bound(1, 1, a, b, t)
    assert build_W(1, 1, a, b, r, strict=False).N == best


@given(st.sampled_from([(m, n, a, b) for (m, n, a, b) in GRID if m + n <= 3 and a <= 5]), st.data())
def test_recipes_satisfy_their_conditions(params, data):
    m, n, a, b = params
    rs = range_b(m, n, a, b)
    if not rs:
        return
    r = data.draw(st.sampled_from(rs))
    recipe = build_W(m, n, a, b, r, strict=False)
    monos = recipe.monomials
    assert len(set(monos)) == len(monos) == recipe.N
    assert all(tuple(u.bidegree) == (a, b) for u in monos)
    assert set(pure_powers(Ambient(m, n), Polarization(a, b))) <= set(monos)
    # monomial syzygies are generated by pairwise ones: t_min is the least lcm gap
    t = min_syzygy_total_degree(recipe.system())
    assert t == pairwise_gap(monos) >= recipe.t_r
    if m + n == 2 and a <= 4:
        assert t == t_min_dense(recipe.system())
    if r >= (m + 1) * (n + 1) and r <= recipe.N:
        V = build_V(m, n, a, b, r)
        assert bpf_status(V).value == "Certified"
        assert min_syzygy_total_degree(V) >= t


def test_swapped_orientation():
    w = build_W(1, 1, 4, 6, 8)
    assert w.orientation == "swapped"
    assert all(tuple(u.bidegree) == (4, 6) for u in w.monomials)
    assert certify_degree_gap(build_V(1, 1, 4, 6, 8)).kind == STABLE
