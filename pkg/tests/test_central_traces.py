"""Test cases for trace convolution and restricted level traces"""

import mpmath
import pytest

from app.central_traces import (
    CentralElement, LevelElement, aggregate_levels, convolve, dimension_character, gap_table,
    level_convolve_step, qtr1_power_distribution, restricted_trace_gap,
)
from app.exceptions import ParameterRangeError
from app.fusion import EMPTY


def test_convolution_of_letters(w):
    """qTr_u * qTr_ū = qTr_uū + qTr_ε"""
    product = convolve(CentralElement.trace(w("u")), CentralElement.trace(w("b")))
    assert product == CentralElement({w("ub"): 1, EMPTY: 1})


@pytest.mark.parametrize("n", range(0, 9))
def test_level_birth_death_rule(n):
    """qTr_1 * qTr_n = qTr_{n+1} + 2 qTr_{n-1}"""
    product = aggregate_levels(convolve(CentralElement.level(1), CentralElement.level(n)))
    expected = {n + 1: 1, n - 1: 2} if n else {1: 1}
    assert product == LevelElement(expected)


def test_aggregate_levels_rejects_partial_levels(w):
    with pytest.raises(ParameterRangeError):
        aggregate_levels(CentralElement({w("u"): 1}))
    with pytest.raises(ParameterRangeError):
        aggregate_levels(CentralElement({w("u"): 1, w("b"): 2}))


def test_dimension_character_is_multiplicative(ctx, w):
    a = CentralElement.level(2)
    b = CentralElement.trace(w("ub")) + CentralElement.trace(w("uu"), 3)
    with mpmath.workprec(ctx.precision_bits):
        lhs = dimension_character(convolve(a, b), ctx)
        rhs = dimension_character(a, ctx) * dimension_character(b, ctx)
        assert abs(lhs - rhs) <= mpmath.mpf("1e-30") * rhs


def test_qtr1_square_at_q_one(ctx_one):
    """qtr_1^{*2} = (14/16) qtr_2 + (2/16) qtr_0"""
    weights = qtr1_power_distribution(2, ctx_one)
    assert set(weights) == {0, 2}
    assert abs(weights[2] - mpmath.mpf(14) / 16) < 1e-30
    assert abs(weights[0] - mpmath.mpf(2) / 16) < 1e-30


@pytest.mark.parametrize("n", [0, 1, 5, 10])
def test_qtr1_power_is_a_distribution(ctx, n):
    weights = qtr1_power_distribution(n, ctx)
    assert all(k <= n and (n - k) % 2 == 0 for k in weights)
    assert all(v > 0 for v in weights.values())
    assert abs(mpmath.fsum(weights.values()) - 1) < 1e-25


def test_reference_gap_cell(ctx_one):
    """n=3, p=1, k=2 at q=1: uūu and ūuū carry 8 of 48"""
    for method in ("dp", "enumerate"):
        gap = restricted_trace_gap(3, 1, 2, ctx_one, method=method)
        with mpmath.workprec(ctx_one.precision_bits):
            assert abs(gap - mpmath.mpf(1) / 6) < 1e-30


def test_dp_matches_enumeration(ctx):
    for n in range(2, 9):
        for p in range(1, n):
            for k in range(1, n - p + 1):
                dp = restricted_trace_gap(n, p, k, ctx, method="dp")
                enum = restricted_trace_gap(n, p, k, ctx, method="enumerate")
                assert abs(dp - enum) <= mpmath.mpf("1e-25")


def test_enumeration_independent_of_workers(ctx_half):
    one = restricted_trace_gap(10, 3, 4, ctx_half, method="enumerate", workers=1)
    two = restricted_trace_gap(10, 3, 4, ctx_half, method="enumerate", workers=2)
    assert one == two


def test_gap_window_validation(ctx_one):
    with pytest.raises(ParameterRangeError):
        restricted_trace_gap(3, 2, 2, ctx_one)
    with pytest.raises(ParameterRangeError):
        restricted_trace_gap(3, 0, 1, ctx_one)
    with pytest.raises(ParameterRangeError):
        restricted_trace_gap(4, 1, 1, ctx_one, method="magic")


def test_gap_table_all_cells_pass(ctx):
    table = gap_table(10, ctx)
    assert list(table.columns) == ["n", "p", "k", "gap", "bound", "pass"]
    assert len(table) == sum((n - 1) * n // 2 for n in range(2, 11))
    assert table["pass"].astype(bool).all()


@pytest.mark.slow
@pytest.mark.parametrize("q", ["0.2", "0.5", "1"])
def test_gap_sweep_to_sixteen(q):
    from app.qarith import context_from_q
    table = gap_table(16, context_from_q(q))
    assert table["pass"].astype(bool).all()


def test_level_convolve_step_from_ground_level():
    assert level_convolve_step(LevelElement({0: 1})) == LevelElement({1: 1})
    assert level_convolve_step(LevelElement({1: 1})) == LevelElement({2: 1, 0: 2})
