"""Test cases for the operator inequality checkers"""

import math

import numpy as np
import pytest

from app.exceptions import ParameterRangeError
from app.matrix_lemmas import (
    PsdPair, asymptotic_orthogonality_check, asymptotic_orthogonality_sweep, easy_orthogonality_check,
    easy_orthogonality_sweep, iterations_for, norm_self_consistency, operator_norm, psd_power,
    random_psd, rotation_action, rotation_bound, shrink_to_constraint, theta_rotation_probe,
)

E1 = np.diag([1.0, 0.0])
E2 = np.diag([0.0, 1.0])


def angled_projection(t):
    v = np.array([math.cos(t), math.sin(t)])
    return np.outer(v, v)


def test_iterations_for():
    """n = ⌈log ε² / log(1-ε²)⌉"""
    assert iterations_for(0.5) == 5
    assert iterations_for(0.1) == 459


def test_orthogonal_projections():
    verdict = asymptotic_orthogonality_check(PsdPair.of(E1, E2), 0.1)
    assert verdict.preconditions_met
    assert verdict.value == 0
    assert verdict.passed


def test_half_identity_pair():
    """A = B = I/2 at ε = ½: ‖A⁵B⁵‖ = 4⁻⁵"""
    half = np.eye(3) / 2
    verdict = asymptotic_orthogonality_check(PsdPair.of(half, half), 0.5)
    assert verdict.n == 5
    assert abs(verdict.value - 4 ** -5) < 1e-12
    assert verdict.bound == 7
    assert verdict.passed


def test_asymptotic_violations_listed():
    verdict = asymptotic_orthogonality_check(PsdPair.of(2 * E1, E2), 0.1)
    assert not verdict.preconditions_met
    assert not verdict.passed
    assert "||A|| > 1" in verdict.violations
    assert "||A+B|| > 1+eps" in verdict.violations


def test_asymptotic_rejects_eps_out_of_range():
    pair = PsdPair.of(E1, E2)
    with pytest.raises(ParameterRangeError):
        asymptotic_orthogonality_check(pair, 0.0)
    with pytest.raises(ParameterRangeError):
        asymptotic_orthogonality_check(pair, 0.6)


@pytest.mark.parametrize("t", [0.3, 0.8, 1.2])
def test_easy_lemma_on_angled_projections(t):
    """‖AB‖ = |cos t| and ‖A+B‖ = 1 + |cos t|"""
    pair = PsdPair.of(E1, angled_projection(t))
    eps = abs(math.cos(t))
    verdict = easy_orthogonality_check(pair, eps)
    assert verdict.preconditions_met
    assert abs(verdict.value - (1 + eps)) < 1e-12
    assert verdict.passed


def test_easy_lemma_requires_norm_one():
    verdict = easy_orthogonality_check(PsdPair.of(E1 / 2, E2), 0.0)
    assert verdict.violations == ["||A|| != 1"]
    assert not verdict.passed
    with pytest.raises(ParameterRangeError):
        easy_orthogonality_check(PsdPair.of(E1, E2), -0.1)


def test_psd_pair_validation():
    with pytest.raises(ValueError):
        PsdPair.of(np.zeros((2, 3)), np.zeros((2, 3)))
    with pytest.raises(ValueError):
        PsdPair.of([[0, 1], [0, 0]], E2)
    with pytest.raises(ValueError):
        PsdPair.of(np.eye(2), np.eye(3))
    with pytest.raises(ValueError):
        PsdPair.of(np.eye(65), np.eye(65))


def test_norm_helpers():
    rng = np.random.default_rng(1)
    X = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    assert norm_self_consistency(X)
    assert abs(operator_norm(np.diag([3.0, -4.0])) - 4) < 1e-12
    assert np.allclose(psd_power(np.diag([0.5, 1.0]), 3), np.diag([0.125, 1.0]))


def test_random_psd_is_normalised():
    rng = np.random.default_rng(2)
    P = random_psd(4, rng, rank=2)
    assert abs(operator_norm(P) - 1) < 1e-12
    assert np.linalg.matrix_rank(P, tol=1e-10) == 2
    assert np.linalg.eigvalsh(P)[0] > -1e-12


def test_shrink_to_constraint():
    A = np.eye(2)
    shrunk = shrink_to_constraint(A, np.eye(2), 0.5)
    assert operator_norm(A + shrunk) <= 1.5
    assert operator_norm(A + shrunk) > 1.5 - 1e-9
    assert shrink_to_constraint(E1, E2, 0.1) is E2


def test_asymptotic_sweep_finds_no_counterexample():
    summary = asymptotic_orthogonality_sweep(0.05, 48, seed=3, dim_max=4)
    assert summary.samples == 48
    assert summary.applicable == 48
    assert summary.counterexamples == 0
    assert summary.passed


def test_sweeps_independent_of_workers():
    one = easy_orthogonality_sweep(40, seed=5, dim_max=4, workers=1)
    two = easy_orthogonality_sweep(40, seed=5, dim_max=4, workers=2)
    assert one == two
    assert one.counterexamples == 0


def test_sweep_dimension_limits():
    with pytest.raises(ParameterRangeError):
        easy_orthogonality_sweep(4, seed=1, dim_max=1)
    with pytest.raises(ParameterRangeError):
        asymptotic_orthogonality_sweep(0.1, 4, seed=1, dim_max=65)


def test_rotation_action_at_zero_is_identity():
    rng = np.random.default_rng(4)
    b = random_psd(4, rng)
    assert np.allclose(rotation_action(b, 0.0, 2), b)
    assert rotation_bound(0.0) == 1
    assert abs(rotation_bound(math.pi) + 1) < 1e-12


@pytest.mark.parametrize("theta", [0.0, math.pi / 6, math.pi])
def test_theta_rotation_family(theta):
    result = theta_rotation_probe(theta, 2, 32, seed=7, refine_steps=5)
    assert result.samples == 32
    assert result.passed
    assert result.minimum >= result.bound - 1e-9


def test_theta_rotation_validation():
    with pytest.raises(ParameterRangeError):
        theta_rotation_probe(0.5, 0, 10, seed=1)
