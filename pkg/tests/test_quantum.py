"""
Tests for quantum: model marginals, orthogonality checks, the umbrella and
the rotated pentagon pair.
"""

import math

import numpy as np
import pytest
from helpers import (
    assert_close, KAPPA_UPPER_BOUND_5, PRIMED_SUM_AT_0_2, SQRT5, UMBRELLA_5_MARGINAL
)
from contextlab.distributions import edge_exclusivity_feasible
from contextlab.exceptions import InvalidArgumentError
from contextlab.graph_core import build_cycle, build_glued_cycles, theta_closed_form
from contextlab.models import CommutationGraph, ProjectiveModel, StateVector
from contextlab.quantum import (
    COUNTEREXAMPLE_SPEC, build_counterexample, counterexample_glued_marginals,
    kappa_upper_bound, model_marginals, umbrella_model, validate_model
)


# ============================================================================
# Model types
# ============================================================================

def test_state_must_be_normalized():
    """Test StateVector - a non-unit vector is invalid"""
    with pytest.raises(InvalidArgumentError):
        StateVector(np.array([1.0, 1.0]))


def test_model_vectors_must_be_normalized():
    """Test ProjectiveModel - every row must be a unit vector"""
    with pytest.raises(InvalidArgumentError):
        ProjectiveModel(np.array([[1.0, 0.0], [0.5, 0.5]]))


def test_model_is_read_only():
    """Test ProjectiveModel - the stored array cannot be modified"""
    model = ProjectiveModel(np.eye(2))
    with pytest.raises(ValueError):
        model.vectors[0, 0] = 0.0


# ============================================================================
# model_marginals / validate_model
# ============================================================================

def test_marginals_of_basis_vectors():
    """Test model_marginals - p_i = |<v_i|phi>|^2 with complex amplitudes"""
    model = ProjectiveModel(np.eye(2))
    state = StateVector(np.array([1.0, 1.0j]) / math.sqrt(2.0))
    p = model_marginals(model, state)
    assert_close(p[0], 0.5, 1e-12)
    assert_close(p[1], 0.5, 1e-12)


def test_marginals_dimension_mismatch():
    """Test model_marginals - model and state must share a dimension"""
    with pytest.raises(InvalidArgumentError):
        model_marginals(ProjectiveModel(np.eye(2)), StateVector(np.array([1.0, 0.0, 0.0])))


def test_validate_model_reports_worst_edge():
    """Test validate_model - non-orthogonal compatible vectors fail with the largest overlap"""
    model = ProjectiveModel(np.array([[1.0, 0.0], [1.0, 1.0] / np.sqrt(2.0)]))
    g = CommutationGraph.from_edges(2, [(0, 1)])
    check = validate_model(model, g)
    assert not check.ok
    assert check.worst == (0, 1)
    assert_close(check.value, 1 / math.sqrt(2.0))


def test_validate_model_size_mismatch():
    """Test validate_model - the model needs one vector per vertex"""
    with pytest.raises(InvalidArgumentError):
        validate_model(ProjectiveModel(np.eye(3)), build_cycle(5))


# ============================================================================
# Umbrella
# ============================================================================

def test_umbrella_pentagon(umbrella_5):
    """Test umbrella_model - C_5 marginals are 1/sqrt(5) each and sum to sqrt(5)"""
    model, state = umbrella_5
    assert validate_model(model, build_cycle(5)).ok
    p = model_marginals(model, state)
    for value in p.p:
        assert_close(value, UMBRELLA_5_MARGINAL)
    assert_close(math.fsum(p.p), SQRT5)


@pytest.mark.parametrize("n", [5, 7, 9, 11, 13])
def test_umbrella_reaches_theta(n):
    """Test umbrella_model - orthogonal on C_n and the sum equals theta(C_n)"""
    model, state = umbrella_model(n)
    assert model.dim == 3
    assert validate_model(model, build_cycle(n)).ok
    assert_close(math.fsum(model_marginals(model, state).p), theta_closed_form("hole", n))


@pytest.mark.parametrize("n", [4, 3, 6])
def test_umbrella_rejects(n):
    """Test umbrella_model - n must be odd and at least 5"""
    with pytest.raises(InvalidArgumentError):
        umbrella_model(n)


# ============================================================================
# Counterexample
# ============================================================================

def test_kappa_upper_bound_pentagon():
    """Test kappa_upper_bound - arccos(sqrt(2/sqrt(5)))"""
    assert_close(kappa_upper_bound(SQRT5), KAPPA_UPPER_BOUND_5)


def test_kappa_upper_bound_rejects_non_violating_sum():
    """Test kappa_upper_bound - a base sum at or below alpha has no violating angle"""
    with pytest.raises(InvalidArgumentError):
        kappa_upper_bound(2.0)


def test_counterexample_sums(counterexample):
    """Test build_counterexample - both pentagons violate KCBS at kappa=0.2"""
    pentagon = build_cycle(5)
    assert validate_model(counterexample.base, pentagon).ok
    assert validate_model(counterexample.primed, pentagon).ok
    base_sum = math.fsum(model_marginals(counterexample.base, counterexample.state).p)
    primed_sum = math.fsum(model_marginals(counterexample.primed, counterexample.state).p)
    assert_close(base_sum, SQRT5)
    assert_close(primed_sum, PRIMED_SUM_AT_0_2)
    assert_close(primed_sum, (2 + 3 * math.cos(0.2) ** 2) / SQRT5)


def test_counterexample_shares_two_observables(counterexample):
    """Test build_counterexample - v'_1 = v_1 and v'_3 = v_4"""
    assert np.allclose(counterexample.primed.vectors[0], counterexample.base.vectors[0])
    assert np.allclose(counterexample.primed.vectors[2], counterexample.base.vectors[3])


def test_counterexample_near_bound():
    """Test build_counterexample - the primed sum stays above 2 just below the bound"""
    pair = build_counterexample(0.33)
    primed_sum = math.fsum(model_marginals(pair.primed, pair.state).p)
    assert primed_sum > 2.0
    assert_close(primed_sum, (2 + 3 * math.cos(0.33) ** 2) / SQRT5)


def test_counterexample_kappa_grid():
    """Test build_counterexample - 50 kappas inside (0, bound), both sums above 2"""
    pentagon = build_cycle(5)
    for kappa in np.linspace(0.0, kappa_upper_bound(SQRT5), 52)[1:-1]:
        pair = build_counterexample(float(kappa))
        assert validate_model(pair.primed, pentagon).ok
        base_sum = math.fsum(model_marginals(pair.base, pair.state).p)
        primed_sum = math.fsum(model_marginals(pair.primed, pair.state).p)
        assert base_sum > 2.0
        assert primed_sum > 2.0
        assert_close(primed_sum, (2 + 3 * math.cos(kappa) ** 2) / SQRT5)


@pytest.mark.parametrize("kappa", [0.0, -0.1, 0.331, 1.0])
def test_counterexample_rejects_kappa(kappa):
    """Test build_counterexample - kappa must lie strictly inside (0, bound)"""
    with pytest.raises(InvalidArgumentError):
        build_counterexample(kappa)


def test_counterexample_glued_model(counterexample):
    """Test glued_model - orthogonal on the glued pentagons, with edge-feasible marginals"""
    glued = build_glued_cycles(COUNTEREXAMPLE_SPEC)
    model = counterexample.glued_model()
    assert model.n == 8 and model.dim == 6
    assert validate_model(model, glued.graph).ok
    p = counterexample_glued_marginals(counterexample)
    assert edge_exclusivity_feasible(glued.graph, p).ok
    assert_close(math.fsum(p[v] for v in glued.unprimed), SQRT5)
    assert_close(math.fsum(p[v] for v in glued.primed), PRIMED_SUM_AT_0_2)
