"""
Tests for inequalities: KCBS-type sums, conditional entropies, entropic
chains, the monogamy check and the seeded sweep.
"""

import math

import numpy as np
import pytest
from helpers import (
    assert_close, ALTERNATING_PENTAGON, EDGE_ENTROPY_0_4, GLUED_SPECS, SQRT5,
    UMBRELLA_5_MARGINAL, YU_OH_PENTAGON
)
from contextlab.exceptions import InfeasibleMarginalsError, InvalidArgumentError
from contextlab.graph_core import (
    build_complement, build_cycle, build_glued_cycles, decompose_glued_into_even_cycles
)
from contextlab.inequalities import (
    alternating_witness, antihole_kcbs_value, chain_values, conditional_entropy,
    entropic_chain_value, glued_witness, kcbs_value, monogamy_random_harness,
    pairwise_joint, sample_edge_feasible, verify_monogamy
)
from contextlab.models import GluedCycleSpec, MarginalVector, SubsetDistribution


def uniform(n, value):
    """Marginal vector with every entry equal to value."""
    return MarginalVector((value,) * n)


# ============================================================================
# KCBS-type sums
# ============================================================================

def test_kcbs_umbrella_violates():
    """Test kcbs_value - umbrella marginals on C_5 sum to sqrt(5) against alpha=2"""
    report = kcbs_value(build_cycle(5), range(5), uniform(5, UMBRELLA_5_MARGINAL))
    assert report.bound == 2
    assert_close(report.sum, SQRT5)
    assert_close(report.violation, SQRT5 - 2)


def test_kcbs_deterministic_point():
    """Test kcbs_value - p=(1,0,1,0,0) reaches the bound without violating it"""
    report = kcbs_value(build_cycle(5), range(5), MarginalVector((1, 0, 1, 0, 0)))
    assert_close(report.sum, 2.0)
    assert report.violation <= 0


def test_kcbs_on_induced_pentagon_of_larger_graph(yu_oh_graph):
    """Test kcbs_value - works on an induced pentagon inside the 13-ray graph"""
    report = kcbs_value(yu_oh_graph, YU_OH_PENTAGON, uniform(13, 0.4))
    assert report.bound == 2
    assert_close(report.sum, 2.0)


def test_kcbs_rejects_non_cycle():
    """Test kcbs_value - the order must be a chordless cycle"""
    with pytest.raises(InvalidArgumentError):
        kcbs_value(build_cycle(5), (0, 2, 1, 3, 4), uniform(5, 0.4))


def test_antihole_sum():
    """Test antihole_kcbs_value - bound 2 on the complement of C_7"""
    g = build_complement(build_cycle(7))
    report = antihole_kcbs_value(g, range(7), uniform(7, 0.3))
    assert report.bound == 2
    assert_close(report.sum, 2.1)
    assert report.violation > 0


def test_antihole_sum_rejects_hole():
    """Test antihole_kcbs_value - a plain cycle is not an antihole"""
    with pytest.raises(InvalidArgumentError):
        antihole_kcbs_value(build_cycle(7), range(7), uniform(7, 0.3))


# ============================================================================
# Conditional entropy
# ============================================================================

def test_conditional_entropy_deterministic():
    """Test conditional_entropy - p=(0.5, 0.5) makes A a function of B"""
    assert_close(conditional_entropy(pairwise_joint(0.5, 0.5)), 0.0, 1e-12)


def test_conditional_entropy_independent_fair_bit():
    """Test conditional_entropy - p=(0.5, 0) gives a fair bit independent of B"""
    assert_close(conditional_entropy(pairwise_joint(0.5, 0.0)), 1.0, 1e-12)


def test_conditional_entropy_edge_value():
    """Test conditional_entropy - p=(0.4, 0.4) on an exclusive pair"""
    assert_close(conditional_entropy(pairwise_joint(0.4, 0.4)), EDGE_ENTROPY_0_4)


def test_conditional_entropy_in_unit_interval():
    """Test conditional_entropy - values lie in [0, 1] bits on a grid of feasible pairs"""
    for first in np.linspace(0.0, 1.0, 11):
        for second in np.linspace(0.0, 1.0 - first, 7):
            value = conditional_entropy(pairwise_joint(first, second))
            assert -1e-12 <= value <= 1.0 + 1e-12


def binary_entropy(x):
    """H of a bit with P(1) = x, in bits."""
    return -sum(v * math.log2(v) for v in (x, 1.0 - x) if v > 0)


def test_conditioning_never_increases_entropy():
    """Test conditional_entropy - H(A|B) <= H(A) on a grid of feasible pairs"""
    for first in np.linspace(0.0, 1.0, 11):
        for second in np.linspace(0.0, 1.0 - first, 7):
            value = conditional_entropy(pairwise_joint(first, second))
            assert value <= binary_entropy(first) + 1e-12


def test_conditional_entropy_rejects_unnormalized():
    """Test conditional_entropy - tables must sum to 1"""
    table = SubsetDistribution(subset=(0, 1), table={(1, -1): 0.5, (-1, 1): 0.2})
    with pytest.raises(InvalidArgumentError):
        conditional_entropy(table)


# ============================================================================
# Entropic chains
# ============================================================================

def test_entropic_chain_deterministic_is_zero():
    """Test entropic_chain_value - a deterministic assignment gives E = 0"""
    report = entropic_chain_value(build_cycle(5), range(5), MarginalVector((1, 0, 1, 0, 0)))
    assert_close(report.value, 0.0, 1e-12)


def test_entropic_chain_uniform():
    """Test entropic_chain_value - p = 0.4 everywhere gives -3 H(A|B) per pentagon"""
    report = entropic_chain_value(build_cycle(5), range(5), uniform(5, 0.4))
    assert len(report.chain_terms) == 4
    assert_close(report.value, -3 * EDGE_ENTROPY_0_4)


def test_entropic_chain_witness():
    """Test entropic_chain_value - the alternating point violates by 2/3 bit"""
    report = entropic_chain_value(build_cycle(5), range(5), MarginalVector(ALTERNATING_PENTAGON))
    assert_close(report.value, 2 / 3)
    assert_close(report.closing, 2 / 3)


def test_entropic_chain_infeasible():
    """Test entropic_chain_value - an edge summing above 1 is infeasible"""
    with pytest.raises(InfeasibleMarginalsError):
        entropic_chain_value(build_cycle(5), range(5), MarginalVector((0.6, 0.6, 0, 0, 0)))


def test_entropic_chain_rejects_chord():
    """Test entropic_chain_value - the cycle must be chordless in g"""
    with pytest.raises(InvalidArgumentError):
        entropic_chain_value(build_complement(build_cycle(5)), range(5), uniform(5, 0.4))


@pytest.mark.parametrize("n", [5, 7, 9])
def test_alternating_witness(n):
    """Test alternating_witness - E = +2/3 on every odd cycle"""
    p = alternating_witness(n)
    assert_close(entropic_chain_value(build_cycle(n), range(n), p).value, 2 / 3)


def test_chain_values_match_scalar_path():
    """Test chain_values - vectorized values agree with entropic_chain_value"""
    g = build_cycle(7)
    rng = np.random.default_rng(3)
    points, _ = sample_edge_feasible(g, 50, rng)
    vectorized = chain_values(points, range(7))
    for row, value in zip(points, vectorized):
        assert_close(entropic_chain_value(g, range(7), MarginalVector(tuple(row))).value, value)


@pytest.mark.parametrize("k", [4, 6, 8])
def test_even_cycles_never_violate(k):
    """Test chain_values - even cycles are perfect, so E <= 0 on 10^4 random feasible points"""
    points, _ = sample_edge_feasible(build_cycle(k), 10_000, np.random.default_rng(k))
    assert np.max(chain_values(points, range(k))) <= 1e-9


# ============================================================================
# Monogamy
# ============================================================================

def test_monogamy_uniform_point():
    """Test verify_monogamy - p = 0.4 everywhere gives E1 = E2 = -3 H(A|B)"""
    report = verify_monogamy(GluedCycleSpec(n=5, m=3), uniform(8, 0.4))
    assert_close(report.first.value, -3 * EDGE_ENTROPY_0_4)
    assert_close(report.second.value, -3 * EDGE_ENTROPY_0_4)
    assert_close(report.total, -6 * EDGE_ENTROPY_0_4)
    assert report.verdict
    assert report.identity_residual <= 1e-9


@pytest.mark.parametrize("n, m", GLUED_SPECS)
def test_monogamy_witness_single_violation(n, m):
    """Test verify_monogamy - the glued witness violates E1 but not the sum"""
    report = verify_monogamy(GluedCycleSpec(n=n, m=m), glued_witness(GluedCycleSpec(n=n, m=m)))
    assert_close(report.first.value, 2 / 3)
    assert report.second.value < 0
    assert report.total <= 1e-9
    assert report.verdict
    assert all(cert.value <= 1e-9 for cert in report.certificates)


def test_monogamy_uses_even_cycles():
    """Test verify_monogamy - certificates are the even-cycle decomposition"""
    spec = GluedCycleSpec(n=7, m=4)
    report = verify_monogamy(spec, uniform(12, 0.3))
    assert tuple(cert.cycle for cert in report.certificates) == \
        decompose_glued_into_even_cycles(spec)
    assert_close(report.total,
                 report.certificates[0].value + report.certificates[1].value)


def test_monogamy_rejects_infeasible():
    """Test verify_monogamy - an infeasible glued edge is reported"""
    p = MarginalVector((0.9, 0.0, 0.0, 0.0, 0.0, 0.5, 0.0, 0.0))
    with pytest.raises(InfeasibleMarginalsError):
        verify_monogamy(GluedCycleSpec(n=5, m=3), p)


# ============================================================================
# Random harness
# ============================================================================

def test_sample_edge_feasible_respects_edges(glued_5_3):
    """Test sample_edge_feasible - every sample satisfies p_i + p_j <= 1 on every edge"""
    points, drawn = sample_edge_feasible(glued_5_3.graph, 500, np.random.default_rng(1))
    assert points.shape == (500, 8)
    assert drawn >= 500
    for i, j in glued_5_3.graph.edges:
        assert np.all(points[:, i] + points[:, j] <= 1.0)


def test_harness_is_reproducible():
    """Test monogamy_random_harness - same seed gives identical summaries, any worker count"""
    spec = GluedCycleSpec(n=5, m=3)
    first = monogamy_random_harness(spec, samples=2000, seed=11)
    second = monogamy_random_harness(spec, samples=2000, seed=11, workers=4)
    assert first == second


def test_harness_summary():
    """Test monogamy_random_harness - no sum violation, the witness fixed point violates E1"""
    spec = GluedCycleSpec(n=5, m=3)
    summary = monogamy_random_harness(spec, samples=5000, seed=42)
    assert summary.verdict
    assert summary.max_sum <= 1e-9
    assert summary.first_violations >= 1
    assert summary.max_single >= 2 / 3 - 1e-9
    assert summary.both_violations == 0
    assert summary.max_identity_residual <= 1e-9
    assert summary.max_even_value <= 1e-9
    assert summary.fixed_points == 1


def test_harness_without_fixed_points():
    """Test monogamy_random_harness - an empty fixed point list evaluates random points only"""
    summary = monogamy_random_harness(GluedCycleSpec(n=7, m=3), samples=1000, seed=5,
                                      fixed_points=[])
    assert summary.fixed_points == 0
    assert summary.max_sum <= 1e-9


@pytest.mark.parametrize("kwargs", [
    {"samples": 0, "seed": 1},
    {"samples": 10, "seed": -1},
    {"samples": 10, "seed": 1, "streams": 0},
])
def test_harness_rejects(kwargs):
    """Test monogamy_random_harness - bad sample, seed or stream counts are invalid"""
    with pytest.raises(InvalidArgumentError):
        monogamy_random_harness(GluedCycleSpec(n=5, m=3), **kwargs)


def test_harness_rejects_infeasible_fixed_point():
    """Test monogamy_random_harness - fixed points must be edge-feasible"""
    fixed_point = MarginalVector((1.0,) * 8)
    with pytest.raises(InfeasibleMarginalsError):
        monogamy_random_harness(GluedCycleSpec(n=5, m=3), samples=10, seed=1,
                                fixed_points=[fixed_point])


def test_glued_witness_layout():
    """Test glued_witness - alternating on A_1..A_n, zero on the free primed vertices"""
    p = glued_witness(GluedCycleSpec(n=5, m=3))
    glued = build_glued_cycles(GluedCycleSpec(n=5, m=3))
    assert p.n == glued.graph.n
    assert p.p[5:] == (0.0, 0.0, 0.0)
    assert_close(math.fsum(p.p), 7 / 3)
