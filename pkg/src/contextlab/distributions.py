"""
Probability machinery of the yes-no scenario.

Under exclusivity the single marginals p_i = P(A_i = 1) fix the distribution
of every jointly measurable subset (a clique of the commutation graph). This
module computes those subset tables, tests p against the fractional and
integral vertex-packing polytopes, decomposes p into stable labelings and
builds the joint distribution that the decomposition induces.
"""

import itertools
import logging
import math
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import linprog

from contextlab.exceptions import (
    InfeasibleMarginalsError, InvalidArgumentError, NumericalDegeneracyError
)
from contextlab.graph_core import (
    enumerate_maximal_cliques, enumerate_stable_sets, is_clique, validate_subset
)
from contextlab.models import (
    DEGENERACY_TOL, EDGE_SLACK, FEASIBILITY_TOL,
    CommutationGraph, ConstraintCheck, JointDistribution, MarginalVector,
    Prop2Report, StableSetDecomposition, SubsetDistribution
)

# HiGHS dual simplex: deterministic pivoting for a fixed problem.
LP_METHOD = 'highs-ds'
LP_OPTIONS = {
    'primal_feasibility_tolerance': 1e-10,
    'dual_feasibility_tolerance': 1e-10,
}

logger = logging.getLogger(__name__)


def _check_lengths(g, p):
    if p.n != g.n:
        raise InvalidArgumentError(
            f"marginal vector has {p.n} entries but the graph has {g.n} vertices"
        )


def _outcomes(size):
    return itertools.product((1, -1), repeat=size)


def subset_joint_from_marginals(g: CommutationGraph, p: MarginalVector,
                                s: Sequence[int]) -> SubsetDistribution:
    """
    Distribution of a jointly measurable subset from the single marginals.

    Tuples with two or more +1 entries get 0, the tuple whose only +1 sits
    at j gets p_j, and the all -1 tuple gets 1 - sum(p over s).

    Args:
        g: Commutation graph
        p: Marginal vector over all vertices of g
        s: Vertices of a clique of g

    Raises:
        InvalidArgumentError: If s is not a clique of g or lengths disagree
        InfeasibleMarginalsError: If p sums above 1 over s
    """
    subset = validate_subset(g, s)
    _check_lengths(g, p)
    if not is_clique(g, subset):
        raise InvalidArgumentError(
            f"subset {[v + 1 for v in subset]} is not jointly measurable (not a clique)"
        )
    values = [p[v] for v in subset]
    total = math.fsum(values)
    if total > 1.0 + EDGE_SLACK:
        raise InfeasibleMarginalsError(
            f"marginals sum to {total!r} > 1 on {[v + 1 for v in subset]}"
        )
    table = {}
    for outcome in _outcomes(len(subset)):
        ups = [position for position, a in enumerate(outcome) if a == 1]
        if not ups:
            table[outcome] = max(0.0, 1.0 - total)
        elif len(ups) == 1:
            table[outcome] = values[ups[0]]
        else:
            table[outcome] = 0.0
    return SubsetDistribution(subset=subset, table=table)


def edge_exclusivity_feasible(g: CommutationGraph, p: MarginalVector) -> ConstraintCheck:
    """
    Check p_i + p_j <= 1 on every edge.

    Returns:
        ConstraintCheck whose worst entry is the edge with the largest sum
        (None for an edgeless graph) and whose value is that sum
    """
    _check_lengths(g, p)
    worst, worst_sum = None, 0.0
    for i, j in g.sorted_edges():
        edge_sum = p[i] + p[j]
        if worst is None or edge_sum > worst_sum:
            worst, worst_sum = (i, j), edge_sum
    return ConstraintCheck(ok=worst_sum <= 1.0 + EDGE_SLACK, worst=worst, value=worst_sum)


def fvp_membership(g: CommutationGraph, p: MarginalVector) -> ConstraintCheck:
    """
    Membership of p in the fractional vertex packing polytope: every maximal
    clique sums to at most 1 (nonnegativity holds for any MarginalVector).

    Returns:
        ConstraintCheck whose worst entry is the clique with the largest sum

    Raises:
        ResourceLimitError: If g is too large for clique enumeration
    """
    _check_lengths(g, p)
    worst, worst_sum = None, 0.0
    for clique in enumerate_maximal_cliques(g):
        clique_sum = math.fsum(p[v] for v in clique)
        if worst is None or clique_sum > worst_sum:
            worst, worst_sum = clique, clique_sum
    return ConstraintCheck(ok=worst_sum <= 1.0 + EDGE_SLACK, worst=worst, value=worst_sum)


def decompose_into_stable_sets(g: CommutationGraph,
                               p: MarginalVector) -> Optional[StableSetDecomposition]:
    """
    Write p as a convex combination of stable labelings.

    Solves the feasibility LP  Q^T alpha = p, 1^T alpha = 1, alpha >= 0 over
    every stable labeling of g. Any feasible decomposition may come back.

    Returns:
        StableSetDecomposition, or None when p lies outside the vertex
        packing polytope

    Raises:
        ResourceLimitError: If g is too large for stable-set enumeration
        NumericalDegeneracyError: If the solution residual is above 1e-9
            but below 1e-6
    """
    _check_lengths(g, p)
    labelings = enumerate_stable_sets(g)
    q = np.array([labeling.q for labeling in labelings], dtype=float)
    target = p.as_array()
    a_eq = np.vstack([q.T, np.ones((1, len(labelings)))])
    b_eq = np.append(target, 1.0)
    result = linprog(np.zeros(len(labelings)), A_eq=a_eq, b_eq=b_eq, bounds=(0, None),
                     method=LP_METHOD, options=LP_OPTIONS)
    if result.status == 2:
        logger.info("p lies outside the vertex packing polytope")
        return None
    if not result.success:
        logger.warning("stable-set LP did not finish: %s", result.message)
        return None

    alpha = np.clip(result.x, 0.0, None)
    alpha = alpha / alpha.sum()
    residual = float(np.max(np.abs(alpha @ q - target)))
    if residual >= DEGENERACY_TOL:
        logger.warning("stable-set LP residual %.3g; treating p as infeasible", residual)
        return None
    if residual > FEASIBILITY_TOL:
        raise NumericalDegeneracyError(f"stable-set decomposition residual {residual:.3g}")

    support = np.flatnonzero(alpha > 0.0)
    logger.debug("decomposition uses %d of %d stable sets", support.size, len(labelings))
    return StableSetDecomposition(
        weights=tuple(float(alpha[k]) for k in support),
        labelings=tuple(labelings[k] for k in support),
        residual=residual,
    )


def construct_joint_distribution(decomp: StableSetDecomposition) -> JointDistribution:
    """
    Joint distribution putting mass alpha_k on the outcome a_i = 2 q_i^(k) - 1.
    Masses of repeated outcomes merge.
    """
    return JointDistribution(
        n=decomp.n,
        masses=tuple((labeling.outcome, weight)
                     for weight, labeling in zip(decomp.weights, decomp.labelings)),
    )


def marginalize(F: JointDistribution, s: Sequence[int]) -> SubsetDistribution:  # pylint: disable=C0103
    """
    Sum F over the coordinates outside s.

    Raises:
        InvalidArgumentError: If s is empty, repeats or leaves 0..n-1
    """
    subset = tuple(s)
    if not subset or len(set(subset)) != len(subset) or any(
            not 0 <= v < F.n for v in subset):
        raise InvalidArgumentError(f"invalid subset {subset} for {F.n} observables")
    buckets = {outcome: [] for outcome in _outcomes(len(subset))}
    for outcome, mass in F.masses:
        buckets[tuple(outcome[v] for v in subset)].append(mass)
    return SubsetDistribution(
        subset=subset,
        table={outcome: math.fsum(masses) for outcome, masses in buckets.items()},
    )


def verify_prop2_conditions(g: CommutationGraph, F: JointDistribution,  # pylint: disable=C0103
                            p: MarginalVector, tol: float = FEASIBILITY_TOL) -> Prop2Report:
    """
    Check that F is a joint distribution recovering p on a graph g:
    (A) nonnegative, (B) normalized, (C) no mass where two compatible
    observables are both +1, (D) single marginals equal p.

    Each condition holds when its worst residual is at most tol.
    """
    _check_lengths(g, p)
    if F.n != g.n:
        raise InvalidArgumentError(
            f"joint distribution has {F.n} coordinates but the graph has {g.n} vertices"
        )
    masses = [mass for _, mass in F.masses]
    negative = max([0.0] + [-mass for mass in masses])
    normalization = abs(math.fsum(masses) - 1.0)
    exclusivity = max([0.0] + [
        abs(mass) for outcome, mass in F.masses
        if any(outcome[i] == 1 and outcome[j] == 1 for i, j in g.edges)
    ])
    marginal = max([0.0] + [
        abs(math.fsum(mass for outcome, mass in F.masses if outcome[i] == 1) - p[i])
        for i in range(g.n)
    ])
    residuals = {"A": negative, "B": normalization, "C": exclusivity, "D": marginal}
    return Prop2Report(
        nonnegative=negative <= tol,
        normalized=normalization <= tol,
        exclusive=exclusivity <= tol,
        marginals_match=marginal <= tol,
        residuals=residuals,
    )


def clique_marginal_residual(g: CommutationGraph, F: JointDistribution,  # pylint: disable=C0103
                             p: MarginalVector) -> float:
    """
    Worst gap between F marginalized onto a maximal clique and the table that
    subset_joint_from_marginals assigns to the same clique.

    Raises:
        InfeasibleMarginalsError: If p sums above 1 on some clique
    """
    worst = 0.0
    for clique in enumerate_maximal_cliques(g):
        recovered = marginalize(F, clique)
        expected = subset_joint_from_marginals(g, p, clique)
        for outcome, value in expected.table.items():
            worst = max(worst, abs(recovered.prob(outcome) - value))
    return worst
