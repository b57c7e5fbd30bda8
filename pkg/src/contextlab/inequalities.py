"""
Contextuality inequalities and the monogamy engine.

KCBS-type sums compare sum_i P(A_i = 1) over an odd hole (or antihole) with
its independence number. Entropic chains
    E = -sum_{i<k} H(A_i | A_{i+1}) + H(A_1 | A_k)
are nonpositive whenever a joint distribution exists. On two odd cycles
glued along two vertices the two entropic values add up to the values of
two even cycles, which are perfect graphs, so E1 + E2 <= 0.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.special import entr

from contextlab.distributions import edge_exclusivity_feasible, subset_joint_from_marginals
from contextlab.exceptions import (
    InfeasibleMarginalsError, InvalidArgumentError, NumericalDegeneracyError
)
from contextlab.graph_core import (
    build_complete, build_glued_cycles, decompose_glued_into_even_cycles,
    independence_number, induced_subgraph, is_induced_antihole, is_induced_cycle,
    validate_subset
)
from contextlab.models import (
    FEASIBILITY_TOL, CommutationGraph, EntropicReport, GluedCycleSpec, HarnessSummary,
    KcbsReport, MarginalVector, MonogamyReport, SubsetDistribution
)

LN2 = math.log(2.0)
DEFAULT_STREAMS = 8
MAX_BATCH_ROWS = 200_000
MIN_BATCH_ROWS = 1_024

logger = logging.getLogger(__name__)


def _check_lengths(g, p):
    if p.n != g.n:
        raise InvalidArgumentError(
            f"marginal vector has {p.n} entries but the graph has {g.n} vertices"
        )


def _exclusivity_sum(g, order, p):
    _check_lengths(g, p)
    total = math.fsum(p[v] for v in order)
    bound = independence_number(induced_subgraph(g, order))
    return KcbsReport(subset=tuple(order), sum=total, bound=bound)


def kcbs_value(g: CommutationGraph, cycle: Sequence[int], p: MarginalVector) -> KcbsReport:
    """
    sum of p over a chordless cycle of g against the cycle's independence number.

    Raises:
        InvalidArgumentError: If cycle is not an induced cycle of g
    """
    order = validate_subset(g, cycle)
    if not is_induced_cycle(g, order):
        raise InvalidArgumentError(f"{[v + 1 for v in order]} is not a chordless cycle")
    return _exclusivity_sum(g, order, p)


def antihole_kcbs_value(g: CommutationGraph, order: Sequence[int],
                        p: MarginalVector) -> KcbsReport:
    """
    Same sum over an odd antihole (bound 2).

    Raises:
        InvalidArgumentError: If order does not induce an antihole of g
    """
    subset = validate_subset(g, order)
    if not is_induced_antihole(g, subset):
        raise InvalidArgumentError(f"{[v + 1 for v in subset]} is not an induced antihole")
    return _exclusivity_sum(g, subset, p)


def _bits(values):
    """Shannon entropy in bits of a list of probabilities (0 log 0 = 0)."""
    return float(np.sum(entr(np.clip(np.asarray(values, dtype=float), 0.0, None)))) / LN2


def pairwise_joint(p_first: float, p_second: float) -> SubsetDistribution:
    """Joint of two exclusive observables with P(+1) = p_first and p_second."""
    return subset_joint_from_marginals(build_complete(2),
                                       MarginalVector((p_first, p_second)), (0, 1))


def conditional_entropy(joint: SubsetDistribution) -> float:
    """
    H(first | second) = H(first, second) - H(second) in bits.

    Raises:
        InvalidArgumentError: If joint is not a normalized pair distribution
    """
    if len(joint.subset) != 2:
        raise InvalidArgumentError("conditional entropy needs a pair distribution")
    if abs(joint.total() - 1.0) > FEASIBILITY_TOL:
        raise InvalidArgumentError("pair distribution is not normalized")
    second = [
        math.fsum(mass for outcome, mass in joint.table.items() if outcome[1] == b)
        for b in (1, -1)
    ]
    return max(0.0, _bits(list(joint.table.values())) - _bits(second))


def entropic_chain_value(g: CommutationGraph, cycle: Sequence[int],
                         p: MarginalVector) -> EntropicReport:
    """
    E = -sum_{i<k} H(A_i|A_{i+1}) + H(A_1|A_k) along cycle, in bits, with
    every pair joint taken from subset_joint_from_marginals.

    Raises:
        InvalidArgumentError: If cycle is not an induced cycle of g
        InfeasibleMarginalsError: If p sums above 1 on a cycle edge
    """
    order = validate_subset(g, cycle)
    if not is_induced_cycle(g, order):
        raise InvalidArgumentError(f"{[v + 1 for v in order]} is not a chordless cycle")
    _check_lengths(g, p)
    terms = tuple(
        conditional_entropy(subset_joint_from_marginals(g, p, (order[i], order[i + 1])))
        for i in range(len(order) - 1)
    )
    closing = conditional_entropy(subset_joint_from_marginals(g, p, (order[0], order[-1])))
    return EntropicReport(cycle=order, chain_terms=terms, closing=closing,
                          value=closing - math.fsum(terms))


def _edge_conditional_entropy(first, second):
    """Vectorized H(A|B) in bits for exclusive pairs with P(A=1)=first, P(B=1)=second."""
    rest = np.clip(1.0 - first - second, 0.0, None)
    return np.clip((entr(first) + entr(rest) - entr(1.0 - second)) / LN2, 0.0, None)


def chain_values(P: np.ndarray, cycle: Sequence[int]) -> np.ndarray:  # pylint: disable=C0103
    """
    Entropic chain value for every row of an (N, V) array of marginals.

    No graph checks happen here; rows must be feasible on the cycle edges.
    """
    P = np.asarray(P, dtype=float)
    order = list(cycle)
    chain = np.zeros(P.shape[0])
    for i in range(len(order) - 1):
        chain += _edge_conditional_entropy(P[:, order[i]], P[:, order[i + 1]])
    return _edge_conditional_entropy(P[:, order[0]], P[:, order[-1]]) - chain


def alternating_witness(n: int) -> MarginalVector:
    """
    p = (1/3, 2/3, ..., 2/3, 1/3) on an odd cycle: every chain edge is
    deterministic and the closing pair leaves 2/3 bit, so E = +2/3.
    This is a no-disturbance assignment; quantum realizability is not claimed.
    """
    if isinstance(n, bool) or not isinstance(n, int) or n < 3 or n % 2 == 0:
        raise InvalidArgumentError(f"witness needs an odd cycle length >= 3, got {n!r}")
    return MarginalVector(tuple(1.0 / 3.0 if i % 2 == 0 else 2.0 / 3.0 for i in range(n)))


def glued_witness(spec: GluedCycleSpec) -> MarginalVector:
    """The alternating witness on A_1..A_n with every free primed vertex at 0."""
    values = list(alternating_witness(spec.n).p) + [0.0] * (spec.n - 2)
    return MarginalVector(tuple(values))


def verify_monogamy(spec: GluedCycleSpec, p: MarginalVector) -> MonogamyReport:
    """
    Entropic values of both odd cycles and of the two even cycles that
    decompose the glued graph.

    Raises:
        InfeasibleMarginalsError: If p sums above 1 on an edge of the glued graph
        NumericalDegeneracyError: If E1 + E2 and the even-cycle sum drift apart
    """
    glued = build_glued_cycles(spec)
    _check_lengths(glued.graph, p)
    check = edge_exclusivity_feasible(glued.graph, p)
    if not check.ok:
        i, j = check.worst
        raise InfeasibleMarginalsError(
            f"edge ({glued.names[i]}, {glued.names[j]}) sums to {check.value!r} > 1"
        )
    first = entropic_chain_value(glued.graph, glued.unprimed, p)
    second = entropic_chain_value(glued.graph, glued.primed, p)
    certificates = tuple(
        entropic_chain_value(glued.graph, cycle, p)
        for cycle in decompose_glued_into_even_cycles(spec)
    )
    residual = abs(first.value + second.value - certificates[0].value - certificates[1].value)
    if residual > FEASIBILITY_TOL:
        raise NumericalDegeneracyError(f"decomposition identity off by {residual:.3g}")
    report = MonogamyReport(spec=spec, first=first, second=second,
                            certificates=certificates, identity_residual=residual)
    logger.info("monogamy n=%d m=%d: E1=%.9g E2=%.9g", spec.n, spec.m,
                first.value, second.value)
    return report


def sample_edge_feasible(g: CommutationGraph, count: int,
                         rng: np.random.Generator) -> Tuple[np.ndarray, int]:
    """
    Rejection-sample count points uniformly from
    {p in [0,1]^n : p_i + p_j <= 1 on every edge}.

    Batches grow with the observed acceptance rate.

    Returns:
        (array of shape (count, n), number of points drawn)
    """
    edges = np.array(g.sorted_edges(), dtype=int).reshape(-1, 2)
    accepted, have, drawn, rate = [], 0, 0, 1.0
    while have < count:
        need = count - have
        rows = int(min(MAX_BATCH_ROWS, max(MIN_BATCH_ROWS, math.ceil(1.2 * need / rate))))
        draws = rng.random((rows, g.n))
        drawn += rows
        keep = np.all(draws[:, edges[:, 0]] + draws[:, edges[:, 1]] <= 1.0, axis=1)
        kept = draws[keep][:need]
        accepted.append(kept)
        have += kept.shape[0]
        rate = max(have, 1) / drawn
    return np.vstack(accepted), drawn


def _quotas(samples, streams):
    base, extra = divmod(samples, streams)
    return [base + (1 if index < extra else 0) for index in range(streams)]


def monogamy_random_harness(spec: GluedCycleSpec, samples: int, seed: int,  # pylint: disable=R0913,R0914
                            fixed_points: Optional[Sequence[MarginalVector]] = None,
                            streams: int = DEFAULT_STREAMS,
                            workers: int = 1) -> HarnessSummary:
    """
    Seeded sweep of E1 + E2 over random edge-feasible marginals on the glued graph.

    The sample budget is split into `streams` generators spawned from one
    SeedSequence, so the summary depends only on (samples, seed, streams),
    not on `workers`. Fixed points (default: glued_witness(spec)) are evaluated
    alongside the random points.

    Raises:
        InvalidArgumentError: If samples or streams < 1, or seed < 0
        InfeasibleMarginalsError: If a fixed point is not edge-feasible
    """
    if samples < 1:
        raise InvalidArgumentError(f"samples must be at least 1, got {samples}")
    if seed < 0:
        raise InvalidArgumentError(f"seed must be nonnegative, got {seed}")
    if streams < 1:
        raise InvalidArgumentError(f"streams must be at least 1, got {streams}")
    glued = build_glued_cycles(spec)
    if fixed_points is None:
        fixed_points = [glued_witness(spec)]
    for fixed_point in fixed_points:
        _check_lengths(glued.graph, fixed_point)
        if not edge_exclusivity_feasible(glued.graph, fixed_point).ok:
            raise InfeasibleMarginalsError("fixed point is not feasible on the glued graph")

    children = np.random.SeedSequence(seed).spawn(streams)
    jobs = [(child, quota) for child, quota in zip(children, _quotas(samples, streams)) if quota]

    def run(job):
        child, quota = job
        return sample_edge_feasible(glued.graph, quota, np.random.default_rng(child))

    with ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
        results = list(executor.map(run, jobs))
    drawn = sum(used for _, used in results)
    logger.debug("drew %d points for %d samples", drawn, samples)

    points = np.vstack([block for block, _ in results] + [fixed_point.as_array()[None, :]
                                                           for fixed_point in fixed_points])
    first = chain_values(points, glued.unprimed)
    second = chain_values(points, glued.primed)
    evens = [chain_values(points, cycle) for cycle in decompose_glued_into_even_cycles(spec)]
    totals = first + second
    first_bad = first > FEASIBILITY_TOL
    second_bad = second > FEASIBILITY_TOL
    return HarnessSummary(
        spec=spec,
        samples=samples,
        seed=seed,
        drawn=drawn,
        fixed_points=len(fixed_points),
        max_sum=float(np.max(totals)),
        max_single=float(max(np.max(first), np.max(second))),
        first_violations=int(np.count_nonzero(first_bad)),
        second_violations=int(np.count_nonzero(second_bad)),
        both_violations=int(np.count_nonzero(first_bad & second_bad)),
        max_identity_residual=float(np.max(np.abs(totals - evens[0] - evens[1]))),
        max_even_value=float(max(np.max(evens[0]), np.max(evens[1]))),
    )
