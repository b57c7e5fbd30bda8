"""Commutation-graph combinatorics: stable sets, cliques, odd holes and glued cycles."""

import itertools
import logging
import math
from typing import List, Optional, Sequence, Tuple, Union

import networkx as nx

from contextlab.exceptions import InvalidArgumentError, ResourceLimitError
from contextlab.models import (
    CommutationGraph, ContextualityWitness, GluedCycles, GluedCycleSpec,
    PerfectnessWitness, StableLabeling, VertexSubset, WitnessKind
)

# Exhaustive searches (stable sets, cliques, holes) are capped at this many vertices.
MAX_EXHAUSTIVE_VERTICES = 20

logger = logging.getLogger(__name__)


def _check_size(g, operation):
    if g.n > MAX_EXHAUSTIVE_VERTICES:
        raise ResourceLimitError(
            f"{operation} is limited to {MAX_EXHAUSTIVE_VERTICES} vertices, "
            f"graph has {g.n}"
        )


def _check_count(k, minimum, what):
    if isinstance(k, bool) or not isinstance(k, int) or k < minimum:
        raise InvalidArgumentError(f"{what} must be an integer >= {minimum}, got {k!r}")


def build_cycle(k: int) -> CommutationGraph:
    """
    Build the cycle C_k with edges (i, i+1 mod k).

    Raises:
        InvalidArgumentError: If k < 3
    """
    _check_count(k, 3, "cycle length")
    return CommutationGraph.from_networkx(nx.cycle_graph(k))


def build_path(k: int) -> CommutationGraph:
    """Build the path on k vertices."""
    _check_count(k, 1, "path length")
    return CommutationGraph.from_networkx(nx.path_graph(k))


def build_complete(k: int) -> CommutationGraph:
    """Build the complete graph K_k (every pair compatible)."""
    _check_count(k, 1, "vertex count")
    return CommutationGraph.from_networkx(nx.complete_graph(k))


def build_empty(k: int) -> CommutationGraph:
    """Build the edgeless graph on k vertices."""
    _check_count(k, 1, "vertex count")
    return CommutationGraph(n=k)


def build_complement(g: CommutationGraph) -> CommutationGraph:
    """Edge (i, j) is present iff it is absent in g."""
    return CommutationGraph.from_networkx(nx.complement(g.to_networkx()))


def validate_subset(g: CommutationGraph, s: Sequence[int]) -> VertexSubset:
    """
    Check that s is a nonempty list of distinct in-range vertices.

    Returns:
        s as a tuple

    Raises:
        InvalidArgumentError: If s is empty, repeats a vertex or leaves 0..n-1
    """
    subset = tuple(s)
    if not subset:
        raise InvalidArgumentError("vertex subset must not be empty")
    for vertex in subset:
        if isinstance(vertex, bool) or not isinstance(vertex, int):
            raise InvalidArgumentError(f"vertex {vertex!r} is not an integer index")
        if not 0 <= vertex < g.n:
            raise InvalidArgumentError(
                f"vertex {vertex + 1} is outside the graph (labels 1..{g.n})"
            )
    if len(set(subset)) != len(subset):
        raise InvalidArgumentError(f"vertex subset {subset} repeats a vertex")
    return subset


def induced_subgraph(g: CommutationGraph, s: Sequence[int]) -> CommutationGraph:
    """
    Induced subgraph on s, relabelled 0..|s|-1 in the order of s.

    Raises:
        InvalidArgumentError: If s is not a valid subset of g
    """
    subset = validate_subset(g, s)
    edges = [
        (a, b) for a, b in itertools.combinations(range(len(subset)), 2)
        if g.has_edge(subset[a], subset[b])
    ]
    return CommutationGraph.from_edges(len(subset), edges)


def is_clique(g: CommutationGraph, s: Sequence[int]) -> bool:
    """True if every pair in s is compatible."""
    subset = validate_subset(g, s)
    return all(g.has_edge(i, j) for i, j in itertools.combinations(subset, 2))


def _induced_edge_count(g, subset):
    return sum(1 for i, j in itertools.combinations(subset, 2) if g.has_edge(i, j))


def is_induced_cycle(g: CommutationGraph, order: Sequence[int]) -> bool:
    """True if order, read cyclically, is a chordless cycle of g with at least 3 vertices."""
    subset = validate_subset(g, order)
    k = len(subset)
    if k < 3:
        return False
    if not all(g.has_edge(subset[i], subset[(i + 1) % k]) for i in range(k)):
        return False
    return _induced_edge_count(g, subset) == k


def is_induced_antihole(g: CommutationGraph, order: Sequence[int]) -> bool:
    """True if order, read cyclically, is a chordless cycle of the complement of g."""
    subset = validate_subset(g, order)
    k = len(subset)
    if k < 5:
        return False
    if any(g.has_edge(subset[i], subset[(i + 1) % k]) for i in range(k)):
        return False
    return _induced_edge_count(g, subset) == k * (k - 1) // 2 - k


def enumerate_stable_sets(g: CommutationGraph) -> List[StableLabeling]:
    """
    Every stable set of g (the empty set included), exactly once.

    Labelings come out in lexicographic order of their 0/1 vectors, vertex 0
    being the most significant position.

    Raises:
        ResourceLimitError: If g has more than MAX_EXHAUSTIVE_VERTICES vertices
    """
    _check_size(g, "stable-set enumeration")
    labelings = []
    bits = [0] * g.n

    def extend(vertex):
        if vertex == g.n:
            labelings.append(StableLabeling(tuple(bits)))
            return
        extend(vertex + 1)
        if not any(bits[u] for u in g.adjacency[vertex] if u < vertex):
            bits[vertex] = 1
            extend(vertex + 1)
            bits[vertex] = 0

    extend(0)
    logger.debug("enumerated %d stable sets on %d vertices", len(labelings), g.n)
    return labelings


def enumerate_maximal_cliques(g: CommutationGraph) -> List[VertexSubset]:
    """
    All maximal cliques, each as a sorted tuple, in lexicographic order.

    Raises:
        ResourceLimitError: If g has more than MAX_EXHAUSTIVE_VERTICES vertices
    """
    _check_size(g, "clique enumeration")
    return sorted(tuple(sorted(clique)) for clique in nx.find_cliques(g.to_networkx()))


def independence_number(g: CommutationGraph) -> int:
    """
    Size of the largest stable set (maximum clique of the complement).

    Raises:
        ResourceLimitError: If g has more than MAX_EXHAUSTIVE_VERTICES vertices
    """
    _check_size(g, "independence number")
    complement = nx.complement(g.to_networkx())
    clique, _ = nx.max_weight_clique(complement, weight=None)
    return len(clique)


def _canonical_cycle(cycle):
    """Rotate so the smallest vertex leads, then orient toward the smaller neighbour."""
    start = cycle.index(min(cycle))
    rotated = cycle[start:] + cycle[:start]
    if rotated[-1] < rotated[1]:
        rotated = [rotated[0]] + rotated[:0:-1]
    return tuple(rotated)


def find_odd_hole(g: CommutationGraph) -> Optional[VertexSubset]:
    """
    First induced chordless odd cycle of length >= 5, in cycle order.

    The cycle is rotated to start at its smallest vertex and oriented toward
    the smaller of that vertex's two cycle neighbours.

    Returns:
        The hole, or None if g has none

    Raises:
        ResourceLimitError: If g has more than MAX_EXHAUSTIVE_VERTICES vertices
    """
    _check_size(g, "odd-hole search")
    for cycle in nx.chordless_cycles(g.to_networkx()):
        if len(cycle) >= 5 and len(cycle) % 2 == 1:
            hole = _canonical_cycle(list(cycle))
            logger.debug("found odd hole %s", hole)
            return hole
    return None


def is_perfect(g: CommutationGraph) -> PerfectnessWitness:
    """
    Perfectness by exhaustive odd-hole search in g and in its complement.

    An odd hole of the complement is returned as an antihole witness: the
    subgraph of g it induces is the complement of a cycle in that order.

    Raises:
        ResourceLimitError: If g has more than MAX_EXHAUSTIVE_VERTICES vertices
    """
    hole = find_odd_hole(g)
    if hole is not None:
        logger.info("graph is imperfect: odd hole of length %d", len(hole))
        return PerfectnessWitness(perfect=False, kind=WitnessKind.HOLE, witness=hole)
    antihole = find_odd_hole(build_complement(g))
    if antihole is not None:
        logger.info("graph is imperfect: odd antihole of length %d", len(antihole))
        return PerfectnessWitness(perfect=False, kind=WitnessKind.ANTIHOLE, witness=antihole)
    return PerfectnessWitness(perfect=True)


def _odd_witness(kind, m):
    try:
        kind = WitnessKind(kind)
    except ValueError as e:
        raise InvalidArgumentError(f"unknown witness kind {kind!r}") from e
    if isinstance(m, bool) or not isinstance(m, int) or m < 5 or m % 2 == 0:
        raise InvalidArgumentError(f"m must be an odd integer >= 5, got {m!r}")
    return kind


def theta_closed_form(kind: Union[WitnessKind, str], m: int) -> float:
    """
    Lovasz number of the odd hole C_m or the odd antihole (complement of C_m).

    Raises:
        InvalidArgumentError: If m is even or below 5, or kind is unknown
    """
    kind = _odd_witness(kind, m)
    c = math.cos(math.pi / m)
    if kind is WitnessKind.HOLE:
        return m * c / (1.0 + c)
    return (1.0 + c) / c


def alpha_closed_form(kind: Union[WitnessKind, str], m: int) -> int:
    """
    Independence number of the odd hole C_m ((m - 1) / 2) or the odd
    antihole (2). No size limit, unlike independence_number.

    Raises:
        InvalidArgumentError: If m is even or below 5, or kind is unknown
    """
    if _odd_witness(kind, m) is WitnessKind.HOLE:
        return (m - 1) // 2
    return 2


def contextuality_witness(g: CommutationGraph) -> ContextualityWitness:
    """
    Perfectness verdict plus, for imperfect graphs, the alpha and theta of the
    witness subgraph (theta > alpha is the gap a quantum model can open).
    """
    perfectness = is_perfect(g)
    if perfectness.perfect:
        return ContextualityWitness(perfectness=perfectness)
    witness_graph = induced_subgraph(g, perfectness.witness)
    return ContextualityWitness(
        perfectness=perfectness,
        alpha=independence_number(witness_graph),
        theta=theta_closed_form(perfectness.kind, len(perfectness.witness)),
    )


def build_glued_cycles(spec: GluedCycleSpec) -> GluedCycles:
    """
    Two odd n-cycles A_1..A_n and A'_1..A'_n glued along A'_1 = A_1 and
    A'_m = A_{n+2-m}, on 2n-2 vertices.

    Vertices 0..n-1 are A_1..A_n; the free primed vertices A'_j (j not in
    {1, m}) follow in increasing j.
    """
    n, m, shared = spec.n, spec.m, spec.shared_index
    unprimed = tuple(range(n))
    names = [f"A{i}" for i in range(1, n + 1)]
    primed = [0] * n
    primed[m - 1] = shared - 1
    for j in range(2, n + 1):
        if j == m:
            continue
        primed[j - 1] = len(names)
        names.append(f"A'{j}")
    names[0] = "A1=A'1"
    names[shared - 1] = f"A{shared}=A'{m}"
    edges = [(cycle[i], cycle[(i + 1) % n]) for cycle in (unprimed, primed) for i in range(n)]
    graph = CommutationGraph.from_edges(2 * n - 2, edges)
    return GluedCycles(spec=spec, graph=graph, unprimed=unprimed,
                       primed=tuple(primed), names=tuple(names))


def decompose_glued_into_even_cycles(spec: GluedCycleSpec) -> Tuple[VertexSubset, VertexSubset]:
    """
    Split the glued graph into the even cycles
    (A_1, ..., A_{n+2-m}, A'_{m+1}, ..., A'_n) of length 2n+2-2m and
    (A_1, A'_2, ..., A'_{m-1}, A_{n+2-m}, ..., A_n) of length 2m-2.
    """
    glued = build_glued_cycles(spec)
    m, shared = spec.m, spec.shared_index
    first = glued.unprimed[:shared] + glued.primed[m:]
    second = glued.primed[:m - 1] + glued.unprimed[shared - 1:]
    return first, second
