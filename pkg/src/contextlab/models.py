"""Data models for the contextlab package"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

import networkx as nx
import numpy as np

from contextlab.exceptions import GraphValidationError, InvalidArgumentError

# Vertex indices are 0-based internally and 1-based in every file and report.
VertexSubset = Tuple[int, ...]
OutcomeTuple = Tuple[int, ...]

ORTHOGONALITY_TOL = 1e-12
FEASIBILITY_TOL = 1e-9
DEGENERACY_TOL = 1e-6
EDGE_SLACK = 1e-12
SUM_TOL = 1e-12


class WitnessKind(str, Enum):
    """Kind of induced odd subgraph that certifies imperfection"""
    HOLE = "hole"
    ANTIHOLE = "antihole"


@dataclass(frozen=True)
class CommutationGraph:
    """
    Commutation graph: vertex i houses observable A_{i+1}, an edge joins two
    compatible (hence exclusive) observables.

    Edges are stored as sorted pairs (i, j) with i < j.
    """
    n: int
    edges: FrozenSet[Tuple[int, int]] = frozenset()

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, int) or self.n < 1:
            raise InvalidArgumentError(f"vertex count must be a positive integer, got {self.n!r}")
        normalized = set()
        for edge in self.edges:
            i, j = edge
            if i == j:
                raise GraphValidationError(f"self-loop at vertex {i + 1}")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise InvalidArgumentError(
                    f"edge ({i + 1}, {j + 1}) has an endpoint outside 1..{self.n}"
                )
            normalized.add((min(i, j), max(i, j)))
        object.__setattr__(self, 'edges', frozenset(normalized))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Tuple[int, int]]) -> CommutationGraph:
        """Build a graph from 0-based pairs; duplicates and reversed pairs merge."""
        return cls(n=n, edges=frozenset(tuple(edge) for edge in edges))

    @classmethod
    def from_networkx(cls, graph: nx.Graph) -> CommutationGraph:
        """Build a graph from a networkx graph, relabelling nodes in sorted order."""
        nodes = sorted(graph.nodes())
        index = {node: position for position, node in enumerate(nodes)}
        return cls.from_edges(len(nodes), ((index[u], index[v]) for u, v in graph.edges()))

    def to_networkx(self) -> nx.Graph:
        """Return a fresh networkx graph with nodes 0..n-1 inserted in order."""
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(self.sorted_edges())
        return graph

    @cached_property
    def adjacency(self) -> Tuple[FrozenSet[int], ...]:
        """Neighbour sets, indexed by vertex"""
        neighbours: List[set] = [set() for _ in range(self.n)]
        for i, j in self.edges:
            neighbours[i].add(j)
            neighbours[j].add(i)
        return tuple(frozenset(s) for s in neighbours)

    def has_edge(self, i: int, j: int) -> bool:
        """True if vertices i and j are compatible"""
        return (min(i, j), max(i, j)) in self.edges

    def sorted_edges(self) -> List[Tuple[int, int]]:
        """Edges in lexicographic order"""
        return sorted(self.edges)


@dataclass(frozen=True)
class StableLabeling:
    """0/1 indicator vector of a stable (independent) set"""
    q: Tuple[int, ...]

    @property
    def members(self) -> VertexSubset:
        """Vertices labelled 1"""
        return tuple(i for i, bit in enumerate(self.q) if bit)

    @property
    def outcome(self) -> OutcomeTuple:
        """The deterministic outcome tuple a_i = 2 q_i - 1"""
        return tuple(2 * bit - 1 for bit in self.q)


@dataclass(frozen=True)
class GluedCycleSpec:
    """Two odd n-cycles glued along A_1 = A'_1 and A_{n+2-m} = A'_m"""
    n: int
    m: int

    def __post_init__(self):
        for name, value in (('n', self.n), ('m', self.m)):
            if isinstance(value, bool) or not isinstance(value, int):
                raise InvalidArgumentError(f"{name} must be an integer, got {value!r}")
        if self.n < 5 or self.n % 2 == 0:
            raise InvalidArgumentError(f"cycle length must be odd and at least 5, got {self.n}")
        if not 3 <= self.m <= self.n - 1:
            raise InvalidArgumentError(
                f"splice index must satisfy 3 <= m <= {self.n - 1}, got {self.m}"
            )

    @property
    def shared_index(self) -> int:
        """1-based index k of the unprimed vertex A_k identified with A'_m"""
        return self.n + 2 - self.m


@dataclass(frozen=True)
class GluedCycles:
    """
    Glued commutation graph together with both labelings.

    unprimed[i] is the vertex of A_{i+1} and primed[i] the vertex of A'_{i+1};
    names[v] is the display name of vertex v.
    """
    spec: GluedCycleSpec
    graph: CommutationGraph
    unprimed: VertexSubset
    primed: VertexSubset
    names: Tuple[str, ...]


@dataclass(frozen=True)
class PerfectnessWitness:
    """Verdict of the perfectness test; imperfect graphs carry an odd hole or antihole"""
    perfect: bool
    kind: Optional[WitnessKind] = None
    witness: Optional[VertexSubset] = None


@dataclass(frozen=True)
class ContextualityWitness:
    """Imperfection witness together with its alpha/theta gap"""
    perfectness: PerfectnessWitness
    alpha: Optional[int] = None
    theta: Optional[float] = None

    @property
    def gap(self) -> Optional[float]:
        """theta - alpha of the witness subgraph (positive when imperfect)"""
        if self.theta is None:
            return None
        return self.theta - self.alpha


@dataclass(frozen=True)
class MarginalVector:
    """p_i = P(A_i = 1) for every observable"""
    p: Tuple[float, ...]

    def __post_init__(self):
        values = tuple(float(x) for x in self.p)
        for index, value in enumerate(values):
            if not math.isfinite(value) or value < 0.0 or value > 1.0:
                raise InvalidArgumentError(
                    f"p_{index + 1} = {value!r} is not a probability"
                )
        object.__setattr__(self, 'p', values)

    @property
    def n(self) -> int:
        """Number of observables"""
        return len(self.p)

    def as_array(self) -> np.ndarray:
        """Copy of p as a float array"""
        return np.array(self.p, dtype=float)

    def __len__(self):
        return len(self.p)

    def __getitem__(self, index):
        return self.p[index]


@dataclass(frozen=True)
class SubsetDistribution:
    """Probability table over the outcomes of a subset of observables"""
    subset: VertexSubset
    table: Dict[OutcomeTuple, float] = field(hash=False)

    def prob(self, outcome: OutcomeTuple) -> float:
        """Probability of an outcome tuple (0 when absent)"""
        return self.table.get(tuple(outcome), 0.0)

    def total(self) -> float:
        """Total mass"""
        return math.fsum(self.table.values())


@dataclass(frozen=True)
class ConstraintCheck:
    """Outcome of a polytope/orthogonality check with its worst offender"""
    ok: bool
    worst: Optional[VertexSubset]
    value: float


@dataclass(frozen=True)
class StableSetDecomposition:
    """Convex weights over stable labelings: p = sum_k weights[k] * labelings[k].q"""
    weights: Tuple[float, ...]
    labelings: Tuple[StableLabeling, ...]
    residual: float = 0.0

    def __post_init__(self):
        if len(self.weights) != len(self.labelings):
            raise InvalidArgumentError("weights and labelings must have the same length")
        if not self.labelings:
            raise InvalidArgumentError("a decomposition needs at least one labeling")
        if any(w < 0.0 for w in self.weights):
            raise InvalidArgumentError("decomposition weights must be nonnegative")
        if abs(math.fsum(self.weights) - 1.0) > SUM_TOL:
            raise InvalidArgumentError("decomposition weights must sum to 1")
        widths = {len(labeling.q) for labeling in self.labelings}
        if len(widths) != 1:
            raise InvalidArgumentError("all labelings must have the same length")

    @property
    def n(self) -> int:
        """Number of observables"""
        return len(self.labelings[0].q)

    def mixture(self) -> np.ndarray:
        """sum_k alpha_k q^(k)"""
        q = np.array([labeling.q for labeling in self.labelings], dtype=float)
        return np.array(self.weights, dtype=float) @ q


@dataclass(frozen=True)
class JointDistribution:
    """
    Sparse function over outcome tuples of all n observables.

    Masses are kept sorted by outcome (+1 before -1) so iteration order is stable.
    Nonnegativity and normalization are not enforced here; verify_prop2_conditions
    reports on them.
    """
    n: int
    masses: Tuple[Tuple[OutcomeTuple, float], ...]

    def __post_init__(self):
        merged: Dict[OutcomeTuple, float] = {}
        for outcome, mass in self.masses:
            outcome = tuple(int(a) for a in outcome)
            if len(outcome) != self.n:
                raise InvalidArgumentError(
                    f"outcome {outcome} does not have {self.n} entries"
                )
            if any(a not in (-1, 1) for a in outcome):
                raise InvalidArgumentError(f"outcome {outcome} has entries outside {{-1, +1}}")
            merged[outcome] = merged.get(outcome, 0.0) + float(mass)
        ordered = tuple(sorted(merged.items(), reverse=True))
        object.__setattr__(self, 'masses', ordered)

    @classmethod
    def from_mapping(cls, n: int, mapping: Mapping[OutcomeTuple, float]) -> JointDistribution:
        """Build from an outcome -> mass mapping"""
        return cls(n=n, masses=tuple(mapping.items()))

    def as_dict(self) -> Dict[OutcomeTuple, float]:
        """Outcome -> mass"""
        return dict(self.masses)

    def prob(self, outcome: OutcomeTuple) -> float:
        """Mass on one outcome (0 when absent)"""
        return self.as_dict().get(tuple(outcome), 0.0)


@dataclass(frozen=True)
class Prop2Report:
    """The four joint-distribution conditions with their worst residuals"""
    nonnegative: bool
    normalized: bool
    exclusive: bool
    marginals_match: bool
    residuals: Dict[str, float] = field(hash=False)

    @property
    def verdict(self) -> bool:
        """True when every condition holds"""
        return self.nonnegative and self.normalized and self.exclusive and self.marginals_match


def _freeze(array: np.ndarray) -> np.ndarray:
    frozen = np.array(array, dtype=complex)
    frozen.setflags(write=False)
    return frozen


@dataclass(frozen=True, eq=False)
class StateVector:
    """Unit-norm pure state"""
    amplitudes: np.ndarray

    def __post_init__(self):
        amplitudes = _freeze(self.amplitudes)
        if amplitudes.ndim != 1 or amplitudes.size == 0:
            raise InvalidArgumentError("a state must be a nonempty 1-d vector")
        if abs(np.linalg.norm(amplitudes) - 1.0) > ORTHOGONALITY_TOL:
            raise InvalidArgumentError("state vector is not normalized")
        object.__setattr__(self, 'amplitudes', amplitudes)

    @property
    def dim(self) -> int:
        """Hilbert-space dimension"""
        return self.amplitudes.shape[0]


@dataclass(frozen=True, eq=False)
class ProjectiveModel:
    """
    Rank-1 projective model: row i is the unit vector v_i with
    Pi_i = |v_i><v_i| and A_i = 2 Pi_i - 1.
    """
    vectors: np.ndarray

    def __post_init__(self):
        vectors = _freeze(self.vectors)
        if vectors.ndim != 2 or vectors.shape[0] == 0 or vectors.shape[1] == 0:
            raise InvalidArgumentError("a model needs a nonempty (n, d) array of vectors")
        norms = np.linalg.norm(vectors, axis=1)
        bad = np.flatnonzero(np.abs(norms - 1.0) > ORTHOGONALITY_TOL)
        if bad.size:
            raise InvalidArgumentError(f"vector v_{bad[0] + 1} is not normalized")
        object.__setattr__(self, 'vectors', vectors)

    @property
    def n(self) -> int:
        """Number of observables"""
        return self.vectors.shape[0]

    @property
    def dim(self) -> int:
        """Hilbert-space dimension"""
        return self.vectors.shape[1]


@dataclass(frozen=True, eq=False)
class CounterexamplePair:
    """
    Two pentagon models sharing a state and the observables A'_1 = A_1, A'_3 = A_4.

    base holds v_1..v_5 and primed holds v'_1..v'_5, both in 6 dimensions.
    """
    state: StateVector
    base: ProjectiveModel
    primed: ProjectiveModel
    kappa: float
    identifications: Tuple[Tuple[int, int], ...] = ((1, 1), (3, 4))

    def glued_model(self) -> ProjectiveModel:
        """
        Model on the (n=5, m=3) glued graph: A_1..A_5 followed by the free
        primed observables A'_2, A'_4, A'_5.
        """
        free = [index - 1 for index in range(1, 6)
                if index not in {primed for primed, _ in self.identifications}]
        return ProjectiveModel(np.vstack([self.base.vectors, self.primed.vectors[free]]))


@dataclass(frozen=True)
class KcbsReport:
    """Exclusivity sum over a hole or antihole against its independence number"""
    subset: VertexSubset
    sum: float
    bound: int

    @property
    def violation(self) -> float:
        """sum - bound (positive means the inequality is violated)"""
        return self.sum - self.bound


@dataclass(frozen=True)
class EntropicReport:
    """Entropic chain -sum H(A_i|A_{i+1}) + H(A_1|A_k) over an ordered cycle, in bits"""
    cycle: VertexSubset
    chain_terms: Tuple[float, ...]
    closing: float
    value: float


@dataclass(frozen=True)
class MonogamyReport:
    """Both odd-cycle entropic values plus the two even-cycle certificates"""
    spec: GluedCycleSpec
    first: EntropicReport
    second: EntropicReport
    certificates: Tuple[EntropicReport, EntropicReport]
    identity_residual: float

    @property
    def total(self) -> float:
        """E1 + E2"""
        return self.first.value + self.second.value

    @property
    def verdict(self) -> bool:
        """True when E1 + E2 <= tolerance"""
        return self.total <= FEASIBILITY_TOL


# R0902 indicates too many instance variables but the summary mirrors the report schema
@dataclass(frozen=True)
class HarnessSummary:  # pylint: disable=R0902
    """Aggregates of a seeded random sweep over edge-feasible marginals"""
    spec: GluedCycleSpec
    samples: int
    seed: int
    drawn: int
    fixed_points: int
    max_sum: float
    max_single: float
    first_violations: int
    second_violations: int
    both_violations: int
    max_identity_residual: float
    max_even_value: float

    @property
    def verdict(self) -> bool:
        """True when no evaluated point had E1 + E2 above tolerance"""
        return self.max_sum <= FEASIBILITY_TOL


@dataclass
class Command:
    """Parsed command-line invocation"""
    name: str
    paths: Dict[str, str]
    flags: Dict[str, object]
    output: str = "json"


@dataclass
class Report:
    """Result of one command-line invocation"""
    subcommand: str
    inputs: Dict[str, object]
    result: Dict[str, object]
    version: str
