"""
Quantum realizations of commutation graphs.

Observables are rank-1 projectors Pi_i = |v_i><v_i|; compatible observables
need orthogonal vectors. The Lovasz umbrella reaches theta(C_n) on an odd
cycle, and the rotated pentagon pair violates two KCBS inequalities that
share two observables at once.
"""

import logging
import math

import numpy as np

from contextlab.exceptions import InvalidArgumentError
from contextlab.models import (
    ORTHOGONALITY_TOL, CommutationGraph, ConstraintCheck, CounterexamplePair,
    GluedCycleSpec, MarginalVector, ProjectiveModel, StateVector
)

# Independence number of the pentagon, the classical KCBS bound.
PENTAGON_ALPHA = 2
COUNTEREXAMPLE_DIM = 6
# The counterexample lives on the glued pentagons with A'_3 = A_4.
COUNTEREXAMPLE_SPEC = GluedCycleSpec(n=5, m=3)
# v'_{7-i} = cos(kappa) v_i + sin(kappa) e_axis for i in {2, 3, 5}; one ancilla axis each.
_ROTATED = ((2, 3), (3, 4), (5, 5))

logger = logging.getLogger(__name__)


def model_marginals(model: ProjectiveModel, phi: StateVector) -> MarginalVector:
    """
    p_i = |<v_i|phi>|^2, clipped to [0, 1] against rounding.

    Raises:
        InvalidArgumentError: If the model and state dimensions differ
    """
    if model.dim != phi.dim:
        raise InvalidArgumentError(
            f"model dimension {model.dim} does not match state dimension {phi.dim}"
        )
    overlaps = model.vectors.conj() @ phi.amplitudes
    probabilities = np.clip(np.abs(overlaps) ** 2, 0.0, 1.0)
    return MarginalVector(tuple(float(x) for x in probabilities))


def validate_model(model: ProjectiveModel, g: CommutationGraph,
                   tol: float = ORTHOGONALITY_TOL) -> ConstraintCheck:
    """
    Check that compatible observables have orthogonal vectors.

    Returns:
        ConstraintCheck with the edge of largest |<v_i|v_j>| and that value

    Raises:
        InvalidArgumentError: If the model and graph sizes differ
    """
    if model.n != g.n:
        raise InvalidArgumentError(
            f"model has {model.n} vectors but the graph has {g.n} vertices"
        )
    worst, residual = None, 0.0
    for i, j in g.sorted_edges():
        overlap = float(abs(np.vdot(model.vectors[i], model.vectors[j])))
        if worst is None or overlap > residual:
            worst, residual = (i, j), overlap
    return ConstraintCheck(ok=residual <= tol, worst=worst, value=residual)


def umbrella_model(n: int):
    """
    Lovasz umbrella for the odd cycle C_n in three dimensions.

    v_j = (sin t cos(2 pi k j / n), sin t sin(2 pi k j / n), cos t) with
    k = (n - 1) / 2 and cos^2 t = cos(pi/n) / (1 + cos(pi/n)); the handle
    state (0, 0, 1) gives sum_j p_j = theta(C_n).

    Returns:
        (ProjectiveModel, StateVector)

    Raises:
        InvalidArgumentError: If n is not an odd integer >= 5
    """
    if isinstance(n, bool) or not isinstance(n, int) or n < 5 or n % 2 == 0:
        raise InvalidArgumentError(f"umbrella needs an odd n >= 5, got {n!r}")
    c = math.cos(math.pi / n)
    cos_t = math.sqrt(c / (1.0 + c))
    sin_t = math.sqrt(1.0 / (1.0 + c))
    angles = 2.0 * math.pi * ((n - 1) // 2) * np.arange(n) / n
    vectors = np.column_stack([
        sin_t * np.cos(angles),
        sin_t * np.sin(angles),
        np.full(n, cos_t),
    ])
    return ProjectiveModel(vectors), StateVector(np.array([0.0, 0.0, 1.0]))


def kappa_upper_bound(base_sum: float, alpha: int = PENTAGON_ALPHA) -> float:
    """
    Largest rotation angle for which the primed pentagon still violates
    its KCBS inequality: arccos(sqrt(alpha / base_sum)).

    Raises:
        InvalidArgumentError: If base_sum <= alpha (no violating angle exists)
    """
    if not base_sum > alpha:
        raise InvalidArgumentError(
            f"base sum {base_sum!r} does not exceed the classical bound {alpha}"
        )
    return math.acos(math.sqrt(alpha / base_sum))


def build_counterexample(kappa: float) -> CounterexamplePair:
    """
    Two pentagon models sharing A'_1 = A_1 and A'_3 = A_4 that both violate
    the KCBS inequality in the same state.

    The base model is umbrella(5) embedded in the first three coordinates.
    v'_5, v'_4 and v'_2 rotate v_2, v_3 and v_5 by kappa toward three
    distinct ancilla axes, each orthogonal to the state and to every v_i,
    so the primed observables keep the pentagon's orthogonality.

    Raises:
        InvalidArgumentError: If kappa is outside (0, kappa_upper_bound)
    """
    umbrella, handle = umbrella_model(5)
    bound = kappa_upper_bound(math.fsum(model_marginals(umbrella, handle).p))
    if not 0.0 < kappa < bound:
        raise InvalidArgumentError(f"kappa must lie in (0, {bound:.9g}), got {kappa!r}")

    base = np.zeros((5, COUNTEREXAMPLE_DIM))
    base[:, :3] = umbrella.vectors.real
    state = np.zeros(COUNTEREXAMPLE_DIM)
    state[:3] = handle.amplitudes.real

    primed = np.zeros((5, COUNTEREXAMPLE_DIM))
    primed[0] = base[0]
    primed[2] = base[3]
    for source, axis in _ROTATED:
        ancilla = np.zeros(COUNTEREXAMPLE_DIM)
        ancilla[axis] = 1.0
        primed[7 - source - 1] = math.cos(kappa) * base[source - 1] + math.sin(kappa) * ancilla

    logger.debug("built rotated pentagon pair with kappa=%s (bound %s)", kappa, bound)
    return CounterexamplePair(
        state=StateVector(state),
        base=ProjectiveModel(base),
        primed=ProjectiveModel(primed),
        kappa=float(kappa),
    )


def counterexample_glued_marginals(pair: CounterexamplePair) -> MarginalVector:
    """Marginals of the pair on the glued pentagons (A_1..A_5, A'_2, A'_4, A'_5)."""
    return model_marginals(pair.glued_model(), pair.state)
