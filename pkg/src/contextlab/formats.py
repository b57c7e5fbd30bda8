"""
File formats and report serialization.

Every file uses 1-based vertex labels; the returned objects are 0-based.
"""

import json
import logging
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from contextlab.exceptions import ParseError
from contextlab.models import (
    CommutationGraph, ConstraintCheck, EntropicReport, HarnessSummary, JointDistribution,
    KcbsReport, MarginalVector, MonogamyReport, ProjectiveModel, Report,
    StableSetDecomposition, StateVector
)
from contextlab.validation import (
    validate_complex, validate_json_object, validate_label_pair, validate_number,
    validate_outcome, validate_probability_list, validate_required_int,
    validate_required_list
)

SIGNIFICANT_DIGITS = 9

logger = logging.getLogger(__name__)


def _read_text(path):
    try:
        with open(path, encoding='utf-8') as handle:
            return handle.read()
    except (OSError, UnicodeDecodeError) as e:
        raise ParseError(f"cannot read {path}: {e}") from e


def _load_json(path, text=None):
    text = _read_text(path) if text is None else text
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: invalid JSON at line {e.lineno}: {e.msg}") from e


def _check(value, error, path):
    if error is not None:
        raise ParseError(f"{path}: {error}")
    return value


def _graph_from_json(data, path):
    data = _check(*validate_json_object(data, "graph"), path)
    n = _check(*validate_required_int(data, "n", minimum=1), path)
    raw_edges = _check(*validate_required_list(data, "edges"), path)
    edges = []
    for index, raw in enumerate(raw_edges):
        i, j = _check(*validate_label_pair(raw, f"edges[{index}]"), path)
        if i > n or j > n:
            raise ParseError(f"{path}: edges[{index}] has a label above n={n}")
        edges.append((i - 1, j - 1))
    return CommutationGraph.from_edges(n, edges)


def _graph_from_edge_list(text, path):
    declared, edges = None, []
    for number, line in enumerate(text.splitlines(), start=1):
        tokens = line.split('#', 1)[0].split()
        if not tokens:
            continue
        try:
            values = [int(token) for token in tokens]
        except ValueError as e:
            raise ParseError(f"{path}: line {number}: expected integer labels") from e
        if len(values) == 1 and declared is None and not edges:
            declared = values[0]
            if declared < 1:
                raise ParseError(f"{path}: line {number}: vertex count must be positive")
            continue
        if len(values) != 2 or min(values) < 1:
            raise ParseError(f"{path}: line {number}: expected a pair of positive labels")
        if declared is not None and max(values) > declared:
            raise ParseError(f"{path}: line {number}: label above declared n={declared}")
        edges.append((values[0] - 1, values[1] - 1))
    n = declared if declared is not None else max((max(edge) + 1 for edge in edges), default=0)
    if n == 0:
        raise ParseError(f"{path}: no vertices")
    return CommutationGraph.from_edges(n, edges)


def parse_graph_file(path) -> CommutationGraph:
    """
    Read a commutation graph from JSON (`{"n": 5, "edges": [[1, 2], ...]}`)
    or from an edge list (one `i j` pair per line, `#` comments, an optional
    leading line with the vertex count).

    Raises:
        ParseError: If the file cannot be read or is malformed
        GraphValidationError: If the file holds a self-loop
    """
    text = _read_text(path)
    if text.lstrip().startswith('{'):
        graph = _graph_from_json(_load_json(path, text), path)
    else:
        graph = _graph_from_edge_list(text, path)
    logger.debug("read graph from %s: n=%d, %d edges", path, graph.n, len(graph.edges))
    return graph


def parse_marginals_file(path) -> MarginalVector:
    """
    Read `{"p": [...]}`, listed in graph label order.

    Raises:
        ParseError: If the file is malformed or an entry leaves [0, 1]
    """
    data = _check(*validate_json_object(_load_json(path), "marginals"), path)
    return MarginalVector(tuple(_check(*validate_probability_list(data, "p"), path)))


def parse_joint_file(path) -> JointDistribution:
    """
    Read a list of `{"outcome": [-1, 1, ...], "prob": x}` entries.

    Masses are not checked for sign or normalization; verify reports on them.

    Raises:
        ParseError: If the file is malformed or outcome lengths disagree
    """
    data = _load_json(path)
    if not isinstance(data, list) or not data:
        raise ParseError(f"{path}: joint distribution must be a nonempty list")
    first = data[0].get("outcome") if isinstance(data[0], dict) else None
    if not isinstance(first, list) or not first:
        raise ParseError(f"{path}: [0].outcome must be a nonempty list")
    masses = []
    for index, entry in enumerate(data):
        entry = _check(*validate_json_object(entry, f"[{index}]"), path)
        outcome = _check(*validate_outcome(entry.get("outcome"), len(first),
                                           f"[{index}].outcome"), path)
        prob = _check(*validate_number(entry.get("prob"), f"[{index}].prob"), path)
        masses.append((outcome, prob))
    return JointDistribution(n=len(first), masses=tuple(masses))


def _unit_vector(raw, dim, field_name, path):
    if not isinstance(raw, list) or len(raw) != dim:
        raise ParseError(f"{path}: {field_name} must have {dim} components")
    vector = np.array([
        _check(*validate_complex(value, f"{field_name}[{index}]"), path)
        for index, value in enumerate(raw)
    ])
    norm = np.linalg.norm(vector)
    if norm == 0.0:
        raise ParseError(f"{path}: {field_name} is the zero vector")
    return vector / norm


def parse_model_file(path) -> Tuple[ProjectiveModel, StateVector]:
    """
    Read `{"dim": d, "vectors": [...], "state": [...]}`.

    Components are numbers or [re, im] pairs; vectors follow graph label
    order. Every vector is rescaled to unit norm.

    Raises:
        ParseError: If the file is malformed or holds a zero vector
    """
    data = _check(*validate_json_object(_load_json(path), "model"), path)
    dim = _check(*validate_required_int(data, "dim", minimum=1), path)
    raw_vectors = _check(*validate_required_list(data, "vectors"), path)
    if not raw_vectors:
        raise ParseError(f"{path}: vectors must not be empty")
    vectors = [_unit_vector(raw, dim, f"vectors[{index}]", path)
               for index, raw in enumerate(raw_vectors)]
    state = _unit_vector(data.get("state"), dim, "state", path)
    return ProjectiveModel(np.vstack(vectors)), StateVector(state)


def format_float(value: float) -> float:
    """Round to SIGNIFICANT_DIGITS significant digits."""
    return float(f"{value:.{SIGNIFICANT_DIGITS}g}")


def to_jsonable(value):
    """Recursively convert report payloads to JSON types with rounded floats."""
    if isinstance(value, dict):
        return {str(key): to_jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(item) for item in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return format_float(float(value))
    if isinstance(value, complex):
        return [format_float(value.real), format_float(value.imag)]
    if isinstance(value, Enum):
        return value.value
    if value is None or isinstance(value, str):
        return value
    raise TypeError(f"cannot serialize {type(value).__name__}")


def report_to_dict(report: Report) -> dict:
    """Report as a JSON-ready dict in a fixed key order."""
    return {
        "subcommand": report.subcommand,
        "version": report.version,
        "inputs": to_jsonable(report.inputs),
        "result": to_jsonable(report.result),
    }


def dump_report(report: Report) -> str:
    """Byte-stable JSON text of a report."""
    return json.dumps(report_to_dict(report), indent=2, allow_nan=False) + "\n"


def _text_lines(prefix, value):
    if isinstance(value, dict):
        for key, item in value.items():
            yield from _text_lines(f"{prefix}.{key}" if prefix else str(key), item)
    elif isinstance(value, list) and any(isinstance(item, (dict, list)) for item in value):
        for index, item in enumerate(value):
            yield from _text_lines(f"{prefix}[{index}]", item)
    else:
        yield f"{prefix}: {json.dumps(value)}"


def render_text(report: Report) -> str:
    """Human-readable `key: value` rendering of a report."""
    data = report_to_dict(report)
    lines = [f"{data['subcommand']} (contextlab {data['version']})"]
    lines.extend(_text_lines("", data["result"]))
    return "\n".join(lines) + "\n"


# Payload builders, all with 1-based vertex labels.

def labels(vertices) -> Optional[list]:
    """0-based vertices to 1-based labels"""
    if vertices is None:
        return None
    return [v + 1 for v in vertices]


def graph_payload(g: CommutationGraph) -> dict:
    """`{"n": ..., "edges": [...]}`, readable by parse_graph_file"""
    return {"n": g.n, "edges": [labels(edge) for edge in g.sorted_edges()]}


def marginals_payload(p: MarginalVector) -> dict:
    """`{"p": [...]}`"""
    return {"p": list(p.p)}


def check_payload(check: ConstraintCheck) -> dict:
    """Verdict with the worst edge or clique"""
    return {"ok": check.ok, "worst": labels(check.worst), "value": check.value}


def decomposition_payload(decomp: StableSetDecomposition) -> dict:
    """Weights with the stable sets they sit on"""
    return {
        "residual": decomp.residual,
        "terms": [
            {"weight": weight, "stable_set": labels(labeling.members)}
            for weight, labeling in zip(decomp.weights, decomp.labelings)
        ],
    }


def joint_payload(F: JointDistribution) -> list:  # pylint: disable=C0103
    """List of `{"outcome": [...], "prob": x}`, readable by parse_joint_file"""
    return [{"outcome": list(outcome), "prob": mass} for outcome, mass in F.masses]


def model_payload(model: ProjectiveModel, state: StateVector) -> dict:
    """`{"dim": d, "vectors": [...], "state": [...]}` with [re, im] components"""
    def components(vector):
        return [[float(z.real), float(z.imag)] for z in vector]
    return {
        "dim": model.dim,
        "vectors": [components(row) for row in model.vectors],
        "state": components(state.amplitudes),
    }


def kcbs_payload(report: KcbsReport) -> dict:
    """Sum, bound and violation over a hole or antihole"""
    return {
        "subset": labels(report.subset),
        "sum": report.sum,
        "bound": report.bound,
        "violation": report.violation,
        "violated": report.violation > 0.0,
    }


def entropic_payload(report: EntropicReport) -> dict:
    """Entropic chain value with its terms"""
    return {
        "cycle": labels(report.cycle),
        "chain_terms": list(report.chain_terms),
        "closing": report.closing,
        "value": report.value,
    }


def monogamy_payload(report: MonogamyReport) -> dict:
    """`{"E1", "E2", "sum", "certificates", "verdict"}` plus the identity residual"""
    return {
        "n": report.spec.n,
        "m": report.spec.m,
        "E1": report.first.value,
        "E2": report.second.value,
        "sum": report.total,
        "certificates": [entropic_payload(cert) for cert in report.certificates],
        "identity_residual": report.identity_residual,
        "verdict": report.verdict,
    }


def harness_payload(summary: HarnessSummary) -> dict:
    """Sweep aggregates"""
    return {
        "n": summary.spec.n,
        "m": summary.spec.m,
        "samples": summary.samples,
        "seed": summary.seed,
        "drawn": summary.drawn,
        "fixed_points": summary.fixed_points,
        "max_sum": summary.max_sum,
        "max_single": summary.max_single,
        "first_violations": summary.first_violations,
        "second_violations": summary.second_violations,
        "both_violations": summary.both_violations,
        "max_identity_residual": summary.max_identity_residual,
        "max_even_value": summary.max_even_value,
        "verdict": summary.verdict,
    }
