"""
Shared pytest fixtures for all tests.

Fixtures:
- pentagon, yu_oh_graph, ceg_graph: the example graphs shipped in
  src/contextlab/data (documented in docs/example-graphs.md)
- glued_5_3: the two glued pentagons with A'_1 = A_1 and A'_3 = A_4
- umbrella_5: the Lovasz umbrella on C_5 with its handle state
- counterexample: the rotated pentagon pair at kappa = 0.2
- write_json, write_text: helpers that write input files into tmp_path
"""

import importlib.resources
import json

import pytest

from contextlab.formats import parse_graph_file
from contextlab.graph_core import build_glued_cycles
from contextlab.models import GluedCycleSpec
from contextlab.quantum import build_counterexample, umbrella_model


def data_path(name):
    """Path of a file in the contextlab.data package."""
    return importlib.resources.files('contextlab') / 'data' / name


# ============================================================================
# Example Graph Fixtures
# ============================================================================

@pytest.fixture(name='pentagon_path')
def create_pentagon_path():
    """Path of the pentagon JSON file."""
    return str(data_path('pentagon.json'))


@pytest.fixture(name='pentagon')
def create_pentagon(pentagon_path):
    """The pentagon C_5 read from package data."""
    return parse_graph_file(pentagon_path)


@pytest.fixture(name='yu_oh_graph')
def create_yu_oh_graph():
    """Orthogonality graph of the 13 qutrit rays."""
    return parse_graph_file(str(data_path('yu_oh_13.txt')))


@pytest.fixture(name='ceg_graph')
def create_ceg_graph():
    """Orthogonality graph of the 18 four-dimensional vectors."""
    return parse_graph_file(str(data_path('ceg_18.txt')))


@pytest.fixture(name='glued_5_3')
def create_glued_5_3():
    """Two pentagons glued along A_1 = A'_1 and A_4 = A'_3."""
    return build_glued_cycles(GluedCycleSpec(n=5, m=3))


# ============================================================================
# Quantum Model Fixtures
# ============================================================================

@pytest.fixture(name='umbrella_5')
def create_umbrella_5():
    """(ProjectiveModel, StateVector) of the pentagon umbrella."""
    return umbrella_model(5)


@pytest.fixture(name='counterexample')
def create_counterexample():
    """Rotated pentagon pair at kappa = 0.2."""
    return build_counterexample(0.2)


# ============================================================================
# Input File Fixtures
# ============================================================================

@pytest.fixture(name='write_json')
def create_write_json(tmp_path):
    """Return a function that dumps a payload to tmp_path/name and returns the path."""
    def write(name, payload):
        path = tmp_path / name
        path.write_text(json.dumps(payload), encoding='utf-8')
        return str(path)
    return write


@pytest.fixture(name='write_text')
def create_write_text(tmp_path):
    """Return a function that writes text to tmp_path/name and returns the path."""
    def write(name, text):
        path = tmp_path / name
        path.write_text(text, encoding='utf-8')
        return str(path)
    return write
