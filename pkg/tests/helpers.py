"""
Test helper functions and expected values for assertions.

This module provides:
1. Closed-form constants (theta values, umbrella marginals, counterexample sums)
2. Sample marginal vectors used across test modules
3. Assertion helpers for distributions, floats and CLI reports

Usage in tests:
    from helpers import assert_close, assert_distribution_is, SQRT5
    assert_close(theta_closed_form("hole", 5), SQRT5)
    assert_distribution_is(table, {(1, -1): 0.5, (-1, 1): 0.5, (-1, -1): 0.0, (1, 1): 0.0})
"""

import json
import math

import pytest

SQRT5 = math.sqrt(5.0)
# 1 + 1/cos(pi/7)
THETA_ANTIHOLE_7 = 2.109916264
UMBRELLA_5_MARGINAL = 1.0 / SQRT5
# arccos(sqrt(2/sqrt(5)))
KAPPA_UPPER_BOUND_5 = 0.330926816
# (2 + 3 cos^2 kappa) / sqrt(5) at kappa = 0.2
PRIMED_SUM_AT_0_2 = 2.183114082

# H(A|B) for exclusive A, B with P(A=1) = P(B=1) = 0.4, in bits
EDGE_ENTROPY_0_4 = 0.5509775004
ALTERNATING_PENTAGON = (1 / 3, 2 / 3, 1 / 3, 2 / 3, 1 / 3)

# Induced pentagons of the example graphs, 0-based
YU_OH_PENTAGON = (9, 3, 0, 1, 5)
CEG_PENTAGON = (0, 4, 13, 15, 3)

GLUED_SPECS = [(5, 3), (5, 4), (7, 3), (7, 4), (9, 5)]


def assert_close(actual, expected, tol=1e-9):
    """Assert |actual - expected| <= tol."""
    assert actual == pytest.approx(expected, abs=tol)


def assert_distribution_is(distribution, expected, tol=1e-12):
    """
    Assert that a SubsetDistribution table matches expected outcome -> mass.

    Outcomes missing from expected must carry zero mass.
    """
    for outcome, mass in distribution.table.items():
        assert_close(mass, expected.get(outcome, 0.0), tol)
    for outcome, mass in expected.items():
        assert_close(distribution.prob(outcome), mass, tol)


def assert_report_exit(capsys, code, expected_code, subcommand):
    """
    Assert the CLI exit code and return the parsed JSON report from stdout.
    """
    captured = capsys.readouterr()
    assert code == expected_code, captured.err
    report = json.loads(captured.out)
    assert report["subcommand"] == subcommand
    assert set(report) == {"subcommand", "version", "inputs", "result"}
    return report


def assert_cli_error(capsys, code, message):
    """Assert exit code 1, an empty stdout and message on stderr."""
    captured = capsys.readouterr()
    assert code == 1
    assert captured.out == ""
    assert message in captured.err
