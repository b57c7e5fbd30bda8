"""Commutation graphs, noncontextual joint distributions and contextuality inequalities."""

__version__ = "0.1.0"
