"""Workbench for the induced bipartite Turán problem."""

__version__ = "0.1.0"
