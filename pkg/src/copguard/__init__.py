"""Guarding isometric subgraphs with one cop, and cop numbers of multi-layer
generalized Petersen graphs."""

__version__ = "0.1.0"
