"""Exact-arithmetic workbench for plabic graphs, vector-relation configurations and promotions."""

__version__ = "0.1.0"
