"""Exact fold, cut-percolation and density toolkit for small bigraphs."""

__version__ = "0.1.0"
