"""Exact computations in representation rings of reductive groups."""

__version__ = "0.1.0"
