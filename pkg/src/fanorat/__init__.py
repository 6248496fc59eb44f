"""Exact computations around rationality of Fano threefolds in products of projective spaces."""

__version__ = "0.1.0"
