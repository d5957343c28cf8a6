"""Exact computations on squares and k-th powers in arithmetic progression."""

__version__ = "0.1.0"
