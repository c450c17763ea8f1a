"""Exact Lie-algebra arithmetic, graph enumeration and Monte-Carlo graph weights for symmetric pairs."""

__version__ = "0.1.0"
