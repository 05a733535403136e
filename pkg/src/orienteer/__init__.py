"""Orienteering solvers with time windows and dynamic edges."""

__version__ = "0.1.0"
