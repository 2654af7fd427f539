"""Exterior divisibility over QQ[x_1..x_n]: criteria, representations, residua."""

__version__ = "0.1.0"
