"""Orbits and stabilizers of tuples of subgroup conjugacy classes under Out(F_n)."""

__version__ = "0.1.0"
