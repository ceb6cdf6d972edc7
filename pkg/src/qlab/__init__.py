"""Finite quantales, modules over quantales, primitivity and density."""

__version__ = "0.1.0"
