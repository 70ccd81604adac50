"""Exact cochain calculus for vect(1) acting on weighted densities and symbol spaces."""

__version__ = "0.1.0"
