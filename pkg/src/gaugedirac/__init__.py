"""Exact verification of twisted Dirac structures on spaces of gauge connections."""

__version__ = "0.1.0"
