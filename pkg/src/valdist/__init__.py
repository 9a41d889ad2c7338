"""Computational value-distribution theory for rational curves and jet differentials."""

__version__ = "0.1.0"
