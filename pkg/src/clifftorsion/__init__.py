"""Exact Clifford multiplication on torsion points of the Dirac spinor torus."""

__version__ = "0.1.0"
