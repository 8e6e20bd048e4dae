"""Numerical toolkit for holomorphic and Minkowski-space function spaces on
2x2 complex matrices, their projectors, and the deformed (AdS-type) variants."""
__version__ = "0.1.0"
