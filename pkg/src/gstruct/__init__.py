"""Intrinsic torsion and curvature invariants of Riemannian G-structures."""

__version__ = "0.1.0"
