"""Exact computations with finite-dimensional commutative DG algebras:
resolutions, Ext and Bass numbers, Gorenstein decisions and audits."""

__version__ = "0.1.0"
