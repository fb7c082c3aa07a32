"""Decay rate and level shifts of a two-level atom at the focus of a spherical mirror."""
__version__ = "0.1.0"
