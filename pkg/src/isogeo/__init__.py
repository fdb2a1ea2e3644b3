"""Osculating spaces, secants and projections of isotropic Grassmannians."""

__version__ = "0.1.0"
