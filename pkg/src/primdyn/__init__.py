"""Exact verification of primitive-element, girth and fixed-point computations."""

__version__ = "0.1.0"
