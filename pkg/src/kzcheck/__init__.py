"""Numerical and exact checks of the generalized Kohnen-Zagier formula."""

__version__ = "0.1.0"
