"""Computational toolkit for excision questions about pullback squares of rings."""

__version__ = "0.1.0"
