"""Finite Toeplitz/Hankel sections of circle symbols and singular-value
clustering of their semicommutators."""

__version__ = "0.1.0"
