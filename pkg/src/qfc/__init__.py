"""Steady-state quantum frequency combs in Kerr microring resonators."""

__version__ = "0.1.0"
