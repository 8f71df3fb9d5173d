"""Exact toolkit for super-modular fermionic quotient data."""

__version__ = "0.1.0"
