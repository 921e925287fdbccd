"""Khovanov's functor-valued invariant of even tangles, computed combinatorially."""

__version__ = "0.1.0"
