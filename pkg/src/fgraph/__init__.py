"""Grothendieck classes, point counts and F1 necessary conditions for Feynman graph varieties."""

__version__ = "0.1.0"
