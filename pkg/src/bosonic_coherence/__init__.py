"""Coherence and entropy production of Gaussian states under phase-insensitive channels."""

__version__ = "0.1.0"
