"""Symmetric alpha-stable dependence measures, linear fractional stable motion
wavelet synthesis and wavelet-based self-similarity estimation."""

__version__ = "0.1.0"
