"""Spectra with prescribed power sums, the rational quantities built on
them, and curvature of isoparametric hypersurfaces."""

__version__ = "0.1.0"
