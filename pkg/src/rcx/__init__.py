"""Ramanujan complexes of type A~_{d-1}: building balls, Hecke spectra and a
Ramanujan verifier for finite colored complexes."""

__version__ = "0.1.0"
