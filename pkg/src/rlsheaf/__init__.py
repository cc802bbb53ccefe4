"""Finite residuated lattices, their prime spectra, and etale/bundle structures over finite spaces."""

__all__ = [
    "fintop",
    "rlcore",
    "spectra",
    "bundle",
    "sheafify",
    "basechange",
    "adjunction",
    "fixtures",
    "workspace",
    "cli",
]

__version__ = "0.1.0"
