"""Hilbert series, Rees algebras, Betti tables of powers and diagonal criteria."""

from ._native import (
    Ideal,
    Ring,
    fit_hilbert_polynomials,
    fit_hilbert_series,
    gorenstein_diagonals,
    predict_resolutions,
)

__all__ = [
    "Ideal",
    "Ring",
    "fit_hilbert_polynomials",
    "fit_hilbert_series",
    "gorenstein_diagonals",
    "predict_resolutions",
]
