"""Weighted local Hardy space numerics (C++ core)."""

from ._hardyloc import (
    HardylocError,
    UsageError,
    ap_loc_constant,
    atomic_decompose,
    bmo_loc_norm,
    coords,
    corpus_function,
    cz_decompose,
    grand_maximal,
    hardy_quasi_norm,
    local_hl_maximal,
    psdo_apply,
    strongly_singular_apply,
    weight,
)

__all__ = [
    "HardylocError",
    "UsageError",
    "ap_loc_constant",
    "atomic_decompose",
    "bmo_loc_norm",
    "coords",
    "corpus_function",
    "cz_decompose",
    "grand_maximal",
    "hardy_quasi_norm",
    "local_hl_maximal",
    "psdo_apply",
    "strongly_singular_apply",
    "weight",
]
