"""Sobolev gradient ascent solvers for exact Wasserstein barycenters on grids."""

from ._sga import (
    SgaError,
    c_transform,
    h1_norm,
    normalize_density,
    quantile_w2_1d,
    sga_barycenter,
    sga_ot,
    solve_neumann,
    w2_distance,
)

__all__ = [
    "SgaError",
    "c_transform",
    "h1_norm",
    "normalize_density",
    "quantile_w2_1d",
    "sga_barycenter",
    "sga_ot",
    "solve_neumann",
    "w2_distance",
]
