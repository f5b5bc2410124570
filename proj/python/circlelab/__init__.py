"""Circle-method numerics for shifted sums of GL(3) Hecke eigenvalues."""

from ._core import (
    CirclelabError,
    CoefficientTable,
    WeightFunction,
    brute_sum,
    build_table,
    classify,
    dirichlet_approx,
    evaluate_theorem,
    gauss_sum,
    hua_count,
    kloosterman,
    phi_transform,
    psi_r,
    weil_envelope,
    weil_scan,
    weyl_sum,
)

__all__ = [
    "CirclelabError",
    "CoefficientTable",
    "WeightFunction",
    "brute_sum",
    "build_table",
    "classify",
    "dirichlet_approx",
    "evaluate_theorem",
    "gauss_sum",
    "hua_count",
    "kloosterman",
    "phi_transform",
    "psi_r",
    "weil_envelope",
    "weil_scan",
    "weyl_sum",
]
