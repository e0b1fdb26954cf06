"""Sieve functions f = g * 1, their short-interval integrals and correlation checks."""

from ._sievelab import (
    GFunction,
    LEMMA1_RATIO_CAP,
    LEMMA2_RATIO_CAP,
    SieveTable,
    THEOREM_RATIO_CAP,
    check_lemma1,
    check_lemma2,
    check_theorem_I_rep,
    correlation,
    correlation_main_term,
    cos_sum,
    dist_to_int,
    dyadic_sum,
    fejer_S,
    fourier_W,
    fourier_W_scaled,
    g_from_values,
    kernel_value,
    make_g,
    mean_value,
    remainder,
    run_grid,
    selberg_integral,
    sieve,
    sin_sum,
    sum_W_over_multiples,
    symmetry_integral,
)

__all__ = [
    "GFunction",
    "LEMMA1_RATIO_CAP",
    "LEMMA2_RATIO_CAP",
    "SieveTable",
    "THEOREM_RATIO_CAP",
    "check_lemma1",
    "check_lemma2",
    "check_theorem_I_rep",
    "correlation",
    "correlation_main_term",
    "cos_sum",
    "dist_to_int",
    "dyadic_sum",
    "fejer_S",
    "fourier_W",
    "fourier_W_scaled",
    "g_from_values",
    "kernel_value",
    "make_g",
    "mean_value",
    "remainder",
    "run_grid",
    "selberg_integral",
    "sieve",
    "sin_sum",
    "sum_W_over_multiples",
    "symmetry_integral",
]
