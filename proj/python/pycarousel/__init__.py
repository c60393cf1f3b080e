"""Python bindings for the carousel sojourn-time solver and simulator."""

from ._carousel import (
    ConvergenceError,
    apply_operator,
    closed_form_single_item_bi,
    contraction_bound,
    prep_and_travel,
    simulate,
    solve,
    solve_variable,
    strategies,
    validate,
)

__all__ = [
    "ConvergenceError",
    "apply_operator",
    "closed_form_single_item_bi",
    "contraction_bound",
    "prep_and_travel",
    "simulate",
    "solve",
    "solve_variable",
    "strategies",
    "validate",
]
