"""Shared type definitions for the coprenyi package.

Holds the JSON payload alias used by the file writers and the exception raised
when a numerical routine cannot produce a trustworthy value.
"""

from __future__ import annotations

type JSON_TYPE = bool | dict[str, JSON_TYPE] | float | int | list[JSON_TYPE] | str | None


class NumericalFailureError(ArithmeticError):
    """An integral, optimisation or simulation produced no usable number.

    Raised for non-finite integrand values, nonpositive Rényi integrals, flat or
    undefined likelihoods and simulation runs with too many excluded replications.
    The CLI maps it to exit code 2.
    """
