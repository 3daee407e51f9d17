"""Named initial number densities C_in(m)."""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from breakage_fvm.errors import InvalidArgumentError


def exp_decay(m):
    return np.exp(-np.asarray(m, dtype=float))


def zero(m):
    return np.zeros_like(np.asarray(m, dtype=float))


def tabulated(volumes: Sequence[float], values: Sequence[float]) -> Callable:
    """Piecewise-linear interpolant through (volume, value) pairs, constant outside."""
    volumes = np.asarray(volumes, dtype=float)
    values = np.asarray(values, dtype=float)
    if volumes.ndim != 1 or volumes.size < 2 or volumes.shape != values.shape:
        raise InvalidArgumentError("tabulated data needs matching volume/value lists of length >= 2")
    if not (np.all(np.isfinite(volumes)) and np.all(np.isfinite(values))):
        raise InvalidArgumentError("tabulated data must be finite")
    if np.any(np.diff(volumes) <= 0):
        raise InvalidArgumentError("tabulated volumes must be strictly increasing")
    if np.any(values < 0):
        raise InvalidArgumentError("tabulated values must be nonnegative")

    def density(m):
        return np.interp(np.asarray(m, dtype=float), volumes, values)

    return density


INITIAL_CONDITIONS: dict[str, Callable] = {
    "exp_decay": exp_decay,
    "zero": zero,
}


def get_initial_condition(kind: str, **params) -> Callable:
    if kind == "tabulated":
        return tabulated(params.get("volumes", ()), params.get("values", ()))
    try:
        return INITIAL_CONDITIONS[kind]
    except KeyError:
        known = ", ".join(sorted([*INITIAL_CONDITIONS, "tabulated"]))
        raise InvalidArgumentError(f"unknown initial condition {kind!r} (known: {known})") from None
