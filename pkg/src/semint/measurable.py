"""Functions from a finite ground set into [0,1], their level sets, and survival values.

Level sets use exact ``>=`` comparison on stored doubles, never an epsilon:
the exact integration scan relies on thresholds being evaluated at the stored
values themselves.  Out-of-range values are rejected at construction rather
than clamped.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from semint.capacity import Capacity, FiniteSpace
from semint.errors import DomainError, SpaceMismatchError


@dataclass(frozen=True, slots=True, eq=False)
class MeasurableFn:
    """A value vector over the ground set: ``values[i] = f(i)``, all in [0,1]."""

    space: FiniteSpace
    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.float64)
        if values.shape != (self.space.size,):
            raise DomainError(
                f"function over a {self.space.size}-point space needs {self.space.size} "
                f"values, got shape {values.shape}"
            )
        if np.any(~((values >= 0.0) & (values <= 1.0))):
            raise DomainError("function values must lie in [0,1]")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def constant(cls, space: FiniteSpace, value: float) -> "MeasurableFn":
        return cls(space, np.full(space.size, float(value)))

    @classmethod
    def indicator(cls, space: FiniteSpace, mask: int) -> "MeasurableFn":
        mask = space.check_mask(mask)
        values = np.array([1.0 if mask >> i & 1 else 0.0 for i in range(space.size)])
        return cls(space, values)

    def to_json_dict(self) -> dict:
        return {"values": [float(v) for v in self.values]}


def _require_same_space(a, b) -> None:
    if a.space != b.space:
        raise SpaceMismatchError(f"spaces differ: {a.space.size} vs {b.space.size} points")


def level_set(f: MeasurableFn, t: float) -> int:
    """Mask of ``{i : f(i) >= t}``, exact comparison."""
    if not 0.0 <= t <= 1.0:
        raise DomainError(f"threshold {t!r} outside [0,1]")
    mask = 0
    for i, v in enumerate(f.values.tolist()):
        if v >= t:
            mask |= 1 << i
    return mask


def strict_support(f: MeasurableFn) -> int:
    """Mask of ``{i : f(i) > 0}``."""
    mask = 0
    for i, v in enumerate(f.values.tolist()):
        if v > 0.0:
            mask |= 1 << i
    return mask


def residual(f: MeasurableFn, g: MeasurableFn) -> MeasurableFn:
    """Pointwise absolute difference |f - g|."""
    _require_same_space(f, g)
    return MeasurableFn(f.space, np.abs(f.values - g.values))


def survival(c: Capacity, f: MeasurableFn, t: float) -> float:
    """Capacity of the level set at t, i.e. mu({f >= t}); non-increasing in t."""
    _require_same_space(c, f)
    return c.measure(level_set(f, t))


def distinct_values(f: MeasurableFn) -> list[float]:
    """Sorted deduplicated list of the values f attains."""
    return sorted(set(f.values.tolist()))
