"""Capacities, i.e. normalized monotone set functions, on the powerset of a finite ground set.

Ground-set points are ``0 .. n-1`` and subsets are n-bit masks, so a capacity
is a dense table of ``2**n`` values indexed by mask.  The table representation
keeps validation total and exact; it caps the ground set at 24 points.

Monotonicity is validated with the single-element increment scan: for every
mask ``A`` and every point ``i`` outside ``A``, require
``table[A] <= table[A | {i}]``.  By transitivity along chains this is
equivalent to checking every subset pair, at O(n * 2**n) instead of O(4**n)
cost.  Comparisons are exact; every constructor below is arranged so that its
floating-point output is monotone without tolerance.

All capacity objects are immutable after construction and safe to share
across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from semint.errors import (
    BadDistortionError,
    BadWeightsError,
    DomainError,
    MaxNotOneError,
    NotMonotoneError,
    NotNormalizedError,
)

MAX_POINTS = 24

_WEIGHT_SUM_TOL = 1e-9


@dataclass(frozen=True, slots=True)
class FiniteSpace:
    """A finite ground set ``{0, ..., size-1}`` whose subsets are bit masks."""

    size: int

    def __post_init__(self) -> None:
        if not isinstance(self.size, int) or isinstance(self.size, bool):
            raise DomainError(f"space size must be an int, got {type(self.size).__name__}")
        if not 1 <= self.size <= MAX_POINTS:
            raise DomainError(f"space size must be in 1..{MAX_POINTS}, got {self.size}")

    @property
    def full_mask(self) -> int:
        return (1 << self.size) - 1

    @property
    def num_subsets(self) -> int:
        return 1 << self.size

    def check_mask(self, mask: int) -> int:
        if not isinstance(mask, (int, np.integer)) or isinstance(mask, bool):
            raise DomainError(f"subset mask must be an int, got {type(mask).__name__}")
        mask = int(mask)
        if mask < 0 or mask > self.full_mask:
            raise DomainError(f"mask {mask:#x} has bits outside a {self.size}-point space")
        return mask


@dataclass(frozen=True, slots=True)
class CapacityViolation:
    """One violated constraint found while validating a capacity table.

    ``kind`` is one of ``domain``, ``not-normalized``, ``not-monotone``.
    For monotonicity, ``mask``/``element`` witness mu(A) > mu(A + {i}).
    """

    kind: str
    message: str
    mask: int | None = None
    element: int | None = None

    def to_json_dict(self) -> dict:
        out: dict = {"kind": self.kind, "message": self.message}
        if self.mask is not None:
            out["mask"] = self.mask
        if self.element is not None:
            out["element"] = self.element
        return out


def validate_table(space: FiniteSpace, values: Sequence[float] | np.ndarray) -> list[CapacityViolation]:
    """Check a dense candidate table against the capacity axioms.

    Returns every violated constraint (range, boundary normalization,
    single-element monotonicity), in deterministic order.  An empty list
    means the table is a valid capacity.
    """
    table = np.asarray(values, dtype=np.float64)
    if table.ndim != 1 or table.size != space.num_subsets:
        raise DomainError(
            f"capacity table for a {space.size}-point space needs {space.num_subsets} "
            f"values, got shape {table.shape}"
        )
    violations: list[CapacityViolation] = []

    bad_range = np.where(~((table >= 0.0) & (table <= 1.0)))[0]
    for mask in bad_range:
        violations.append(
            CapacityViolation("domain", f"mu({int(mask):#x}) = {float(table[mask])!r} outside [0,1]", int(mask))
        )

    if table[0] != 0.0:
        violations.append(
            CapacityViolation("not-normalized", f"mu(empty) = {float(table[0])!r}, expected 0", 0)
        )
    if table[-1] != 1.0:
        violations.append(
            CapacityViolation(
                "not-normalized", f"mu(X) = {float(table[-1])!r}, expected 1", space.full_mask
            )
        )

    idx = np.arange(space.num_subsets)
    for i in range(space.size):
        bit = 1 << i
        without = idx[(idx & bit) == 0]
        drop = table[without] - table[without | bit]
        for a in without[drop > 0.0]:
            a = int(a)
            violations.append(
                CapacityViolation(
                    "not-monotone",
                    f"mu({a:#x}) = {float(table[a])!r} > mu({a | bit:#x}) = {float(table[a | bit])!r}",
                    a,
                    i,
                )
            )
    return violations


@dataclass(frozen=True, slots=True, eq=False)
class Capacity:
    """A monotone set function with mu(empty) = 0 and mu(X) = 1, stored densely."""

    space: FiniteSpace
    table: np.ndarray

    def __post_init__(self) -> None:
        table = np.asarray(self.table, dtype=np.float64)
        table.setflags(write=False)
        object.__setattr__(self, "table", table)

    def measure(self, mask: int) -> float:
        """Value of the capacity at the subset encoded by ``mask``."""
        return float(self.table[self.space.check_mask(mask)])

    @classmethod
    def from_table(cls, space: FiniteSpace, values: Sequence[float] | np.ndarray) -> "Capacity":
        """Build a capacity from a dense table, rejecting any axiom violation."""
        violations = validate_table(space, values)
        if violations:
            domain = [v for v in violations if v.kind == "domain"]
            if domain:
                raise DomainError(domain[0].message)
            boundary = [v for v in violations if v.kind == "not-normalized"]
            if boundary:
                raise NotNormalizedError(
                    f"{boundary[0].message} ({len(violations)} violation(s) total)"
                )
            first = violations[0]
            raise NotMonotoneError(
                f"{first.message} ({len(violations)} violation(s) total)",
                mask=first.mask,
                element=first.element,
            )
        return cls(space, np.asarray(values, dtype=np.float64).copy())

    @classmethod
    def from_possibility(cls, space: FiniteSpace, weights: Sequence[float]) -> "Capacity":
        """Maxitive capacity mu(A) = max of the point weights over A.

        The weights must lie in [0,1] and attain 1 somewhere, which makes the
        result normalized; the running-max construction is exactly monotone.
        """
        w = np.asarray(weights, dtype=np.float64)
        if w.shape != (space.size,):
            raise DomainError(f"need {space.size} weights, got shape {w.shape}")
        if np.any(w < 0.0) or np.any(w > 1.0):
            raise DomainError("possibility weights must lie in [0,1]")
        if not np.any(w == 1.0):
            raise MaxNotOneError(f"max weight is {float(w.max())!r}, expected exactly 1")
        table = np.zeros(space.num_subsets)
        idx = np.arange(space.num_subsets)
        for i in range(space.size):
            bit = 1 << i
            has = (idx & bit) != 0
            table[has] = np.maximum(table[idx[has] ^ bit], w[i])
        return cls(space, table)

    @classmethod
    def from_additive(cls, space: FiniteSpace, weights: Sequence[float]) -> "Capacity":
        """Additive capacity mu(A) = sum of the point weights over A.

        Weights must be nonnegative and sum to 1 within 1e-9; the table is
        then renormalized so mu(X) is exactly 1.  Sums are accumulated per
        mask by adding one nonnegative weight at a time, which keeps the
        floating-point table exactly monotone.
        """
        w = np.asarray(weights, dtype=np.float64)
        if w.shape != (space.size,):
            raise DomainError(f"need {space.size} weights, got shape {w.shape}")
        if np.any(w < 0.0):
            raise BadWeightsError("additive weights must be nonnegative")
        total = float(w.sum())
        if total == 0.0:
            raise BadWeightsError("additive weights sum to zero")
        if abs(total - 1.0) > _WEIGHT_SUM_TOL:
            raise BadWeightsError(f"additive weights sum to {total!r}, expected 1 within 1e-9")
        table = np.zeros(space.num_subsets)
        idx = np.arange(space.num_subsets)
        for i in range(space.size):
            bit = 1 << i
            has = (idx & bit) != 0
            table[has] = table[idx[has] ^ bit] + w[i]
        table = table / table[-1]
        table[0] = 0.0
        table[-1] = 1.0
        return cls(space, table)

    @classmethod
    def from_distortion(cls, base: "Capacity", g: Sequence[float]) -> "Capacity":
        """Distorted capacity mu'(A) = g(mu(A)) for a sampled monotone ``g``.

        ``g`` is a table of m+1 uniform samples over [0,1] with g(0)=0 and
        g(1)=1; values between samples are linearly interpolated and clamped
        into the sample bracket so monotonicity survives rounding.
        """
        samples = np.asarray(g, dtype=np.float64)
        if samples.ndim != 1 or samples.size < 2:
            raise BadDistortionError("distortion needs at least 2 samples")
        if samples[0] != 0.0 or samples[-1] != 1.0:
            raise BadDistortionError(
                f"distortion endpoints are ({float(samples[0])!r}, {float(samples[-1])!r}), expected (0, 1)"
            )
        if np.any(np.diff(samples) < 0.0):
            raise BadDistortionError("distortion samples must be non-decreasing")
        table = _interp_monotone(samples, base.table)
        return cls.from_table(base.space, table)

    def to_json_dict(self) -> dict:
        return {"n": self.space.size, "kind": "table", "values": [float(v) for v in self.table]}


def _interp_monotone(samples: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Piecewise-linear evaluation of uniform samples, clamped per bracket.

    Clamping output into [samples[k], samples[k+1]] guarantees that ordered
    inputs map to ordered outputs despite rounding, and that inputs landing
    on a sample reproduce it exactly.
    """
    m = samples.size - 1
    pos = x * m
    k = np.minimum(pos.astype(np.int64), m - 1)
    frac = pos - k
    lo = samples[k]
    hi = samples[k + 1]
    out = np.clip(lo + (hi - lo) * frac, lo, hi)
    return np.where(frac >= 1.0, hi, out)


def random_capacity(space: FiniteSpace, rng: np.random.Generator) -> Capacity:
    """Draw a random capacity: i.i.d. uniforms per subset, monotone envelope, fixed boundaries.

    The envelope step replaces each subset's draw with the max over its
    subsets, so no rejection sampling is needed.
    """
    table = rng.random(space.num_subsets)
    idx = np.arange(space.num_subsets)
    for i in range(space.size):
        bit = 1 << i
        has = (idx & bit) != 0
        table[has] = np.maximum(table[has], table[idx[has] ^ bit])
    table[0] = 0.0
    table[-1] = 1.0
    return Capacity.from_table(space, table)
