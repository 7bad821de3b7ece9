"""The seminormed (semicopula-based) Sugeno integral on a finite space, exactly.

The integral is the supremum over thresholds t in [0,1] of
``S(t, mu({f >= t}))``.  On a finite ground set that supremum is attained at
one of the finitely many values f takes: between consecutive distinct values
``v_i < v_{i+1}`` the level set, hence the survival value, is constant and
equal to its value at ``v_{i+1}``, and S is non-decreasing in its first
argument, so the supremum over each such interval sits at the right endpoint;
below the smallest value the survival is mu(X) = 1 and ``S(t, 1) = t`` climbs
to that smallest value; above the largest value the level set is empty and
``S(t, 0) = 0``.  The candidate scan over the distinct values is therefore
exact, not an approximation.  ``integrate_grid_oracle`` is the direct
transcription of the supremum onto a dense threshold grid, kept solely to
cross-check that claim; it can only undershoot.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from semint.capacity import Capacity
from semint.errors import DomainError
from semint.measurable import MeasurableFn, _require_same_space, distinct_values
from semint.semicopula import MIN, PRODUCT, Semicopula


@dataclass(frozen=True, slots=True)
class IntegralResult:
    """Integral value plus the threshold attaining it.

    Ties are broken toward the smallest attaining threshold, so results are
    deterministic and safe to freeze in golden tests.
    """

    value: float
    argmax_threshold: float
    candidates_inspected: int

    def to_json_dict(self) -> dict:
        return {
            "value": self.value,
            "argmax_t": self.argmax_threshold,
            "method": "exact",
            "candidates_inspected": self.candidates_inspected,
        }


def integrate(s: Semicopula, c: Capacity, f: MeasurableFn) -> IntegralResult:
    """Exact integral via the candidate scan over the distinct values of f.

    All comparisons in the scan are exact; candidates are evaluated at the
    stored double values, so no tolerance is involved.
    """
    _require_same_space(c, f)
    table = c.table
    values = f.values.tolist()
    n = len(values)
    candidates = sorted(set(values))
    best = -1.0
    best_t = 0.0
    for v in candidates:
        mask = 0
        for i in range(n):
            if values[i] >= v:
                mask |= 1 << i
        val = s.evaluate(v, float(table[mask]))
        if val > best:
            best = val
            best_t = v
    return IntegralResult(float(best), float(best_t), len(candidates))


def _grid_profile(s: Semicopula, c: Capacity, f: MeasurableFn, t: np.ndarray) -> np.ndarray:
    """S(t, mu({f >= t})) evaluated over an array of thresholds."""
    powers = np.int64(1) << np.arange(f.space.size, dtype=np.int64)
    masks = (f.values[None, :] >= t[:, None]).astype(np.int64) @ powers
    return s._evaluate_array(t, c.table[masks])


def integrate_grid_oracle(s: Semicopula, c: Capacity, f: MeasurableFn, grid_points: int) -> float:
    """Brute-force supremum over a uniform threshold grid including both endpoints.

    A lower bound on ``integrate(...).value``; the gap is at most the grid
    step times the semicopula's slope in its first argument (<= 2 for the
    builtins).
    """
    _require_same_space(c, f)
    if grid_points < 2:
        raise DomainError(f"grid_points must be >= 2, got {grid_points}")
    t = np.linspace(0.0, 1.0, grid_points)
    return float(_grid_profile(s, c, f, t).max())


def sugeno(c: Capacity, f: MeasurableFn) -> IntegralResult:
    """Specialization with the minimum aggregation."""
    return integrate(MIN, c, f)


def shilkret(c: Capacity, f: MeasurableFn) -> IntegralResult:
    """Specialization with the product aggregation."""
    return integrate(PRODUCT, c, f)
