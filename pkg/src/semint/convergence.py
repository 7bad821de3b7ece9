"""Convergence modes for sequences of [0,1]-valued functions, as tail verdicts on truncations.

Three modes are checked for a truncated sequence (f_n) with limit candidate f:

* in capacity:   mu({|f_n - f| >= t}) -> 0 for every t in (0, 1]
* strictly:      mu({|f_n - f| > 0}) -> 0
* in mean:       the seminormed integral of |f_n - f| -> 0

A limit over n is not machine-checkable, so a verdict here means: beyond
``tail_start`` the witnessed quantity stays within ``epsilon`` over the
available horizon.  Reports carry (horizon, epsilon, tail_start) and the full
witness data so the approximation is auditable.  When the tail still exceeds
epsilon but the final term has already dropped below epsilon/10, the verdict
is ``inconclusive`` rather than ``fail``: the horizon is too short to
distinguish slow convergence from divergence, and a hard fail would raise
false alarms in the implication audits.

The quantifier "for every t in (0,1]" is discharged through a finite grid.
Level sets are nested, so among grid points the smallest t is the binding
one; the full grid is still computed and reported.  The default grid has 100
log-spaced points because failures concentrate at small thresholds.

Two one-way implications hold between the modes and are exercised by the
audit helpers: strict convergence forces convergence in capacity (claim 1),
and strict convergence forces mean convergence for every semicopula
(claim 2).  Neither converse holds; ``counterexample_constant`` builds the
constant-value sequences witnessing both gaps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from semint.capacity import Capacity, FiniteSpace, random_capacity
from semint.errors import BadGridError, BadRateError, DomainError
from semint.integral import integrate
from semint.measurable import MeasurableFn, _require_same_space, residual
from semint.semicopula import Semicopula

DEFAULT_EPSILON = 1e-9
DEFAULT_T_GRID_SIZE = 100

MODE_IN_CAPACITY = "in-capacity"
MODE_STRICT = "strict"
MODE_IN_MEAN = "in-mean"


def default_t_grid(points: int = DEFAULT_T_GRID_SIZE) -> np.ndarray:
    """Log-spaced thresholds over [0.01, 1], dense near the small end."""
    return np.logspace(-2.0, 0.0, points)


def default_tail_start(horizon: int) -> int:
    return (horizon + 1) // 2


@dataclass(frozen=True, slots=True, eq=False)
class FnSequence:
    """A finite truncation of a function sequence plus its limit candidate."""

    space: FiniteSpace
    terms: tuple[MeasurableFn, ...]
    limit: MeasurableFn
    provenance: str = ""

    def __post_init__(self) -> None:
        if not self.terms:
            raise DomainError("sequence needs at least one term")
        object.__setattr__(self, "terms", tuple(self.terms))
        for term in self.terms:
            _require_same_space(term, self.limit)
        _require_same_space(self.limit, self)

    @property
    def horizon(self) -> int:
        return len(self.terms)

    def residual_matrix(self) -> np.ndarray:
        """|f_n - f| stacked row per term, shape (horizon, space.size)."""
        stacked = np.stack([term.values for term in self.terms])
        return np.abs(stacked - self.limit.values[None, :])


@dataclass(frozen=True, slots=True)
class ConvergenceReport:
    """Verdict for one mode, with the witness data behind it.

    ``per_n`` holds the witnessed quantity for n = 1..horizon (for the
    in-capacity mode: the survival values at the smallest grid threshold).
    ``per_t`` is only present for the in-capacity mode and pairs each grid
    threshold with its tail supremum.
    """

    mode: str
    verdict: str
    horizon: int
    epsilon: float
    tail_start: int
    tail_sup: float
    final_value: float
    per_n: tuple[float, ...]
    per_t: tuple[tuple[float, float], ...] | None = None

    def to_json_dict(self) -> dict:
        out = {
            "mode": self.mode,
            "verdict": self.verdict,
            "horizon": self.horizon,
            "epsilon": self.epsilon,
            "tail_start": self.tail_start,
            "tail_sup": self.tail_sup,
            "final_value": self.final_value,
            "witnesses_by_n": list(self.per_n),
        }
        if self.per_t is not None:
            out["witnesses_by_t"] = [{"t": t, "tail_sup": s} for t, s in self.per_t]
        return out


def _check_tail_args(horizon: int, tail_start: int | None) -> int:
    if tail_start is None:
        return default_tail_start(horizon)
    if not 1 <= tail_start <= horizon:
        raise DomainError(f"tail_start must be in 1..{horizon}, got {tail_start}")
    return tail_start


def _verdict(tail_sup: float, final_value: float, epsilon: float) -> str:
    if tail_sup <= epsilon:
        return "pass"
    if final_value <= epsilon / 10.0:
        return "inconclusive"
    return "fail"


def _survival_matrix(c: Capacity, residuals: np.ndarray, thresholds: np.ndarray) -> np.ndarray:
    """mu({|f_n - f| >= t}) for every term (rows) and threshold (columns)."""
    n = residuals.shape[1]
    powers = np.int64(1) << np.arange(n, dtype=np.int64)
    hits = residuals[:, None, :] >= thresholds[None, :, None]
    masks = hits.astype(np.int64) @ powers
    return c.table[masks]


def check_in_capacity(
    c: Capacity,
    seq: FnSequence,
    t_grid: Sequence[float] | np.ndarray | None = None,
    epsilon: float = DEFAULT_EPSILON,
    tail_start: int | None = None,
) -> ConvergenceReport:
    """Tail check of mu({|f_n - f| >= t}) over a threshold grid in (0, 1]."""
    _require_same_space(c, seq)
    grid = default_t_grid() if t_grid is None else np.asarray(t_grid, dtype=np.float64)
    if grid.ndim != 1 or grid.size == 0:
        raise BadGridError("t_grid must be a nonempty 1-d list of thresholds")
    if np.any(~((grid > 0.0) & (grid <= 1.0))):
        raise BadGridError("t_grid entries must lie in (0, 1]")
    tail_start = _check_tail_args(seq.horizon, tail_start)

    surv = _survival_matrix(c, seq.residual_matrix(), grid)
    tail_sups = surv[tail_start - 1 :, :].max(axis=0)
    binding = int(np.argmin(grid))
    per_t = tuple((float(t), float(sup)) for t, sup in zip(grid, tail_sups))
    return ConvergenceReport(
        mode=MODE_IN_CAPACITY,
        verdict=_verdict(float(tail_sups.max()), float(surv[-1, binding]), epsilon),
        horizon=seq.horizon,
        epsilon=epsilon,
        tail_start=tail_start,
        tail_sup=float(tail_sups.max()),
        final_value=float(surv[-1, binding]),
        per_n=tuple(float(v) for v in surv[:, binding]),
        per_t=per_t,
    )


def check_strict(
    c: Capacity,
    seq: FnSequence,
    epsilon: float = DEFAULT_EPSILON,
    tail_start: int | None = None,
) -> ConvergenceReport:
    """Tail check of mu({|f_n - f| > 0})."""
    _require_same_space(c, seq)
    tail_start = _check_tail_args(seq.horizon, tail_start)
    residuals = seq.residual_matrix()
    n = residuals.shape[1]
    powers = np.int64(1) << np.arange(n, dtype=np.int64)
    masks = (residuals > 0.0).astype(np.int64) @ powers
    values = c.table[masks]
    tail_sup = float(values[tail_start - 1 :].max())
    return ConvergenceReport(
        mode=MODE_STRICT,
        verdict=_verdict(tail_sup, float(values[-1]), epsilon),
        horizon=seq.horizon,
        epsilon=epsilon,
        tail_start=tail_start,
        tail_sup=tail_sup,
        final_value=float(values[-1]),
        per_n=tuple(float(v) for v in values),
    )


def check_in_mean(
    s: Semicopula,
    c: Capacity,
    seq: FnSequence,
    epsilon: float = DEFAULT_EPSILON,
    tail_start: int | None = None,
) -> ConvergenceReport:
    """Tail check of the seminormed integral of |f_n - f|."""
    _require_same_space(c, seq)
    tail_start = _check_tail_args(seq.horizon, tail_start)
    values = [integrate(s, c, residual(term, seq.limit)).value for term in seq.terms]
    tail_sup = max(values[tail_start - 1 :])
    return ConvergenceReport(
        mode=MODE_IN_MEAN,
        verdict=_verdict(tail_sup, values[-1], epsilon),
        horizon=seq.horizon,
        epsilon=epsilon,
        tail_start=tail_start,
        tail_sup=tail_sup,
        final_value=values[-1],
        per_n=tuple(values),
    )


@dataclass(frozen=True, slots=True)
class ImplicationReport:
    """Joint verdict of a hypothesis/conclusion mode pair for one implication claim.

    ``violation`` is True only when the hypothesis passed while the
    conclusion hard-failed; since both implications are proved facts, a
    violation can only mean a bug in this artifact (or a genuinely
    inconsistent epsilon/tail configuration), never new mathematics.
    """

    theorem: int
    hypothesis: ConvergenceReport
    conclusion: ConvergenceReport
    violation: bool
    consistent: bool
    summary: str

    def to_json_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "hypothesis": self.hypothesis.to_json_dict(),
            "conclusion": self.conclusion.to_json_dict(),
            "violation": self.violation,
            "consistent": self.consistent,
            "summary": self.summary,
        }


def _implication_report(theorem: int, hyp: ConvergenceReport, concl: ConvergenceReport) -> ImplicationReport:
    violation = hyp.verdict == "pass" and concl.verdict == "fail"
    pair = f"{hyp.mode}={hyp.verdict}, {concl.mode}={concl.verdict}"
    if violation:
        summary = f"CONSISTENCY VIOLATION: {pair}"
    elif hyp.verdict == "fail" and concl.verdict == "pass":
        summary = f"consistent: {pair} (conclusion holds without the hypothesis)"
    else:
        summary = f"consistent: {pair}"
    return ImplicationReport(theorem, hyp, concl, violation, not violation, summary)


def theorem1_audit(
    c: Capacity,
    seq: FnSequence,
    *,
    t_grid: Sequence[float] | np.ndarray | None = None,
    epsilon: float = DEFAULT_EPSILON,
    tail_start: int | None = None,
) -> ImplicationReport:
    """Audit claim 1: a strict-convergence pass must come with an in-capacity pass."""
    hyp = check_strict(c, seq, epsilon, tail_start)
    concl = check_in_capacity(c, seq, t_grid, epsilon, tail_start)
    return _implication_report(1, hyp, concl)


def theorem2_audit(
    s: Semicopula,
    c: Capacity,
    seq: FnSequence,
    *,
    epsilon: float = DEFAULT_EPSILON,
    tail_start: int | None = None,
) -> ImplicationReport:
    """Audit claim 2: a strict-convergence pass must come with an in-mean pass."""
    hyp = check_strict(c, seq, epsilon, tail_start)
    concl = check_in_mean(s, c, seq, epsilon, tail_start)
    return _implication_report(2, hyp, concl)


BUILTIN_RATES: dict[str, Callable[[int], float]] = {
    "1/n": lambda n: 1.0 / n,
    "1/2^n": lambda n: 0.5**n,
    "1/log(n+2)": lambda n: 1.0 / math.log(n + 2),
}


def counterexample_constant(
    space: FiniteSpace, rate: str | Callable[[int], float], horizon: int
) -> FnSequence:
    """The constant-value sequence separating the modes: f_n identically a_n, limit 0.

    Every point carries the value a_n, so the strict support is all of X for
    every n (strict convergence fails as badly as possible), while the
    integral of f_n collapses to S(a_n, 1) = a_n, which vanishes with the
    rate.  ``rate`` is a builtin name or a callable n -> a_n; the values must
    be in (0, 1] and strictly decreasing over the horizon, the finite stand-in
    for "positive and vanishing".
    """
    if horizon < 1:
        raise DomainError(f"horizon must be >= 1, got {horizon}")
    if callable(rate):
        fn = rate
        label = getattr(rate, "__name__", "callable")
    else:
        try:
            fn = BUILTIN_RATES[rate]
        except KeyError:
            raise BadRateError(
                f"unknown rate {rate!r}; builtins: {', '.join(sorted(BUILTIN_RATES))}"
            ) from None
        label = rate
    values = [float(fn(n)) for n in range(1, horizon + 1)]
    for n, a in enumerate(values, start=1):
        if not 0.0 < a <= 1.0:
            raise BadRateError(f"a_{n} = {a!r} outside (0, 1]")
    for n in range(1, len(values)):
        if values[n] >= values[n - 1]:
            raise BadRateError(
                f"rate does not vanish over the horizon: a_{n} = {values[n - 1]!r} "
                f"<= a_{n + 1} = {values[n]!r}"
            )
    terms = tuple(MeasurableFn.constant(space, a) for a in values)
    limit = MeasurableFn.constant(space, 0.0)
    return FnSequence(space, terms, limit, provenance=f"constant a_n = {label}")


def random_strict_sequence(
    space: FiniteSpace,
    c: Capacity,
    horizon: int,
    rng: np.random.Generator,
    *,
    vanish_at: int | None = None,
) -> FnSequence:
    """Random sequence that converges strictly by construction.

    Terms differ from the limit only on a support chain that loses one point
    per step and is forced empty from term ``vanish_at`` on (default: the
    default tail start).  A general capacity has no null sets besides the
    empty set, so emptying the chain is what makes the strict hypothesis hold
    exactly rather than approximately.
    """
    if horizon < 1:
        raise DomainError(f"horizon must be >= 1, got {horizon}")
    if vanish_at is None:
        vanish_at = default_tail_start(horizon)
    limit_values = rng.random(space.size)
    limit = MeasurableFn(space, limit_values)
    support = int(rng.integers(0, space.num_subsets))
    terms = []
    for n in range(1, horizon + 1):
        if n >= vanish_at:
            support = 0
        values = limit_values.copy()
        if support:
            bits = [i for i in range(space.size) if support >> i & 1]
            values[bits] = rng.random(len(bits))
            support &= ~(1 << bits[int(rng.integers(0, len(bits)))])
        terms.append(MeasurableFn(space, values))
    return FnSequence(space, tuple(terms), limit, provenance="random shrinking-support sequence")


def random_audit(
    space: FiniteSpace,
    semicopulas: Sequence[Semicopula],
    cases: int,
    seed: int,
    *,
    horizon: int = 24,
) -> list[tuple[ImplicationReport, ...]]:
    """Run both implication audits over seeded random capacities and strict sequences.

    Returns one tuple per case: the claim-1 report followed by a claim-2
    report per semicopula.  Used by the CLI ``audit`` subcommand and the
    acceptance suite; a fixed seed makes the whole batch reproducible.
    """
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(cases):
        c = random_capacity(space, rng)
        seq = random_strict_sequence(space, c, horizon, rng)
        reports = [theorem1_audit(c, seq)]
        for s in semicopulas:
            reports.append(theorem2_audit(s, c, seq))
        out.append(tuple(reports))
    return out
