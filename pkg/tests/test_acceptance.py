"""Release gate: seven timed criteria, one test (one pass/fail line) each.

Each criterion pins its own tolerances and its wall-clock budget.  Budgets are
asserted with time.perf_counter around the full workload, fixtures included.
"""

import time

import numpy as np

from semint import (
    BUILTIN_KINDS,
    BUILTINS,
    Capacity,
    FiniteSpace,
    FnSequence,
    MeasurableFn,
    check_in_capacity,
    check_in_mean,
    check_strict,
    integrate,
    integrate_grid_oracle,
    random_audit,
    random_capacity,
    validate_semicopula,
    validate_table,
)

SEED = 20260815
ORACLE_POINTS = 100_000
ORACLE_GAP = 5e-4


def harmonic_sequence(space, horizon):
    terms = [MeasurableFn.constant(space, 1.0 / n) for n in range(1, horizon + 1)]
    return FnSequence(space, terms, MeasurableFn.constant(space, 0.0))


def submasks(mask):
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def pairwise_monotone(c):
    full = c.space.full_mask
    for big in range(full + 1):
        for small in submasks(big):
            if c.measure(small) > c.measure(big):
                return False
    return True


def test_criterion_1_constant_identity_exact():
    t0 = time.perf_counter()
    space = FiniteSpace(6)
    rng = np.random.default_rng(SEED)
    capacities = [random_capacity(space, rng) for _ in range(50)]
    constants = [MeasurableFn.constant(space, 1.0 / n) for n in range(1, 101)]
    for c in capacities:
        for s in BUILTINS:
            for f in constants:
                a = f.values[0]
                assert abs(integrate(s, c, f).value - a) <= 1e-12
    assert time.perf_counter() - t0 < 1.0


def test_criterion_2_mean_convergence_without_strict():
    t0 = time.perf_counter()
    space = FiniteSpace(6)
    rng = np.random.default_rng(SEED)
    capacities = [random_capacity(space, rng) for _ in range(50)]
    seq = harmonic_sequence(space, 100)
    for c in capacities:
        for s in BUILTINS:
            mean = check_in_mean(s, c, seq, epsilon=1 / 51, tail_start=51)
            assert mean.verdict == "pass"
            assert mean.tail_sup == 1 / 51  # constants integrate exactly
        strict = check_strict(c, seq)
        assert strict.verdict == "fail"
        assert all(w == 1.0 for w in strict.per_n)
    assert time.perf_counter() - t0 < 1.0


def test_criterion_3_in_capacity_without_strict():
    t0 = time.perf_counter()
    space = FiniteSpace(6)
    rng = np.random.default_rng(SEED)
    capacities = [random_capacity(space, rng) for _ in range(50)]
    seq = harmonic_sequence(space, 200)
    for c in capacities:
        cap = check_in_capacity(c, seq, epsilon=0.0, tail_start=101)
        assert cap.verdict == "pass"
        assert cap.tail_sup == 0.0
        assert len(cap.per_t) == 100  # default t-grid
        assert check_strict(c, seq).verdict == "fail"
    assert time.perf_counter() - t0 < 1.0


def test_criterion_4_implication_audits_zero_violations():
    t0 = time.perf_counter()
    space = FiniteSpace(6)
    batches = random_audit(space, BUILTINS, cases=1000, seed=SEED, horizon=24)
    assert len(batches) == 1000
    violations = 0
    for batch in batches:
        assert len(batch) == 1 + len(BUILTINS)  # one theorem1_audit, one theorem2_audit per S
        for report in batch:
            assert report.consistent
            violations += bool(report.violation)
    assert violations == 0
    assert time.perf_counter() - t0 < 30.0


def test_criterion_5_oracle_equivalence_and_indicator_identity():
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED)
    for i in range(500):
        space = FiniteSpace(2 + i % 7)  # sizes 2..8
        c = random_capacity(space, rng)
        f = MeasurableFn(space, rng.uniform(size=space.size))
        for s in BUILTINS:
            exact = integrate(s, c, f).value
            approx = integrate_grid_oracle(s, c, f, grid_points=ORACLE_POINTS)
            assert 0.0 <= exact - approx <= ORACLE_GAP

    space = FiniteSpace(8)
    for _ in range(20):
        c = random_capacity(space, rng)
        for mask in range(space.num_subsets):
            f = MeasurableFn.indicator(space, mask)
            for s in BUILTINS:
                assert integrate(s, c, f).value == c.measure(mask)
    assert time.perf_counter() - t0 < 60.0


def test_criterion_6_axiom_suites():
    t0 = time.perf_counter()
    for s in BUILTINS:
        report = validate_semicopula(s, check_resolution=200)
        assert report.passed and not report.violations

    rng = np.random.default_rng(SEED)
    for n in range(1, 7):
        space = FiniteSpace(n)
        built = []
        cardinality = [bin(mask).count("1") / n for mask in range(space.num_subsets)]
        built.append(Capacity.from_table(space, cardinality))
        weights = rng.uniform(0.05, 1.0, size=n)
        weights[rng.integers(n)] = 1.0
        built.append(Capacity.from_possibility(space, weights))
        additive = rng.uniform(0.05, 1.0, size=n)
        built.append(Capacity.from_additive(space, additive / additive.sum()))
        base = Capacity.from_additive(space, np.full(n, 1.0 / n))
        g_nodes = np.linspace(0.0, 1.0, 33) ** 2
        built.append(Capacity.from_distortion(base, g_nodes))
        built.extend(random_capacity(space, rng) for _ in range(5))
        for c in built:
            assert validate_table(space, c.table) == []
            assert pairwise_monotone(c)
            assert c.measure(0) == 0.0 and c.measure(space.full_mask) == 1.0
    assert time.perf_counter() - t0 < 10.0


def test_criterion_7_worked_example_goldens():
    t0 = time.perf_counter()
    space = FiniteSpace(4)
    c = Capacity.from_additive(space, [0.25, 0.25, 0.25, 0.25])
    f = MeasurableFn(space, [0.25, 0.5, 0.75, 1.0])
    goldens = {"min": 0.5, "product": 0.375, "prodmax": 0.28125, "lukasiewicz": 0.25}
    assert set(goldens) == set(BUILTIN_KINDS)
    for s in BUILTINS:
        golden = goldens[s.kind]
        # oracle confirmation comes first: the golden must sit within one
        # grid-gap above the brute-force value before it counts as frozen
        approx = integrate_grid_oracle(s, c, f, grid_points=ORACLE_POINTS)
        assert 0.0 <= golden - approx <= ORACLE_GAP
        assert abs(integrate(s, c, f).value - golden) <= 1e-12
    assert time.perf_counter() - t0 < 1.0
