"""Adjustment functionals, positivity, and the sizing calculators."""

import itertools
import math

import numpy as np
import pytest

from adjustkit import (
    AdjustmentQuery,
    CiQuery,
    EmptyDatasetError,
    Event,
    JointDistribution,
    OutOfRangeError,
    PositivityViolationError,
    SampleDataset,
    VariableSpec,
    alpha,
    conditional_prob,
    delta_ci,
    error_bound,
    exact_adjustment,
    gallery_backdoor,
    gallery_hardness,
    gallery_random,
    gallery_weak_edge,
    plugin_adjustment,
    sample,
    sample_size_estimation,
    sample_size_expectation,
    trial_seed,
)


def confounded_triple():
    """Z -> X, Z -> Y, X -> Y with hand-picked CPTs."""
    p_z = np.array([0.6, 0.4])
    p_x = np.array([[0.7, 0.3], [0.2, 0.8]])
    p_y = np.zeros((2, 2, 2))
    p_y[0, 0] = [0.9, 0.1]
    p_y[0, 1] = [0.4, 0.6]
    p_y[1, 0] = [0.7, 0.3]
    p_y[1, 1] = [0.1, 0.9]
    table = np.einsum("z,zx,zxy->zxy", p_z, p_x, p_y)
    specs = (VariableSpec("Z", 2), VariableSpec("X", 2), VariableSpec("Y", 2))
    return JointDistribution(specs, table.reshape(-1)), p_z, p_y


def test_exact_adjustment_hand_computed():
    dist, p_z, p_y = confounded_triple()
    q = AdjustmentQuery(Event(X=1), Event(Y=1), ("Z",))
    want = sum(p_z[z] * p_y[z, 1, 1] for z in range(2))
    assert exact_adjustment(dist, q) == pytest.approx(want, abs=1e-12)


def test_exact_adjustment_empty_set_is_conditional():
    dist, _, _ = confounded_triple()
    q = AdjustmentQuery(Event(X=1), Event(Y=1), ())
    want = conditional_prob(dist, Event(Y=1), Event(X=1))
    assert exact_adjustment(dist, q) == pytest.approx(want, abs=1e-12)


def test_exact_adjustment_weak_edge_pin():
    for eps in (0.001, 0.01, 0.2, 0.7):
        dist = gallery_weak_edge(eps)
        q = AdjustmentQuery(Event(X=0), Event(Y=1), ("Z",))
        assert exact_adjustment(dist, q) == pytest.approx(0.5, abs=1e-12)


def test_exact_adjustment_hardness_gap_pin():
    dist = gallery_hardness(0.04, 0.4)
    x, y = Event(X=0), Event(Y=1)
    t_sub = exact_adjustment(dist, AdjustmentQuery(x, y, ("A",)))
    t_full = exact_adjustment(dist, AdjustmentQuery(x, y, ("A", "B")))
    assert abs(t_sub - t_full) == pytest.approx(0.00625, abs=1e-10)


def test_exact_adjustment_in_unit_interval():
    rng = np.random.default_rng(8)
    for seed in range(20):
        dist = gallery_random(4, 2, seed=seed)
        names = [v.name for v in dist.variables]
        x = Event(**{names[0]: int(rng.integers(2))})
        y = Event(**{names[1]: int(rng.integers(2))})
        for r in range(3):
            adjust = tuple(names[2:2 + r])
            val = exact_adjustment(dist, AdjustmentQuery(x, y, adjust))
            assert 0.0 <= val <= 1.0


def test_exact_adjustment_positivity_violation():
    # P(Z=1) > 0 but P(X=1 | Z=1) = 0
    table = np.zeros((2, 2, 2))
    table[0, 0, 0] = 0.2
    table[0, 1, 1] = 0.3
    table[1, 0, 0] = 0.5
    specs = (VariableSpec("Z", 2), VariableSpec("X", 2), VariableSpec("Y", 2))
    dist = JointDistribution(specs, table.reshape(-1))
    q = AdjustmentQuery(Event(X=1), Event(Y=1), ("Z",))
    with pytest.raises(PositivityViolationError):
        exact_adjustment(dist, q)


def test_adjustment_query_disjointness():
    with pytest.raises(OutOfRangeError):
        AdjustmentQuery(Event(X=0), Event(X=1), ())
    with pytest.raises(OutOfRangeError):
        AdjustmentQuery(Event(X=0), Event(Y=1), ("X",))


def test_plugin_all_rows_match():
    specs = (VariableSpec("A", 2), VariableSpec("X", 2), VariableSpec("Y", 2))
    rows = np.tile([1, 0, 1], (100, 1))
    data = SampleDataset(specs, rows)
    q = AdjustmentQuery(Event(X=0), Event(Y=1), ("A",))
    report = plugin_adjustment(data, q)
    assert report.value == pytest.approx(1.0)
    assert report.zero_cells == 0
    assert report.n_effective == 100


def test_plugin_no_treatment_rows():
    # no row has X=1, so every observed a is a zero cell and value is 0
    specs = (VariableSpec("A", 2), VariableSpec("X", 2), VariableSpec("Y", 2))
    rows = np.array([[0, 0, 1], [1, 0, 0], [1, 0, 1]])
    data = SampleDataset(specs, rows)
    q = AdjustmentQuery(Event(X=1), Event(Y=1), ("A",))
    report = plugin_adjustment(data, q)
    assert report.value == 0.0
    assert report.zero_cells == 2


def test_plugin_empty_dataset():
    specs = (VariableSpec("X", 2), VariableSpec("Y", 2))
    data = SampleDataset(specs, np.zeros((0, 2), dtype=np.int64))
    with pytest.raises(EmptyDatasetError):
        plugin_adjustment(data, AdjustmentQuery(Event(X=0), Event(Y=1), ()))


def test_plugin_weak_edge_monte_carlo():
    dist = gallery_weak_edge(0.01)
    data = sample(dist, 10 ** 5, seed=7)
    q = AdjustmentQuery(Event(X=0), Event(Y=1), ("Z",))
    report = plugin_adjustment(data, q)
    assert abs(report.value - 0.5) <= 0.02


def test_plugin_matches_exact_on_empirical():
    # with every (a, x) cell observed, the plug-in is the exact functional
    # of the empirical distribution
    from adjustkit import empirical_distribution
    dist = gallery_backdoor(2, seed=5)
    data = sample(dist, 4000, seed=6)
    q = AdjustmentQuery(Event(X=0), Event(Y=1), ("B", "A1", "A2"))
    report = plugin_adjustment(data, q)
    if report.zero_cells == 0:
        emp = empirical_distribution(data, [v.name for v in data.variables])
        want = exact_adjustment(emp, q)
        assert report.value == pytest.approx(want, abs=1e-12)
    assert 0.0 <= report.value <= 1.0


def test_plugin_convergence_medians():
    # median |T_hat - T| over 50 seeds is non-increasing in n
    dist, _, _ = confounded_triple()
    q = AdjustmentQuery(Event(X=1), Event(Y=1), ("Z",))
    truth = exact_adjustment(dist, q)
    medians = []
    for n in (10 ** 3, 10 ** 4, 10 ** 5):
        errs = []
        for t in range(50):
            data = sample(dist, n, seed=trial_seed(31, t))
            errs.append(abs(plugin_adjustment(data, q).value - truth))
        medians.append(float(np.median(errs)))
    assert medians[0] >= medians[1] >= medians[2]


def test_alpha_empty_set_is_marginal():
    dist, _, _ = confounded_triple()
    want = 0.6 * 0.3 + 0.4 * 0.8
    assert alpha(dist, Event(X=1), ()) == pytest.approx(want, abs=1e-12)


def test_alpha_hardness_pin():
    dist = gallery_hardness(0.04, 0.4)
    assert alpha(dist, Event(X=0), ("A",)) == pytest.approx(0.39, abs=1e-10)


def test_alpha_skips_unreachable_cells():
    # P(Z=1) = 0: the z=1 cell must not participate in the min
    table = np.zeros((2, 2))
    table[0, 0] = 0.25
    table[0, 1] = 0.75
    specs = (VariableSpec("Z", 2), VariableSpec("X", 2))
    dist = JointDistribution(specs, table.reshape(-1))
    assert alpha(dist, Event(X=0), ("Z",)) == pytest.approx(0.25, abs=1e-12)


def test_alpha_superset_monotonicity():
    # alpha over a superset never exceeds alpha over the subset
    for seed in range(50):
        dist = gallery_random(4, 2, seed=seed)
        names = [v.name for v in dist.variables]
        x = Event(**{names[0]: 0})
        pool = names[1:]
        subsets = [tuple(pool[:i]) for i in range(len(pool) + 1)]
        for s_small, s_big in itertools.combinations(subsets, 2):
            if set(s_small) <= set(s_big):
                assert alpha(dist, x, s_small) >= alpha(dist, x, s_big) - 1e-12


def test_misspecification_bound_small_suite():
    # |T_S - T_A| <= Delta(X; A minus S | S) / alpha_S, all S, 50 dists
    for seed in range(50):
        dist = gallery_random(4, 2, seed=seed)
        names = [v.name for v in dist.variables]
        x_name, y_name = names[0], names[1]
        pool = tuple(names[2:])
        x, y = Event(**{x_name: 0}), Event(**{y_name: 0})
        t_full = exact_adjustment(dist, AdjustmentQuery(x, y, pool))
        for r in range(len(pool) + 1):
            for s in itertools.combinations(pool, r):
                rest = tuple(n for n in pool if n not in s)
                if not rest:
                    continue
                dep = delta_ci(dist, CiQuery((x_name,), rest, s))
                a_s = alpha(dist, x, s)
                t_s = exact_adjustment(dist, AdjustmentQuery(x, y, s))
                assert abs(t_s - t_full) <= dep / a_s + 1e-9


def test_exact_blanket_equality():
    # Delta = 0 by construction, so the subset answer matches exactly
    for seed in (1, 2, 3):
        dist = gallery_backdoor(2, seed=seed)
        x, y = Event(X=0), Event(Y=1)
        t_pa = exact_adjustment(dist, AdjustmentQuery(x, y, ("A1", "A2")))
        t_full = exact_adjustment(dist, AdjustmentQuery(x, y, ("B", "A1", "A2")))
        assert abs(t_pa - t_full) <= 1e-9


def test_sample_size_estimation_pin():
    assert sample_size_estimation(0.05, 0.1, 4, 0.2) == 151168
    t1 = 36.0 * 4 / (0.05 * 0.2) * math.log(3 * 4 / 0.1)
    t2 = 9.0 / (2 * 0.05 ** 2 * 0.2) * math.log(6 / 0.1)
    t3 = 2.0 * (4 + math.log(1 / 0.1)) / (0.05 / 3) ** 2
    assert math.ceil(t1 + t2 + t3) == 151168


def test_sample_size_estimation_monotone_in_eps():
    for eps in (0.4, 0.2, 0.1, 0.05):
        bigger = sample_size_estimation(eps / 2, 0.1, 4, 0.2)
        assert bigger >= sample_size_estimation(eps, 0.1, 4, 0.2)


def test_sample_size_estimation_range_errors():
    with pytest.raises(OutOfRangeError):
        sample_size_estimation(0.0, 0.1, 4, 0.2)
    with pytest.raises(OutOfRangeError):
        sample_size_estimation(0.05, 1.0, 4, 0.2)
    with pytest.raises(OutOfRangeError):
        sample_size_estimation(0.05, 0.1, 0, 0.2)
    with pytest.raises(OutOfRangeError):
        sample_size_estimation(0.05, 0.1, 4, 0.0)


def test_sample_size_expectation_pin():
    assert sample_size_expectation(0.1, 8, 0.5) == 720
    # alpha = 1 halves both terms relative to alpha = 0.5
    assert sample_size_expectation(0.1, 8, 1.0) == 360


def test_sample_size_expectation_lambda_scaling():
    # quadrupling lambda cuts the 1/lambda^2 term by 16x
    lo = sample_size_expectation(0.1, 8, 1.0)   # ceil(80 + 100) * 2
    hi = sample_size_expectation(0.4, 8, 1.0)   # ceil(20 + 6.25) * 2
    assert lo == 360
    assert hi == 2 * math.ceil(20 + 6.25)


def test_error_bound_direct_pin():
    got = error_bound(10 ** 4, 16, 0.25, mode="direct")
    assert got == pytest.approx(0.0064 + 0.02 + 0.04, abs=1e-12)


def test_error_bound_direct_scaling():
    # quadrupling n halves the sqrt terms and quarters the first
    n, sigma, a = 2500, 16, 0.25
    t1 = sigma / (n * a)
    t2 = 1.0 / math.sqrt(n * a)
    t3 = math.sqrt(sigma / n)
    assert error_bound(n, sigma, a) == pytest.approx(t1 + t2 + t3, abs=1e-12)
    assert error_bound(4 * n, sigma, a) == pytest.approx(
        t1 / 4 + t2 / 2 + t3 / 2, abs=1e-12)


def test_error_bound_amba_and_bamba():
    n, sigma, a = 10 ** 4, 16, 0.25
    got = error_bound(n, sigma, a, mode="amba", k=3, sigma_x=2)
    want = (1 / a) * math.sqrt(3 / n) * (2 * 16) ** 0.25
    assert got == pytest.approx(want, abs=1e-12)
    got = error_bound(n, sigma, a, mode="bamba", k=3, sigma_x=2, sigma_y=2)
    want = (1 / a) * math.sqrt(3 / n) * (2 * 2 * 16) ** 0.25
    assert got == pytest.approx(want, abs=1e-12)


def test_error_bound_amba_k_zero():
    assert error_bound(100, 16, 0.25, mode="amba", k=0, sigma_x=2) == 0.0


def test_error_bound_argument_errors():
    with pytest.raises(OutOfRangeError):
        error_bound(0, 16, 0.25)
    with pytest.raises(OutOfRangeError):
        error_bound(100, 16, 0.25, mode="amba")  # k and sigma_x missing
    with pytest.raises(OutOfRangeError):
        error_bound(100, 16, 1.5)
