"""Constructed distributions with checkable closed forms."""

import itertools
import math

import numpy as np
import pytest

from adjustkit import (
    AdjustmentQuery,
    CiQuery,
    Event,
    JointDistribution,
    ParamRangeError,
    alpha,
    conditional_prob,
    delta_ci,
    exact_adjustment,
    gallery_backdoor,
    gallery_hardness,
    gallery_random,
    gallery_weak_edge,
    gallery_xor,
    hardness_marginal_a1,
    marginal,
    probability,
    validate,
)

HARDNESS_PARAMS = [(0.04, 0.4), (0.01, 0.25), (0.09, 0.5)]


def test_hardness_headline_quantities():
    dist = gallery_hardness(0.04, 0.4)
    assert delta_ci(dist, CiQuery(("X",), ("B",), ("A",))) == pytest.approx(
        0.04, abs=1e-10)
    assert alpha(dist, Event(X=0), ("A",)) == pytest.approx(0.39, abs=1e-10)
    x, y = Event(X=0), Event(Y=1)
    t_a = exact_adjustment(dist, AdjustmentQuery(x, y, ("A",)))
    t_ab = exact_adjustment(dist, AdjustmentQuery(x, y, ("A", "B")))
    assert abs(t_a - t_ab) == pytest.approx(0.04 / (16 * 0.4), abs=1e-10)


def test_hardness_closed_forms():
    for eps, a in HARDNESS_PARAMS:
        dist = gallery_hardness(eps, a)
        r = math.sqrt(eps)
        m = (r / 2) / (1 - r / 2)
        a_prime = a + m * eps / 4
        # B nearly complements A
        for av in range(2):
            got = conditional_prob(dist, Event(B=av), Event(A=av))
            assert got == pytest.approx(r / 2, abs=1e-12)
        # marginalizing B out of the mixture leaves the two-point form
        assert conditional_prob(dist, Event(X=0), Event(A=0)) == pytest.approx(
            1 - a + eps / 4, abs=1e-12)
        assert conditional_prob(dist, Event(X=0), Event(A=1)) == pytest.approx(
            a - eps / 4, abs=1e-12)
        for av in range(2):
            for bv in range(2):
                want = ((1 - a_prime) * (av == 0)
                        + (a_prime - m) * (av == 1)
                        + m * (bv == 0))
                got = conditional_prob(dist, Event(X=0), Event(A=av, B=bv))
                assert got == pytest.approx(want, abs=1e-12)
        # headline identities hold exactly at every parameter point
        assert delta_ci(dist, CiQuery(("X",), ("B",), ("A",))) == pytest.approx(
            eps, abs=1e-10)
        assert alpha(dist, Event(X=0), ("A",)) == pytest.approx(
            a - eps / 4, abs=1e-10)
        t_a = exact_adjustment(dist, AdjustmentQuery(Event(X=0), Event(Y=1), ("A",)))
        t_ab = exact_adjustment(
            dist, AdjustmentQuery(Event(X=0), Event(Y=1), ("A", "B")))
        assert abs(t_a - t_ab) == pytest.approx(eps / (16 * a), abs=1e-10)


def test_hardness_marginal_closed_form():
    assert hardness_marginal_a1(0.04, 0.4) == pytest.approx(0.24375, abs=1e-15)
    for eps, a in HARDNESS_PARAMS:
        dist = gallery_hardness(eps, a)
        got = probability(dist, Event(A=1))
        assert got == pytest.approx(hardness_marginal_a1(eps, a), abs=1e-12)


def test_hardness_marginal_stays_in_range():
    # the construction must stay a distribution over the whole legal region
    rng = np.random.default_rng(17)
    for _ in range(10000):
        a = rng.uniform(1e-3, 0.5)
        eps = rng.uniform(0.0, a * a)
        if eps <= 0:
            continue
        p1 = hardness_marginal_a1(eps, a)
        assert 0.0 < p1 <= 0.25


def test_hardness_param_errors():
    with pytest.raises(ParamRangeError):
        gallery_hardness(0.0, 0.4)
    with pytest.raises(ParamRangeError):
        gallery_hardness(0.25, 0.4)  # sqrt(eps) = 0.5 > alpha
    with pytest.raises(ParamRangeError):
        gallery_hardness(0.04, 0.6)


def test_xor_pairwise_and_joint():
    for eps in (0.05, 0.1, 1 / 6, 0.2, 0.25, 0.3, 0.4, 0.5):
        dist = gallery_xor(eps)
        pair = min(eps, 0.5 - eps)
        assert delta_ci(dist, CiQuery(("X",), ("A",), ())) == pytest.approx(
            pair, abs=1e-10)
        assert delta_ci(dist, CiQuery(("X",), ("B",), ())) == pytest.approx(
            pair, abs=1e-10)
        assert delta_ci(dist, CiQuery(("X",), ("A", "B"), ())) == pytest.approx(
            0.5 - eps, abs=1e-10)


def test_xor_param_errors():
    for eps in (0.0, -0.1, 0.51):
        with pytest.raises(ParamRangeError):
            gallery_xor(eps)


def test_weak_edge_constant_adjusted_value():
    x, y = Event(X=0), Event(Y=1)
    for eps in (0.0, 0.01, 0.05, 0.3, 0.9):
        dist = gallery_weak_edge(eps)
        t_z = exact_adjustment(dist, AdjustmentQuery(x, y, ("Z",)))
        assert t_z == pytest.approx(0.5, abs=1e-12)
        naive = conditional_prob(dist, y, x)
        assert naive == pytest.approx((1 - eps) / 2, abs=1e-12)
        assert delta_ci(dist, CiQuery(("X",), ("Z",), ())) == pytest.approx(
            eps, abs=1e-12)


def test_weak_edge_deterministic_end_loses_positivity():
    from adjustkit import PositivityViolationError
    dist = gallery_weak_edge(1.0)
    with pytest.raises(PositivityViolationError):
        exact_adjustment(dist, AdjustmentQuery(Event(X=0), Event(Y=1), ("Z",)))


def test_weak_edge_param_errors():
    with pytest.raises(ParamRangeError):
        gallery_weak_edge(-0.01)
    with pytest.raises(ParamRangeError):
        gallery_weak_edge(1.01)


def test_backdoor_structure():
    for k, seed in ((1, 0), (2, 5), (3, 1)):
        dist = gallery_backdoor(k, seed=seed)
        parents = tuple(f"A{i}" for i in range(1, k + 1))
        names = tuple(v.name for v in dist.variables)
        assert names == ("B",) + parents + ("X", "Y")
        assert all(v.cardinality == 2 for v in dist.variables)
        # graph-implied independences are exact
        assert delta_ci(dist, CiQuery(("X",), ("B",), parents)) <= 1e-12
        assert delta_ci(dist, CiQuery(("Y",), parents, ("X", "B"))) <= 1e-12


def test_backdoor_faithfulness_margins():
    dist = gallery_backdoor(2, seed=3)
    pool = ("B", "A1", "A2")
    parents = {"A1", "A2"}
    for size in range(len(pool)):
        for s in itertools.combinations(pool, size):
            if parents <= set(s):
                continue
            rest = tuple(v for v in pool if v not in s)
            assert delta_ci(dist, CiQuery(("X",), rest, s)) >= 1e-4
    # the empty screening candidate must fail too
    assert delta_ci(dist, CiQuery(("Y",), ("A1", "A2"), ("X",))) >= 1e-4
    for xv in (0, 1):
        assert alpha(dist, Event(X=xv), pool) >= 0.01


def test_backdoor_param_errors():
    with pytest.raises(ParamRangeError):
        gallery_backdoor(0, seed=1)
    with pytest.raises(ParamRangeError):
        gallery_backdoor(9, seed=1)


def test_random_dist_properties():
    dist = gallery_random(4, 3, seed=5, positivity_floor=0.1)
    assert dist.table.sum() == pytest.approx(1.0, abs=1e-12)
    assert dist.table.min() >= 0.1 / dist.table.size - 1e-15
    again = gallery_random(4, 3, seed=5, positivity_floor=0.1)
    assert np.array_equal(dist.table, again.table)
    assert tuple(v.name for v in dist.variables) == ("V1", "V2", "V3", "V4")
    other = gallery_random(4, 3, seed=6, positivity_floor=0.1)
    if other.table.shape == dist.table.shape:
        assert np.max(np.abs(other.table - dist.table)) > 1e-6


def test_random_param_errors():
    with pytest.raises(ParamRangeError):
        gallery_random(0, 2, seed=1)
    with pytest.raises(ParamRangeError):
        gallery_random(7, 2, seed=1)
    with pytest.raises(ParamRangeError):
        gallery_random(3, 1, seed=1)
    with pytest.raises(ParamRangeError):
        gallery_random(3, 5, seed=1)
    with pytest.raises(ParamRangeError):
        gallery_random(3, 2, seed=1, positivity_floor=1.0)


def test_every_family_validates():
    dists = [
        gallery_hardness(0.04, 0.4),
        gallery_weak_edge(0.3),
        gallery_xor(0.2),
        gallery_backdoor(2, seed=0),
        gallery_random(4, 3, seed=5, positivity_floor=0.1),
    ]
    for dist in dists:
        validate(dist)  # raises on any axiom violation


def test_marginal_of_backdoor_is_normalized():
    dist = gallery_backdoor(3, seed=2)
    sub = marginal(dist, ("X", "Y"))
    assert sub.table.sum() == pytest.approx(1.0, abs=1e-12)
    assert tuple(v.name for v in sub.variables) == ("X", "Y")
