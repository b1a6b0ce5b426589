"""Adjustment functionals and their estimation.

The target quantity for a query (x, y, A) is

    T_A = sum_a P(y | a, x) * P(a)

over the alphabet of the adjustment set A. exact_adjustment evaluates it on
a known distribution; plugin_adjustment replaces every probability by its
empirical count ratio with the 0/0 := 0 convention. alpha is the positivity
margin min_a P(x | a), which controls how hard the query is to estimate.

Sample-size and error-bound formulas here use explicit constants so that
they can be evaluated and compared, not just quoted asymptotically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .dist import (
    Event,
    JointDistribution,
    SampleDataset,
    joint_codes,
    marginal,
    probability,
    sample,
)
from .errors import (
    EmptyDatasetError,
    OutOfRangeError,
    PositivityViolationError,
    UnknownVariableError,
)

DEFAULT_C0 = 2.0
DEFAULT_EXPECTATION_C = 2


@dataclass(frozen=True)
class AdjustmentQuery:
    """Adjust for the named set while moving x and measuring y.

    x and y are events (partial assignments); adjust is a set of variable
    names disjoint from both.
    """

    x: Event
    y: Event
    adjust: tuple[str, ...]

    def __init__(self, x: Event, y: Event, adjust: Sequence[str] = ()):
        adjust = tuple(adjust)
        if len(set(adjust)) != len(adjust):
            raise OutOfRangeError(f"duplicate names in adjustment set {adjust}")
        taken = set(x.names) | set(y.names)
        if set(x.names) & set(y.names):
            raise OutOfRangeError("x and y events overlap")
        if set(adjust) & taken:
            raise OutOfRangeError("adjustment set overlaps x or y")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "adjust", adjust)


@dataclass(frozen=True)
class EstimateReport:
    """Plug-in estimate plus the bookkeeping needed to judge it."""

    value: float
    n_effective: int
    zero_cells: int
    mode: str


def _canonical_adjust(dist_vars, adjust: Sequence[str]) -> tuple[str, ...]:
    names = [v.name for v in dist_vars]
    known = set(names)
    for a in adjust:
        if a not in known:
            raise UnknownVariableError(f"unknown variable {a!r}")
    order = {n: i for i, n in enumerate(names)}
    return tuple(sorted(set(adjust), key=order.get))


def _fix_event(m: JointDistribution, event: Event) -> np.ndarray:
    """Index the shaped marginal at event's bindings, keep remaining axes."""
    for v in m.variables:
        if v.name in event and not 0 <= event[v.name] < v.cardinality:
            raise OutOfRangeError(
                f"index {event[v.name]} out of range for {v.name!r} "
                f"(cardinality {v.cardinality})"
            )
    shaped = m.table.reshape(m.cardinalities)
    indexer = tuple(
        event[v.name] if v.name in event else slice(None) for v in m.variables
    )
    return np.asarray(shaped[indexer])


def exact_adjustment(dist: JointDistribution, q: AdjustmentQuery) -> float:
    """Evaluate T_A exactly.

    Cells with P(a) = 0 contribute nothing. Cells with P(a) > 0 but
    P(x | a) = 0 are a positivity violation and raise rather than being
    silently dropped.
    """
    adjust = _canonical_adjust(dist.variables, q.adjust)
    x_names, y_names = q.x.names, q.y.names
    for n in x_names + y_names:
        dist.index_of(n)

    p_a = marginal(dist, adjust).table
    m_ax = marginal(dist, adjust + x_names)
    p_ax = _fix_event(m_ax, q.x).reshape(-1)
    m_axy = marginal(dist, adjust + x_names + y_names)
    merged = Event(dict(list(q.x.items()) + list(q.y.items())))
    p_axy = _fix_event(m_axy, merged).reshape(-1)

    bad = (p_a > 0) & (p_ax == 0)
    if bad.any():
        raise PositivityViolationError(
            f"{int(bad.sum())} adjustment cell(s) have P(a) > 0 but P(x|a) = 0"
        )
    live = p_ax > 0
    terms = np.zeros_like(p_a)
    terms[live] = p_a[live] * (p_axy[live] / p_ax[live])
    return float(terms.sum())


def alpha(dist: JointDistribution, x: Event, adjust: Sequence[str]) -> float:
    """Positivity margin min over {a : P(a) > 0} of P(x | a).

    The empty adjustment set gives P(x) itself.
    """
    adjust = _canonical_adjust(dist.variables, adjust)
    if not adjust:
        return probability(dist, x)
    p_a = marginal(dist, adjust).table
    m_ax = marginal(dist, adjust + x.names)
    p_ax = _fix_event(m_ax, x).reshape(-1)
    live = p_a > 0
    return float(np.min(p_ax[live] / p_a[live]))


def plugin_adjustment(data: SampleDataset, q: AdjustmentQuery) -> EstimateReport:
    """Plug-in estimate sum_a (N_a / N) * (N_{y,x,a} / N_{x,a}).

    Ratios with N_{x,a} = 0 are taken as 0; zero_cells counts how many
    observed adjustment cells were dropped that way.
    """
    n = len(data)
    if n == 0:
        raise EmptyDatasetError("plug-in estimate needs at least one row")
    adjust = _canonical_adjust(data.variables, q.adjust)
    codes, n_cells = joint_codes(data, adjust)

    x_mask = np.ones(n, dtype=bool)
    for name, idx in q.x.items():
        x_mask &= data.column(name) == idx
    xy_mask = x_mask.copy()
    for name, idx in q.y.items():
        xy_mask &= data.column(name) == idx

    n_a = np.bincount(codes, minlength=n_cells)
    n_xa = np.bincount(codes[x_mask], minlength=n_cells)
    n_xya = np.bincount(codes[xy_mask], minlength=n_cells)

    live = n_xa > 0
    value = float((n_a[live] / n) @ (n_xya[live] / n_xa[live]))
    zero_cells = int(((n_a > 0) & (n_xa == 0)).sum())
    return EstimateReport(
        value=value,
        n_effective=n,
        zero_cells=zero_cells,
        mode=data.provenance,
    )


def poissonized_sample(dist: JointDistribution, n: int, seed: int) -> SampleDataset:
    """Draw Pois(n) rows i.i.d. from dist.

    Poissonization makes the resulting cell counts mutually independent,
    N_cell ~ Pois(n * p_cell), which is what the estimation analysis uses.
    """
    return sample(dist, n, seed, poissonized=True)


def sample_size_estimation(
    eps: float,
    delta: float,
    sigma_a: int,
    alpha_a: float,
    c0: float = DEFAULT_C0,
) -> int:
    """Samples sufficient for |T_hat - T| <= eps with probability 1 - delta.

    n = ceil( 36 s / (eps a) * ln(3 s / delta)
            + 9 / (2 eps^2 a) * ln(6 / delta)
            + c0 * (s + ln(1/delta)) / (eps/3)^2 )

    with s the adjustment-alphabet size and a the positivity margin.
    """
    if not 0 < eps < 1:
        raise OutOfRangeError(f"eps must be in (0, 1), got {eps}")
    if not 0 < delta < 1:
        raise OutOfRangeError(f"delta must be in (0, 1), got {delta}")
    if sigma_a < 1:
        raise OutOfRangeError(f"alphabet size must be >= 1, got {sigma_a}")
    if not 0 < alpha_a <= 1:
        raise OutOfRangeError(f"alpha must be in (0, 1], got {alpha_a}")
    if c0 <= 0:
        raise OutOfRangeError(f"c0 must be positive, got {c0}")
    term_cells = 36.0 * sigma_a / (eps * alpha_a) * math.log(3.0 * sigma_a / delta)
    term_x = 9.0 / (2.0 * eps * eps * alpha_a) * math.log(6.0 / delta)
    term_tv = c0 * (sigma_a + math.log(1.0 / delta)) / (eps / 3.0) ** 2
    return math.ceil(term_cells + term_x + term_tv)


def sample_size_expectation(
    lam: float,
    sigma_z: int,
    alpha_z: float,
    c: int = DEFAULT_EXPECTATION_C,
) -> int:
    """Samples sufficient for |E[T_hat] - T| <= lam (expectation bias bound).

    n = ceil(sigma_z / (lam * alpha_z) + 1 / (lam^2 * alpha_z)) * c
    """
    if not 0 < lam < 1:
        raise OutOfRangeError(f"lambda must be in (0, 1), got {lam}")
    if sigma_z < 1:
        raise OutOfRangeError(f"alphabet size must be >= 1, got {sigma_z}")
    if not 0 < alpha_z <= 1:
        raise OutOfRangeError(f"alpha must be in (0, 1], got {alpha_z}")
    if c < 1:
        raise OutOfRangeError(f"c must be >= 1, got {c}")
    return math.ceil(sigma_z / (lam * alpha_z) + 1.0 / (lam * lam * alpha_z)) * c


def error_bound(
    n: int,
    sigma: int,
    alpha_s: float,
    mode: str = "direct",
    k: Optional[int] = None,
    sigma_x: Optional[int] = None,
    sigma_y: Optional[int] = None,
) -> float:
    """High-probability error radius at sample size n (constants set to 1).

    direct:  sigma/(n*alpha) + 1/sqrt(n*alpha) + sqrt(sigma/n)
    amba:    (1/alpha) * sqrt(k/n) * (sigma_x * sigma)^(1/4)
    bamba:   (1/alpha) * sqrt(k/n) * (sigma_x * sigma_y * sigma)^(1/4)

    where k is the size of the discovered subset and sigma the alphabet size
    of the set actually adjusted for.
    """
    if n < 1:
        raise OutOfRangeError(f"n must be >= 1, got {n}")
    if sigma < 1:
        raise OutOfRangeError(f"alphabet size must be >= 1, got {sigma}")
    if not 0 < alpha_s <= 1:
        raise OutOfRangeError(f"alpha must be in (0, 1], got {alpha_s}")
    if mode == "direct":
        return (
            sigma / (n * alpha_s)
            + 1.0 / math.sqrt(n * alpha_s)
            + math.sqrt(sigma / n)
        )
    if mode == "amba":
        if k is None or sigma_x is None:
            raise OutOfRangeError("amba bound needs k and sigma_x")
        if k < 0 or sigma_x < 1:
            raise OutOfRangeError(f"bad k={k} or sigma_x={sigma_x}")
        return math.sqrt(k / n) * (sigma_x * sigma) ** 0.25 / alpha_s
    if mode == "bamba":
        if k is None or sigma_x is None or sigma_y is None:
            raise OutOfRangeError("bamba bound needs k, sigma_x and sigma_y")
        if k < 0 or sigma_x < 1 or sigma_y < 1:
            raise OutOfRangeError(f"bad k={k}, sigma_x={sigma_x} or sigma_y={sigma_y}")
        return math.sqrt(k / n) * (sigma_x * sigma_y * sigma) ** 0.25 / alpha_s
    raise OutOfRangeError(f"unknown bound mode {mode!r}")
