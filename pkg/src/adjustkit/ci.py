"""Approximate conditional independence.

The distance between "A independent of B given C" and reality is measured by

    delta(A, B | C) = sum_c P(c) * sum_{a,b} |P(a,b|c) - P(a|c) P(b|c)|

which lies in [0, 2]; cells with P(c) = 0 contribute nothing. delta_ci_alt
computes the algebraically equal reweighting

    sum_{a,c} P(a,c) * sum_b |P(b|a,c) - P(b|c)|

kept separate so the two forms can be checked against each other.

Testing from samples is a plug-in scheme: learn the empirical joint over
A+B+C, answer YES iff the empirical delta is at most eps/2. With the sample
budget from ci_sample_budget the empirical joint is within total variation
eps/4 of the truth with probability 1 - delta, which makes the answer sound
on both sides of the (0, eps] gap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence, Union

import numpy as np

from .dist import (
    JointDistribution,
    SampleDataset,
    VariableSpec,
    empirical_distribution,
    marginal,
)
from .errors import (
    EmptyDatasetError,
    InsufficientSamplesError,
    OutOfRangeError,
    ParamRangeError,
    UnknownVariableError,
)

YES = "YES"
NO = "NO"

DEFAULT_C0 = 2.0


@dataclass(frozen=True)
class CiQuery:
    """Ordered triple of disjoint variable-name groups (A, B, C)."""

    a: tuple[str, ...]
    b: tuple[str, ...]
    c: tuple[str, ...] = ()

    def __init__(self, a: Sequence[str], b: Sequence[str], c: Sequence[str] = ()):
        a, b, c = tuple(a), tuple(b), tuple(c)
        groups = a + b + c
        if len(set(groups)) != len(groups):
            raise OutOfRangeError(f"CI groups must be disjoint, got A={a} B={b} C={c}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)

    @property
    def all_names(self) -> tuple[str, ...]:
        return self.a + self.b + self.c


def _grouped_table(dist: JointDistribution, q: CiQuery) -> tuple[np.ndarray, ...]:
    """Joint over A+B+C reshaped to (|Sigma_A|, |Sigma_B|, |Sigma_C|)."""
    m = marginal(dist, q.all_names)
    order = {v.name: i for i, v in enumerate(m.variables)}
    for name in q.all_names:
        if name not in order:
            raise UnknownVariableError(f"unknown variable {name!r}")
    shaped = m.table.reshape(m.cardinalities)
    perm = [order[n] for n in q.a] + [order[n] for n in q.b] + [order[n] for n in q.c]
    t = shaped.transpose(perm)
    card = {v.name: v.cardinality for v in m.variables}
    ka = int(np.prod([card[n] for n in q.a], dtype=np.int64)) if q.a else 1
    kb = int(np.prod([card[n] for n in q.b], dtype=np.int64)) if q.b else 1
    kc = int(np.prod([card[n] for n in q.c], dtype=np.int64)) if q.c else 1
    return t.reshape(ka, kb, kc)


def delta_ci(dist: JointDistribution, q: CiQuery) -> float:
    """Approximate-independence distance, joint-deviation form."""
    t = _grouped_table(dist, q)
    p_c = t.sum(axis=(0, 1))
    p_ac = t.sum(axis=1)
    p_bc = t.sum(axis=0)
    live = p_c > 0
    if not live.any():
        return 0.0
    expected = (
        p_ac[:, None, live] * p_bc[None, :, live] / p_c[None, None, live]
    )
    return float(np.abs(t[:, :, live] - expected).sum())


def delta_ci_alt(dist: JointDistribution, q: CiQuery) -> float:
    """Same distance via conditionals, sum_{a,c} P(a,c) |P(b|a,c) - P(b|c)|."""
    t = _grouped_table(dist, q)
    p_c = t.sum(axis=(0, 1))
    p_ac = t.sum(axis=1)
    p_bc = t.sum(axis=0)
    total = 0.0
    live_c = np.nonzero(p_c > 0)[0]
    for ci in live_c:
        cond_b = p_bc[:, ci] / p_c[ci]
        live_a = np.nonzero(p_ac[:, ci] > 0)[0]
        if live_a.size == 0:
            continue
        cond_b_given_a = t[live_a, :, ci] / p_ac[live_a, ci][:, None]
        dev = np.abs(cond_b_given_a - cond_b[None, :]).sum(axis=1)
        total += float((p_ac[live_a, ci] * dev).sum())
    return total


def delta_ci_empirical(data: SampleDataset, q: CiQuery) -> float:
    """delta_ci of the empirical joint restricted to A+B+C."""
    if len(data) == 0:
        raise EmptyDatasetError("empirical CI distance needs at least one row")
    emp = empirical_distribution(data, q.all_names)
    return delta_ci(emp, q)


def query_alphabet_size(
    source: Union[JointDistribution, SampleDataset, Sequence[VariableSpec]],
    q: CiQuery,
) -> int:
    """|Sigma_{A+B+C}| looked up from a distribution, dataset or spec list."""
    variables = getattr(source, "variables", source)
    card = {v.name: v.cardinality for v in variables}
    size = 1
    for name in q.all_names:
        if name not in card:
            raise UnknownVariableError(f"unknown variable {name!r}")
        size *= card[name]
    return size


def ci_sample_budget(
    source: Union[JointDistribution, SampleDataset, Sequence[VariableSpec]],
    q: CiQuery,
    eps: float,
    delta: float,
    c0: float = DEFAULT_C0,
) -> int:
    """Rows needed to learn the A+B+C joint to TV radius eps/4.

    budget = ceil(c0 * (|Sigma| + ln(1/delta)) / (eps/4)^2)
    """
    if not 0 < eps <= 2:
        raise OutOfRangeError(f"eps must be in (0, 2], got {eps}")
    if not 0 < delta < 1:
        raise OutOfRangeError(f"delta must be in (0, 1), got {delta}")
    if c0 <= 0:
        raise OutOfRangeError(f"c0 must be positive, got {c0}")
    sigma = query_alphabet_size(source, q)
    return math.ceil(c0 * (sigma + math.log(1.0 / delta)) / (eps / 4.0) ** 2)


@dataclass(frozen=True)
class CiTester:
    """YES/NO tester configuration.

    mode "exact" answers from the stored distribution (YES iff delta <= eps,
    deterministic). mode "empirical" answers from a dataset: it first checks
    the dataset holds at least the sample budget rows, then answers YES iff
    the empirical delta is at most eps/2.
    """

    mode: str
    eps: float
    delta: float
    c0: float = DEFAULT_C0
    dist: Optional[JointDistribution] = None

    def __post_init__(self):
        if self.mode not in ("exact", "empirical"):
            raise ParamRangeError(f"unknown tester mode {self.mode!r}")
        if self.mode == "exact" and self.dist is None:
            raise ParamRangeError("exact tester needs a distribution")

    @staticmethod
    def exact_oracle(dist: JointDistribution, eps: float, delta: float = 0.05) -> "CiTester":
        return CiTester(mode="exact", eps=eps, delta=delta, dist=dist)

    @staticmethod
    def empirical(eps: float, delta: float, c0: float = DEFAULT_C0) -> "CiTester":
        return CiTester(mode="empirical", eps=eps, delta=delta, c0=c0)

    def with_budget(self, eps: float, delta: float) -> "CiTester":
        return replace(self, eps=eps, delta=delta)


def ci_test(
    tester: CiTester,
    target: Union[JointDistribution, SampleDataset, None],
    q: CiQuery,
) -> str:
    """Run one YES/NO independence test. Returns "YES" or "NO"."""
    if tester.eps <= 0:
        raise ParamRangeError(f"eps must be positive, got {tester.eps}")
    if tester.mode == "exact":
        dist = tester.dist if tester.dist is not None else target
        if not isinstance(dist, JointDistribution):
            raise ParamRangeError("exact tester needs a JointDistribution")
        return YES if delta_ci(dist, q) <= tester.eps else NO
    if not isinstance(target, SampleDataset):
        raise ParamRangeError("empirical tester needs a SampleDataset")
    required = ci_sample_budget(target, q, tester.eps, tester.delta, tester.c0)
    if len(target) < required:
        raise InsufficientSamplesError(
            f"empirical CI test at eps={tester.eps}, delta={tester.delta} "
            f"needs {required} rows, dataset has {len(target)}",
            required=required,
            available=len(target),
        )
    return YES if delta_ci_empirical(target, q) <= tester.eps / 2.0 else NO
