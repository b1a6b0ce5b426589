"""Subset discovery: approximate blankets, screening sets, and the
decide-then-estimate pipeline.

Both searches sweep candidate subsets level by level (size 0 upward) and
stop at the first level with a passing candidate. Within a level every
candidate is tested and the lexicographically smallest passer (by variable
declaration order) wins, so results do not depend on evaluation order or
thread count. The per-test failure budget at level k is delta * w_k with

    w_k = 1 / (|A| * binomial(|A|, k))

which union-bounds the whole sweep by roughly delta. The same dataset is
reused across every test; samples_required reports the largest single-test
budget the executed levels needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from itertools import combinations
from typing import Optional, Sequence, Union

import numpy as np

from ._parallel import ordered_map
from .ci import CiQuery, CiTester, YES, ci_sample_budget, ci_test, delta_ci
from .dist import Event, JointDistribution, SampleDataset, joint_codes
from .errors import (
    CandidateSetTooLargeError,
    EmptyDatasetError,
    InsufficientSamplesError,
    OutOfRangeError,
    UnknownVariableError,
)
from .estimators import AdjustmentQuery, EstimateReport, alpha, plugin_adjustment

MAX_CANDIDATES = 25
MAX_BRUTE_FORCE = 15

USE_SUBSET = "use-subset"
USE_Z = "use-Z"

Target = Union[JointDistribution, SampleDataset]


@dataclass(frozen=True)
class DecisionInputs:
    """Everything the subset-vs-full decision rule looks at."""

    n: int
    sigma_x: int
    sigma_z: int
    k: int
    alpha_s: float


@dataclass(frozen=True)
class DecisionTrace:
    inputs: DecisionInputs
    branch: str
    amba_chosen: tuple[str, ...]
    bamba_chosen: Optional[tuple[str, ...]] = None


@dataclass(frozen=True)
class SearchReport:
    """Outcome of one level-wise search."""

    chosen: tuple[str, ...]
    level_reached: int
    tests_run: int
    tests_per_level: tuple[int, ...]
    samples_required: int
    fallback_used: bool
    decision_trace: Optional[DecisionTrace] = None


@dataclass(frozen=True)
class AutoEstimateResult:
    report: EstimateReport
    search: SearchReport
    s_star: tuple[str, ...]


def _ordered_names(variables, names: Sequence[str]) -> tuple[str, ...]:
    order = {v.name: i for i, v in enumerate(variables)}
    for n in names:
        if n not in order:
            raise UnknownVariableError(f"unknown variable {n!r}")
    return tuple(sorted(set(names), key=order.get))


def _alphabet(variables, names: Sequence[str]) -> int:
    card = {v.name: v.cardinality for v in variables}
    size = 1
    for n in names:
        size *= card[n]
    return size


def _level_weight(m: int, k: int) -> float:
    return 1.0 / (m * math.comb(m, k))


def amba(
    tester: CiTester,
    target: Target,
    x: Sequence[str],
    candidates: Sequence[str],
    eps: float,
    delta: float,
) -> SearchReport:
    """Find an approximate blanket of x inside the candidate set.

    Sweeps subsets S of the candidates by size; S passes when the test for
    "x independent of candidates minus S given S" answers YES at failure
    budget delta * w_k. Falls back to the full candidate set if nothing
    passes (with an exact tester the full set always passes its own level,
    since the separated group is then empty).
    """
    variables = target.variables
    x = _ordered_names(variables, x)
    cands = _ordered_names(variables, candidates)
    if set(x) & set(cands):
        raise OutOfRangeError("x variables cannot appear among the candidates")
    m = len(cands)
    if m > MAX_CANDIDATES:
        raise CandidateSetTooLargeError(
            f"{m} candidates exceeds the cap of {MAX_CANDIDATES}"
        )
    if m == 0:
        return SearchReport(
            chosen=(),
            level_reached=0,
            tests_run=0,
            tests_per_level=(0,),
            samples_required=0,
            fallback_used=False,
        )

    empirical = tester.mode == "empirical"
    level_budgets = []
    if empirical:
        # Alphabet |Sigma_x| * |Sigma_A| is the same for every candidate at
        # every level, so each level has one budget.
        q_any = CiQuery(x, cands, ())
        for k in range(m + 1):
            level_budgets.append(
                ci_sample_budget(target, q_any, eps, delta * _level_weight(m, k), tester.c0)
            )

    tests_run = 0
    tests_per_level: list[int] = []
    samples_required = 0
    for k in range(m + 1):
        level_tester = tester.with_budget(eps, delta * _level_weight(m, k))
        if empirical:
            if len(target) < level_budgets[k]:
                raise InsufficientSamplesError(
                    f"level {k} of the blanket search needs {level_budgets[k]} rows, "
                    f"dataset has {len(target)} (worst level needs {max(level_budgets)})",
                    required=max(level_budgets),
                    available=len(target),
                )
            samples_required = max(samples_required, level_budgets[k])
        subsets = list(combinations(cands, k))

        def run_one(s: tuple[str, ...]) -> str:
            rest = tuple(c for c in cands if c not in s)
            return ci_test(level_tester, target, CiQuery(x, rest, s))

        verdicts = ordered_map(run_one, subsets)
        tests_run += len(subsets)
        tests_per_level.append(len(subsets))
        for s, verdict in zip(subsets, verdicts):
            if verdict == YES:
                return SearchReport(
                    chosen=s,
                    level_reached=k,
                    tests_run=tests_run,
                    tests_per_level=tuple(tests_per_level),
                    samples_required=samples_required,
                    fallback_used=False,
                )
    return SearchReport(
        chosen=cands,
        level_reached=m,
        tests_run=tests_run,
        tests_per_level=tuple(tests_per_level),
        samples_required=samples_required,
        fallback_used=True,
    )


def bamba(
    tester: CiTester,
    target: Target,
    x: Sequence[str],
    y: Sequence[str],
    candidates: Sequence[str],
    blanket: Sequence[str],
    eps: float,
    delta: float,
) -> SearchReport:
    """Shrink a blanket S to a screening set with a smaller alphabet.

    Candidates are subsets S' of the candidate pool whose alphabet is no
    larger than S's. S' passes when both tests answer YES at failure budget
    delta * w_k / 2 each:

        y independent of S minus S'  given x union S'
        x independent of S' minus S  given S

    S itself is always a candidate at level |S| and passes trivially (both
    separated groups are empty), so the search cannot run past that level;
    the fallback return of S is kept for contract completeness.
    """
    variables = target.variables
    x = _ordered_names(variables, x)
    y = _ordered_names(variables, y)
    cands = _ordered_names(variables, candidates)
    s_set = _ordered_names(variables, blanket)
    if not set(s_set) <= set(cands):
        raise OutOfRangeError("blanket must be a subset of the candidate pool")
    if (set(x) | set(y)) & set(cands):
        raise OutOfRangeError("x and y variables cannot appear among the candidates")
    if set(x) & set(y):
        raise OutOfRangeError("x and y overlap")
    m = len(cands)
    if m > MAX_CANDIDATES:
        raise CandidateSetTooLargeError(
            f"{m} candidates exceeds the cap of {MAX_CANDIDATES}"
        )
    sigma_s = _alphabet(variables, s_set)

    empirical = tester.mode == "empirical"
    tests_run = 0
    tests_per_level: list[int] = []
    samples_required = 0
    # m == 0 forces the single empty candidate, which passes trivially.
    for k in range(m + 1):
        weight = delta * _level_weight(max(m, 1), k) / 2.0
        level_tester = tester.with_budget(eps, weight)
        subsets = [
            s for s in combinations(cands, k) if _alphabet(variables, s) <= sigma_s
        ]
        pairs = []
        for s_prime in subsets:
            q1 = CiQuery(
                y,
                tuple(v for v in s_set if v not in s_prime),
                _ordered_names(variables, x + s_prime),
            )
            q2 = CiQuery(x, tuple(v for v in s_prime if v not in s_set), s_set)
            pairs.append((s_prime, q1, q2))

        if empirical and pairs:
            budgets = [
                max(
                    ci_sample_budget(target, q1, eps, weight, tester.c0),
                    ci_sample_budget(target, q2, eps, weight, tester.c0),
                )
                for _, q1, q2 in pairs
            ]
            worst = max(budgets)
            if len(target) < worst:
                raise InsufficientSamplesError(
                    f"level {k} of the screening search needs {worst} rows, "
                    f"dataset has {len(target)}",
                    required=worst,
                    available=len(target),
                )
            samples_required = max(samples_required, worst)

        def run_pair(item) -> bool:
            _, q1, q2 = item
            # Run both tests unconditionally so tests_run counts invocations.
            r1 = ci_test(level_tester, target, q1)
            r2 = ci_test(level_tester, target, q2)
            return r1 == YES and r2 == YES

        passed = ordered_map(run_pair, pairs)
        tests_run += 2 * len(pairs)
        tests_per_level.append(2 * len(pairs))
        for (s_prime, _, _), ok in zip(pairs, passed):
            if ok:
                return SearchReport(
                    chosen=s_prime,
                    level_reached=k,
                    tests_run=tests_run,
                    tests_per_level=tuple(tests_per_level),
                    samples_required=samples_required,
                    fallback_used=False,
                )
    return SearchReport(
        chosen=s_set,
        level_reached=len(s_set),
        tests_run=tests_run,
        tests_per_level=tuple(tests_per_level),
        samples_required=samples_required,
        fallback_used=True,
    )


def amba_decision(inputs: DecisionInputs) -> str:
    """Use the discovered subset, or keep the full adjustment set?

    use-subset iff k * sqrt(sigma_x / sigma_z) is below
    max(sigma_z / n, alpha_s / sigma_z, alpha_s^2). k = 0 always wins.
    """
    if inputs.n < 1 or inputs.sigma_x < 1 or inputs.sigma_z < 1 or inputs.k < 0:
        raise OutOfRangeError(f"bad decision inputs {inputs}")
    if not 0 <= inputs.alpha_s <= 1:
        raise OutOfRangeError(f"alpha_s must be in [0, 1], got {inputs.alpha_s}")
    lhs = inputs.k * math.sqrt(inputs.sigma_x / inputs.sigma_z)
    rhs = max(
        inputs.sigma_z / inputs.n,
        inputs.alpha_s / inputs.sigma_z,
        inputs.alpha_s**2,
    )
    return USE_SUBSET if lhs < rhs else USE_Z


def empirical_alpha(data: SampleDataset, x: Event, subset: Sequence[str]) -> float:
    """min over observed cells of N_{x,s} / N_s, floored at 1/(N + |Sigma_S|).

    The floor keeps the decision rule off a literal zero when some observed
    cell never saw x.
    """
    n = len(data)
    if n == 0:
        raise EmptyDatasetError("empirical alpha needs at least one row")
    subset = _ordered_names(data.variables, subset)
    codes, n_cells = joint_codes(data, subset)
    x_mask = np.ones(n, dtype=bool)
    for name, idx in x.items():
        x_mask &= data.column(name) == idx
    n_s = np.bincount(codes, minlength=n_cells)
    n_xs = np.bincount(codes[x_mask], minlength=n_cells)
    live = n_s > 0
    floor = 1.0 / (n + n_cells)
    value = float(np.min(n_xs[live] / n_s[live])) if live.any() else 0.0
    return max(value, floor)


def auto_estimate(
    data: SampleDataset,
    q: AdjustmentQuery,
    eps: float,
    delta: float,
    oracle: Optional[JointDistribution] = None,
) -> AutoEstimateResult:
    """Discover, decide, estimate.

    Runs the blanket search over q.adjust, applies the decision rule, and
    either shrinks further to a screening set (use-subset) or keeps the full
    adjustment set (use-Z). The final estimate is always the plug-in value
    on `data`. With an oracle distribution the searches and alpha are exact;
    without one everything is empirical, including the smoothed alpha.
    """
    if len(data) == 0:
        raise EmptyDatasetError("auto estimation needs data")
    x_vars = _ordered_names(data.variables, q.x.names)
    y_vars = _ordered_names(data.variables, q.y.names)
    z = _ordered_names(data.variables, q.adjust)

    if oracle is not None:
        tester = CiTester.exact_oracle(oracle, eps=eps, delta=delta)
        target: Target = oracle
    else:
        tester = CiTester.empirical(eps=eps, delta=delta)
        target = data

    amba_report = amba(tester, target, x_vars, z, eps, delta)
    s = amba_report.chosen

    if oracle is not None:
        alpha_s = alpha(oracle, q.x, s)
    else:
        alpha_s = empirical_alpha(data, q.x, s)
    inputs = DecisionInputs(
        n=len(data),
        sigma_x=_alphabet(data.variables, x_vars),
        sigma_z=_alphabet(data.variables, z),
        k=len(s),
        alpha_s=alpha_s,
    )
    branch = amba_decision(inputs)

    if branch == USE_SUBSET:
        bamba_report = bamba(tester, target, x_vars, y_vars, z, s, eps, delta)
        s_star = bamba_report.chosen
        trace = DecisionTrace(inputs, branch, amba_chosen=s, bamba_chosen=s_star)
        search_report = replace(bamba_report, decision_trace=trace)
    else:
        s_star = z
        trace = DecisionTrace(inputs, branch, amba_chosen=s)
        search_report = replace(amba_report, decision_trace=trace)

    estimate = plugin_adjustment(data, AdjustmentQuery(q.x, q.y, s_star))
    return AutoEstimateResult(report=estimate, search=search_report, s_star=s_star)


def brute_force_min_blanket(
    dist: JointDistribution,
    x: Sequence[str],
    candidates: Sequence[str],
    tol: float = 1e-12,
) -> tuple[str, ...]:
    """Smallest S (size, then lexicographic) with delta(x, A\\S | S) <= tol."""
    x = _ordered_names(dist.variables, x)
    cands = _ordered_names(dist.variables, candidates)
    if len(cands) > MAX_BRUTE_FORCE:
        raise CandidateSetTooLargeError(
            f"{len(cands)} candidates exceeds the brute-force cap of {MAX_BRUTE_FORCE}"
        )
    for k in range(len(cands) + 1):
        for s in combinations(cands, k):
            rest = tuple(c for c in cands if c not in s)
            if delta_ci(dist, CiQuery(x, rest, s)) <= tol:
                return s
    return cands


def brute_force_min_screening(
    dist: JointDistribution,
    x: Sequence[str],
    y: Sequence[str],
    candidates: Sequence[str],
    blanket: Sequence[str],
    tol: float = 1e-12,
) -> tuple[str, ...]:
    """Smallest screening set for the blanket, same order as the search."""
    x = _ordered_names(dist.variables, x)
    y = _ordered_names(dist.variables, y)
    cands = _ordered_names(dist.variables, candidates)
    s_set = _ordered_names(dist.variables, blanket)
    if len(cands) > MAX_BRUTE_FORCE:
        raise CandidateSetTooLargeError(
            f"{len(cands)} candidates exceeds the brute-force cap of {MAX_BRUTE_FORCE}"
        )
    sigma_s = _alphabet(dist.variables, s_set)
    for k in range(len(cands) + 1):
        for s_prime in combinations(cands, k):
            if _alphabet(dist.variables, s_prime) > sigma_s:
                continue
            d1 = delta_ci(
                dist,
                CiQuery(
                    y,
                    tuple(v for v in s_set if v not in s_prime),
                    _ordered_names(dist.variables, x + s_prime),
                ),
            )
            d2 = delta_ci(dist, CiQuery(x, tuple(v for v in s_prime if v not in s_set), s_set))
            if d1 <= tol and d2 <= tol:
                return s_prime
    return s_set
