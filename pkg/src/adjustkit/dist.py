"""Dense joint distributions over named discrete variables.

A JointDistribution stores the full probability table as a flat float64
array in row-major order: the last declared variable varies fastest, so
`table.reshape(cardinalities)` gives the natural multi-dimensional view.
Everything downstream (marginals, conditionals, adjustment, CI distances)
works off this one representation.

Scale is capped deliberately (25 variables, 2**26 cells): the point is exact
desk-scale computation, not approximate inference on large models.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .errors import (
    EmptyDatasetError,
    NegativeMassError,
    NotNormalizedError,
    OutOfRangeError,
    ShapeMismatchError,
    UnknownVariableError,
    ZeroConditionError,
)

MAX_VARIABLES = 25
MAX_CELLS = 2**26
NORMALIZATION_TOL = 1e-12


@dataclass(frozen=True)
class VariableSpec:
    """A named categorical variable with values {0, ..., cardinality-1}."""

    name: str
    cardinality: int


@dataclass(frozen=True)
class Event:
    """Partial assignment of variables to category indices."""

    bindings: Mapping[str, int]

    def __init__(self, bindings: Mapping[str, int] | None = None, **kw: int):
        merged = dict(bindings or {})
        merged.update(kw)
        object.__setattr__(self, "bindings", merged)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(self.bindings)

    def __getitem__(self, name: str) -> int:
        return self.bindings[name]

    def __contains__(self, name: str) -> bool:
        return name in self.bindings

    def items(self):
        return self.bindings.items()

    def __repr__(self) -> str:
        inner = ", ".join(f"{k}={v}" for k, v in self.bindings.items())
        return f"Event({inner})"


@dataclass(frozen=True)
class JointDistribution:
    """Joint distribution as (variables, flat row-major table).

    The constructor only coerces types; call validate() to check the
    probability axioms. Invalid instances are representable on purpose so
    that files can be parsed first and judged second.
    """

    variables: tuple[VariableSpec, ...]
    table: np.ndarray

    def __init__(self, variables: Sequence[VariableSpec], table):
        object.__setattr__(self, "variables", tuple(variables))
        arr = np.asarray(table, dtype=np.float64).reshape(-1)
        object.__setattr__(self, "table", arr)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    @property
    def cardinalities(self) -> tuple[int, ...]:
        return tuple(v.cardinality for v in self.variables)

    @property
    def n_cells(self) -> int:
        return int(np.prod(self.cardinalities, dtype=np.int64)) if self.variables else 1

    def shaped(self) -> np.ndarray:
        """Multi-dimensional view; raises SHAPE_MISMATCH if sizes disagree."""
        if self.table.size != self.n_cells:
            raise ShapeMismatchError(
                f"table has {self.table.size} entries, variables imply {self.n_cells}"
            )
        return self.table.reshape(self.cardinalities)

    def index_of(self, name: str) -> int:
        for i, v in enumerate(self.variables):
            if v.name == name:
                return i
        raise UnknownVariableError(f"unknown variable {name!r}")


@dataclass(frozen=True)
class SampleDataset:
    """I.i.d. rows of category indices, one column per variable.

    provenance records how the row count was chosen: "fixed-n" (exactly
    n_requested rows) or "poissonized" (row count drawn Pois(n_requested)
    before sampling).
    """

    variables: tuple[VariableSpec, ...]
    rows: np.ndarray
    provenance: str = "fixed-n"
    n_requested: int = 0
    seed: Optional[int] = None

    def __init__(
        self,
        variables: Sequence[VariableSpec],
        rows,
        provenance: str = "fixed-n",
        n_requested: int = 0,
        seed: Optional[int] = None,
    ):
        object.__setattr__(self, "variables", tuple(variables))
        arr = np.asarray(rows, dtype=np.int64)
        if arr.size == 0:
            arr = arr.reshape(0, len(self.variables))
        if arr.ndim != 2 or arr.shape[1] != len(self.variables):
            raise ShapeMismatchError(
                f"rows must be (n, {len(self.variables)}), got {arr.shape}"
            )
        object.__setattr__(self, "rows", arr)
        object.__setattr__(self, "provenance", provenance)
        object.__setattr__(self, "n_requested", int(n_requested))
        object.__setattr__(self, "seed", seed)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    def __len__(self) -> int:
        return self.rows.shape[0]

    def column(self, name: str) -> np.ndarray:
        for i, v in enumerate(self.variables):
            if v.name == name:
                return self.rows[:, i]
        raise UnknownVariableError(f"unknown variable {name!r}")


def validate(dist: JointDistribution) -> None:
    """Check the probability-table contract.

    Raises SHAPE_MISMATCH for structural problems (size, caps, duplicate or
    degenerate variables), NEGATIVE_MASS for entries < 0, NOT_NORMALIZED
    when the total differs from 1 by more than 1e-12.
    """
    names = [v.name for v in dist.variables]
    if len(set(names)) != len(names):
        raise ShapeMismatchError("duplicate variable names")
    if len(names) > MAX_VARIABLES:
        raise ShapeMismatchError(f"{len(names)} variables exceeds cap {MAX_VARIABLES}")
    for v in dist.variables:
        if v.cardinality < 1:
            raise ShapeMismatchError(f"variable {v.name!r} has cardinality {v.cardinality}")
    if dist.n_cells > MAX_CELLS:
        raise ShapeMismatchError(f"{dist.n_cells} cells exceeds cap {MAX_CELLS}")
    if dist.table.size != dist.n_cells:
        raise ShapeMismatchError(
            f"table has {dist.table.size} entries, variables imply {dist.n_cells}"
        )
    if np.any(dist.table < 0):
        worst = float(dist.table.min())
        raise NegativeMassError(f"table contains negative mass (min entry {worst})")
    total = float(dist.table.sum())
    if abs(total - 1.0) > NORMALIZATION_TOL:
        raise NotNormalizedError(f"table sums to {total!r}, not 1 within {NORMALIZATION_TOL}")


def _check_names(dist: JointDistribution, names: Iterable[str]) -> None:
    known = set(dist.names)
    for n in names:
        if n not in known:
            raise UnknownVariableError(f"unknown variable {n!r}")


def _check_event(dist: JointDistribution, event: Event) -> None:
    for name, idx in event.items():
        pos = dist.index_of(name)
        card = dist.variables[pos].cardinality
        if not 0 <= idx < card:
            raise OutOfRangeError(
                f"index {idx} out of range for {name!r} (cardinality {card})"
            )


def marginal(dist: JointDistribution, keep: Iterable[str]) -> JointDistribution:
    """Marginal distribution over `keep`, in declaration order.

    keep may be empty, yielding the zero-variable distribution with the
    single cell [1.0].
    """
    keep = tuple(keep)
    _check_names(dist, keep)
    keep_set = set(keep)
    shaped = dist.shaped()
    drop_axes = tuple(i for i, v in enumerate(dist.variables) if v.name not in keep_set)
    out = shaped.sum(axis=drop_axes) if drop_axes else shaped.copy()
    kept_vars = tuple(v for v in dist.variables if v.name in keep_set)
    return JointDistribution(kept_vars, out.reshape(-1))


def probability(dist: JointDistribution, event: Event) -> float:
    """Total mass of the cells consistent with `event`."""
    _check_event(dist, event)
    shaped = dist.shaped()
    indexer = tuple(
        event[v.name] if v.name in event else slice(None) for v in dist.variables
    )
    sub = shaped[indexer]
    return float(np.sum(sub))


def _merge_events(target: Event, given: Event) -> Optional[Event]:
    # None signals a direct contradiction, i.e. conditional probability 0.
    merged = dict(given.items())
    for name, idx in target.items():
        if name in merged and merged[name] != idx:
            return None
        merged[name] = idx
    return Event(merged)


def conditional_prob(dist: JointDistribution, target: Event, given: Event) -> float:
    """P(target | given). Raises ZERO_CONDITION when P(given) = 0."""
    p_given = probability(dist, given)
    if p_given == 0.0:
        raise ZeroConditionError(f"conditioning event has probability zero: {given}")
    merged = _merge_events(target, given)
    if merged is None:
        return 0.0
    return probability(dist, merged) / p_given


def rng_for(seed: int) -> np.random.Generator:
    """Counter-based generator (Philox) keyed by a plain integer seed."""
    return np.random.Generator(np.random.Philox(key=seed & ((1 << 128) - 1)))


def trial_seed(seed: int, trial: int) -> int:
    """Disjoint per-trial stream key: seed XOR trial index."""
    return seed ^ trial


def sample(
    dist: JointDistribution,
    n: int,
    seed: int,
    poissonized: bool = False,
) -> SampleDataset:
    """Draw i.i.d. rows by inverse-CDF over the flat table.

    Deterministic for a given seed. With poissonized=True the row count is
    first drawn Pois(n) from the same stream, then that many rows follow.
    """
    if n < 0:
        raise OutOfRangeError(f"sample size must be nonnegative, got {n}")
    validate(dist)
    rng = rng_for(seed)
    n_rows = int(rng.poisson(n)) if poissonized else n
    cdf = np.cumsum(dist.table)
    u = rng.random(n_rows)
    flat = np.searchsorted(cdf, u, side="right")
    flat = np.minimum(flat, dist.table.size - 1)
    if dist.variables:
        cols = np.unravel_index(flat, dist.cardinalities)
        rows = np.stack(cols, axis=1).astype(np.int64)
    else:
        rows = np.zeros((n_rows, 0), dtype=np.int64)
    return SampleDataset(
        dist.variables,
        rows,
        provenance="poissonized" if poissonized else "fixed-n",
        n_requested=n,
        seed=seed,
    )


def count(data: SampleDataset, event: Event) -> int:
    """Number of rows matching every binding in `event`."""
    mask = np.ones(len(data), dtype=bool)
    for name, idx in event.items():
        mask &= data.column(name) == idx
    return int(mask.sum())


def joint_codes(data: SampleDataset, names: Sequence[str]) -> tuple[np.ndarray, int]:
    """Encode the named columns of each row as a single cell index.

    Returns (codes, n_cells). With no names every row maps to cell 0.
    Encoding is row-major over the named variables in the given order.
    """
    if not names:
        return np.zeros(len(data), dtype=np.int64), 1
    cards = []
    cols = []
    for name in names:
        cols.append(data.column(name))
        for v in data.variables:
            if v.name == name:
                cards.append(v.cardinality)
                break
        else:
            raise UnknownVariableError(f"unknown variable {name!r}")
    codes = np.ravel_multi_index(tuple(cols), dims=tuple(cards))
    return codes.astype(np.int64), int(np.prod(cards, dtype=np.int64))


def empirical_distribution(data: SampleDataset, names: Sequence[str]) -> JointDistribution:
    """Empirical joint over the named columns (declaration order)."""
    if len(data) == 0:
        raise EmptyDatasetError("cannot form an empirical distribution from zero rows")
    ordered = tuple(v for v in data.variables if v.name in set(names))
    missing = set(names) - {v.name for v in ordered}
    if missing:
        raise UnknownVariableError(f"unknown variable {sorted(missing)[0]!r}")
    codes, n_cells = joint_codes(data, tuple(v.name for v in ordered))
    counts = np.bincount(codes, minlength=n_cells).astype(np.float64)
    return JointDistribution(ordered, counts / len(data))
