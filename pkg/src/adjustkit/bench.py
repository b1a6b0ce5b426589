"""Benchmark harness: convergence curves and pipeline comparison.

Every run is driven by one ExperimentConfig and one base seed. The dataset
for a (grid-point, trial) pair comes from the stream

    seed XOR ((grid_index + 1) << 24 | trial)

so datasets are disjoint across the grid but shared by every method within
a trial, which is what makes method columns comparable row by row. Methods
add no randomness of their own: subset searches run against the exact
distribution (the harness sampled from it, so it is known), estimation is
plug-in on the shared data. Output rows are sorted by (method, n, trial)
and serialized with shortest round-trip float formatting, so a re-run with
the same config is byte-identical. The elapsed column is 0.0 unless timing
was explicitly requested, again to keep output stable.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .dist import Event, JointDistribution, sample
from .errors import OutOfRangeError, ParseError
from .estimators import AdjustmentQuery, exact_adjustment, plugin_adjustment
from .search import amba, auto_estimate
from .ci import CiTester

METHOD_DIRECT = "direct"
METHOD_AMBA = "amba"
METHOD_PIPELINE = "amba+bamba"

CSV_HEADER = "method,n,trial,estimate,abs_error,chosen_set,decision,elapsed"


@dataclass(frozen=True)
class ExperimentConfig:
    x: Event
    y: Event
    adjust: tuple[str, ...]
    grid: tuple[int, ...]
    trials: int
    seed: int
    eps: float = 0.1
    delta: float = 0.1
    timing: bool = False

    def __post_init__(self):
        if self.trials < 1:
            raise OutOfRangeError(f"trials must be >= 1, got {self.trials}")
        if not self.grid:
            raise OutOfRangeError("grid must not be empty")
        if any(n < 0 for n in self.grid):
            raise OutOfRangeError(f"grid sizes must be >= 0, got {self.grid}")
        if any(b <= a for a, b in zip(self.grid, self.grid[1:])):
            raise OutOfRangeError(f"grid must be strictly increasing, got {self.grid}")
        if self.trials >= (1 << 24):
            raise OutOfRangeError("trials do not fit the stream layout")

    def to_json(self) -> dict:
        return {
            "x": dict(self.x.items()),
            "y": dict(self.y.items()),
            "adjust": list(self.adjust),
            "grid": list(self.grid),
            "trials": self.trials,
            "seed": self.seed,
            "eps": self.eps,
            "delta": self.delta,
            "timing": self.timing,
        }


@dataclass(frozen=True)
class ReportRow:
    method: str
    n: int
    trial: int
    estimate: float
    abs_error: float
    chosen_set: tuple[str, ...]
    decision: str
    elapsed: float

    def to_csv(self) -> str:
        return ",".join(
            [
                self.method,
                str(self.n),
                str(self.trial),
                repr(self.estimate),
                repr(self.abs_error),
                "|".join(self.chosen_set),
                self.decision,
                repr(self.elapsed),
            ]
        )

    @staticmethod
    def from_csv(line: str) -> "ReportRow":
        parts = line.split(",")
        if len(parts) != 8:
            raise ParseError(f"expected 8 fields, got {len(parts)}: {line!r}")
        return ReportRow(
            method=parts[0],
            n=int(parts[1]),
            trial=int(parts[2]),
            estimate=float(parts[3]),
            abs_error=float(parts[4]),
            chosen_set=tuple(p for p in parts[5].split("|") if p),
            decision=parts[6],
            elapsed=float(parts[7]),
        )


def dataset_stream(seed: int, grid_index: int, trial: int) -> int:
    # Field layout keeps streams disjoint for any desk-scale grid.
    return seed ^ (((grid_index + 1) << 24) | trial)


def _now(timing: bool) -> float:
    return time.perf_counter() if timing else 0.0


def run_convergence(dist: JointDistribution, config: ExperimentConfig) -> list[ReportRow]:
    """Plug-in estimate on the configured adjustment set across the grid."""
    q = AdjustmentQuery(config.x, config.y, config.adjust)
    truth = exact_adjustment(dist, q)
    rows = []
    for gi, n in enumerate(config.grid):
        for trial in range(config.trials):
            t0 = _now(config.timing)
            data = sample(dist, n, seed=dataset_stream(config.seed, gi, trial))
            report = plugin_adjustment(data, q)
            elapsed = _now(config.timing) - t0
            rows.append(
                ReportRow(
                    method=METHOD_DIRECT,
                    n=n,
                    trial=trial,
                    estimate=report.value,
                    abs_error=abs(report.value - truth),
                    chosen_set=q.adjust,
                    decision="",
                    elapsed=elapsed,
                )
            )
    rows.sort(key=lambda r: (r.method, r.n, r.trial))
    return rows


def run_pipeline_comparison(
    dist: JointDistribution, config: ExperimentConfig
) -> list[ReportRow]:
    """direct vs blanket-only vs full pipeline, on shared per-trial data."""
    q = AdjustmentQuery(config.x, config.y, config.adjust)
    truth = exact_adjustment(dist, q)
    x_vars = tuple(config.x.names)

    # The blanket search is data-free (exact oracle), so compute it once.
    tester = CiTester.exact_oracle(dist, eps=config.eps, delta=config.delta)
    blanket_report = amba(tester, dist, x_vars, config.adjust, config.eps, config.delta)
    s_blanket = blanket_report.chosen
    q_blanket = AdjustmentQuery(config.x, config.y, s_blanket)

    rows = []
    for gi, n in enumerate(config.grid):
        for trial in range(config.trials):
            data = sample(dist, n, seed=dataset_stream(config.seed, gi, trial))

            t0 = _now(config.timing)
            direct = plugin_adjustment(data, q)
            rows.append(
                ReportRow(
                    method=METHOD_DIRECT,
                    n=n,
                    trial=trial,
                    estimate=direct.value,
                    abs_error=abs(direct.value - truth),
                    chosen_set=q.adjust,
                    decision="",
                    elapsed=_now(config.timing) - t0,
                )
            )

            t0 = _now(config.timing)
            via_blanket = plugin_adjustment(data, q_blanket)
            rows.append(
                ReportRow(
                    method=METHOD_AMBA,
                    n=n,
                    trial=trial,
                    estimate=via_blanket.value,
                    abs_error=abs(via_blanket.value - truth),
                    chosen_set=s_blanket,
                    decision="",
                    elapsed=_now(config.timing) - t0,
                )
            )

            t0 = _now(config.timing)
            auto = auto_estimate(data, q, config.eps, config.delta, oracle=dist)
            decision = auto.search.decision_trace.branch if auto.search.decision_trace else ""
            rows.append(
                ReportRow(
                    method=METHOD_PIPELINE,
                    n=n,
                    trial=trial,
                    estimate=auto.report.value,
                    abs_error=abs(auto.report.value - truth),
                    chosen_set=auto.s_star,
                    decision=decision,
                    elapsed=_now(config.timing) - t0,
                )
            )
    rows.sort(key=lambda r: (r.method, r.n, r.trial))
    return rows


def write_rows(rows: Sequence[ReportRow], path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(CSV_HEADER + "\n")
        for row in rows:
            f.write(row.to_csv() + "\n")


def read_rows(path) -> list[ReportRow]:
    with open(path, "r", encoding="utf-8") as f:
        header = f.readline().rstrip("\n")
        if header != CSV_HEADER:
            raise ParseError(f"unexpected header {header!r}")
        return [ReportRow.from_csv(line.rstrip("\n")) for line in f if line.strip()]
