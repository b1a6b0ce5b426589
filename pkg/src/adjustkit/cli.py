"""Command-line interface.

Every command prints exactly one JSON object to stdout and exits 0 on
success; failures print {"error": {...}} with a stable code and exit
nonzero (2 for usage problems, 1 for everything else). Reports echo the
effective configuration under "config" so runs are self-describing.
ADJUSTKIT_THREADS caps worker threads; it never changes any result.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import __version__
from .bench import (
    ExperimentConfig,
    run_convergence,
    run_pipeline_comparison,
    write_rows,
)
from .ci import CiQuery, CiTester, ci_test, delta_ci, delta_ci_empirical
from .dist import Event, JointDistribution, validate
from .errors import AdjustKitError, UsageError
from .estimators import (
    AdjustmentQuery,
    alpha,
    exact_adjustment,
    plugin_adjustment,
)
from .gallery import (
    gallery_backdoor,
    gallery_hardness,
    gallery_random,
    gallery_weak_edge,
    gallery_xor,
)
from .io import dist_to_json, read_data, read_dist, write_dist
from .search import amba, auto_estimate, bamba


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would sys.exit(2) with usage text
        raise UsageError(message)


def parse_event(text: str) -> Event:
    """NAME=index pairs, comma separated. Empty text is the empty event."""
    bindings = {}
    if text.strip():
        for part in text.split(","):
            name, sep, value = part.partition("=")
            name = name.strip()
            if not sep or not name:
                raise UsageError(f"expected NAME=index, got {part!r}")
            try:
                idx = int(value.strip())
            except ValueError:
                raise UsageError(f"index for {name!r} must be an integer, got {value!r}")
            if name in bindings:
                raise UsageError(f"variable {name!r} bound twice")
            bindings[name] = idx
    return Event(bindings)


def parse_names(text: str) -> tuple[str, ...]:
    """Comma-separated variable names; empty text is the empty set."""
    if not text.strip():
        return ()
    names = tuple(p.strip() for p in text.split(","))
    if any(not n for n in names):
        raise UsageError(f"blank name in set {text!r}")
    return names


def parse_grid(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(p.strip()) for p in text.split(",") if p.strip())
    except ValueError:
        raise UsageError(f"grid must be comma-separated integers, got {text!r}")


GALLERY_FAMILIES = ("hardness", "weak-edge", "xor", "backdoor", "random")


def build_gallery(family: str, params: dict) -> JointDistribution:
    def need(*keys):
        missing = [k for k in keys if k not in params]
        if missing:
            raise UsageError(f"gallery family {family!r} needs {', '.join(missing)}")
        extra = set(params) - set(keys)
        if extra:
            raise UsageError(f"unknown parameter(s) for {family!r}: {sorted(extra)}")

    if family == "hardness":
        need("eps", "alpha")
        return gallery_hardness(params["eps"], params["alpha"])
    if family == "weak-edge":
        need("eps")
        return gallery_weak_edge(params["eps"])
    if family == "xor":
        need("eps")
        return gallery_xor(params["eps"])
    if family == "backdoor":
        need("k", "seed")
        return gallery_backdoor(int(params["k"]), int(params["seed"]))
    if family == "random":
        keys = ["num_vars", "max_card", "seed"]
        if "floor" in params:
            keys.append("floor")
        need(*keys)
        return gallery_random(
            int(params["num_vars"]),
            int(params["max_card"]),
            int(params["seed"]),
            params.get("floor", 0.0),
        )
    raise UsageError(f"unknown gallery family {family!r} (choose from {GALLERY_FAMILIES})")


def parse_gallery_spec(text: str) -> JointDistribution:
    """family:key=value,... e.g. backdoor:k=3,seed=1"""
    family, sep, rest = text.partition(":")
    family = family.strip()
    params = {}
    if sep and rest.strip():
        for part in rest.split(","):
            key, eq, value = part.partition("=")
            key = key.strip()
            if not eq or not key:
                raise UsageError(f"expected key=value in gallery spec, got {part!r}")
            value = value.strip()
            try:
                params[key] = int(value)
            except ValueError:
                try:
                    params[key] = float(value)
                except ValueError:
                    raise UsageError(f"non-numeric gallery parameter {part!r}")
    return build_gallery(family, params)


def _load_dist(path: str) -> JointDistribution:
    dist = read_dist(path)
    validate(dist)
    return dist


def _load_source(args) -> JointDistribution:
    if getattr(args, "dist", None):
        return _load_dist(args.dist)
    if getattr(args, "gallery", None):
        return parse_gallery_spec(args.gallery)
    raise UsageError("provide --dist PATH or --gallery SPEC")


def _config_echo(args) -> dict:
    skip = {"func", "command"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _search_report_json(report) -> dict:
    out = {
        "chosen": list(report.chosen),
        "level_reached": report.level_reached,
        "tests_run": report.tests_run,
        "tests_per_level": list(report.tests_per_level),
        "samples_required": report.samples_required,
        "fallback_used": report.fallback_used,
    }
    if report.decision_trace is not None:
        trace = report.decision_trace
        out["decision"] = {
            "branch": trace.branch,
            "amba_chosen": list(trace.amba_chosen),
            "bamba_chosen": list(trace.bamba_chosen) if trace.bamba_chosen else None,
            "inputs": {
                "n": trace.inputs.n,
                "sigma_x": trace.inputs.sigma_x,
                "sigma_z": trace.inputs.sigma_z,
                "k": trace.inputs.k,
                "alpha_s": trace.inputs.alpha_s,
            },
        }
    return out


def cmd_validate(args) -> dict:
    dist = read_dist(args.dist)
    validate(dist)
    return {
        "command": "validate",
        "ok": True,
        "variables": [
            {"name": v.name, "cardinality": v.cardinality} for v in dist.variables
        ],
        "cells": dist.n_cells,
    }


def cmd_estimate(args) -> dict:
    x = parse_event(args.x)
    y = parse_event(args.y)
    q = AdjustmentQuery(x, y, parse_names(args.adjust))
    if args.data:
        variables = _load_dist(args.dist).variables if args.dist else None
        data = read_data(args.data, variables)
        report = plugin_adjustment(data, q)
        return {
            "command": "estimate",
            "mode": report.mode,
            "value": report.value,
            "n_effective": report.n_effective,
            "zero_cells": report.zero_cells,
        }
    if args.dist:
        dist = _load_dist(args.dist)
        return {
            "command": "estimate",
            "mode": "exact",
            "value": exact_adjustment(dist, q),
        }
    raise UsageError("provide --dist (exact) or --data (plug-in)")


def cmd_delta(args) -> dict:
    q = CiQuery(parse_names(args.a), parse_names(args.b), parse_names(args.c))
    if args.data:
        variables = _load_dist(args.dist).variables if args.dist else None
        data = read_data(args.data, variables)
        value = delta_ci_empirical(data, q)
        mode = "empirical"
    else:
        value = delta_ci(_load_source(args), q)
        mode = "exact"
    return {"command": "delta", "mode": mode, "delta": value}


def cmd_alpha(args) -> dict:
    dist = _load_source(args)
    value = alpha(dist, parse_event(args.x), parse_names(args.set))
    return {"command": "alpha", "alpha": value}


def _make_tester(args, oracle: Optional[JointDistribution]) -> CiTester:
    if oracle is not None:
        return CiTester.exact_oracle(oracle, eps=args.eps, delta=args.delta)
    return CiTester.empirical(eps=args.eps, delta=args.delta, c0=args.c0)


def cmd_amba(args) -> dict:
    oracle = _load_dist(args.oracle) if args.oracle else None
    if args.gallery:
        oracle = parse_gallery_spec(args.gallery)
    if args.data:
        data = read_data(args.data, oracle.variables if oracle else None)
        target = data if oracle is None else oracle
    elif oracle is not None:
        target = oracle
    else:
        raise UsageError("provide --oracle/--gallery (exact) or --data (empirical)")
    tester = _make_tester(args, oracle)
    report = amba(
        tester, target, parse_names(args.x), parse_names(args.candidates),
        args.eps, args.delta,
    )
    return {"command": "amba", **_search_report_json(report)}


def cmd_bamba(args) -> dict:
    oracle = _load_dist(args.oracle) if args.oracle else None
    if args.gallery:
        oracle = parse_gallery_spec(args.gallery)
    if args.data:
        data = read_data(args.data, oracle.variables if oracle else None)
        target = data if oracle is None else oracle
    elif oracle is not None:
        target = oracle
    else:
        raise UsageError("provide --oracle/--gallery (exact) or --data (empirical)")
    tester = _make_tester(args, oracle)
    report = bamba(
        tester, target, parse_names(args.x), parse_names(args.y),
        parse_names(args.candidates), parse_names(args.blanket),
        args.eps, args.delta,
    )
    return {"command": "bamba", **_search_report_json(report)}


def cmd_auto(args) -> dict:
    oracle = None
    if args.oracle:
        oracle = _load_dist(args.oracle)
    elif args.gallery:
        oracle = parse_gallery_spec(args.gallery)
    data = read_data(args.data, oracle.variables if oracle else None)
    q = AdjustmentQuery(parse_event(args.x), parse_event(args.y), parse_names(args.adjust))
    result = auto_estimate(data, q, args.eps, args.delta, oracle=oracle)
    return {
        "command": "auto",
        "value": result.report.value,
        "n_effective": result.report.n_effective,
        "zero_cells": result.report.zero_cells,
        "mode": result.report.mode,
        "s_star": list(result.s_star),
        "search": _search_report_json(result.search),
    }


def cmd_gallery(args) -> dict:
    params = {}
    for key, value in (
        ("eps", args.eps), ("alpha", args.alpha), ("k", args.k),
        ("seed", args.seed), ("num_vars", args.num_vars),
        ("max_card", args.max_card), ("floor", args.floor),
    ):
        if value is not None:
            params[key] = value
    dist = build_gallery(args.family, params)
    if args.out:
        write_dist(dist, args.out)
        return {
            "command": "gallery",
            "family": args.family,
            "written": args.out,
            "variables": [
                {"name": v.name, "cardinality": v.cardinality} for v in dist.variables
            ],
            "cells": dist.n_cells,
        }
    return dist_to_json(dist)


def _bench_config(args) -> ExperimentConfig:
    return ExperimentConfig(
        x=parse_event(args.x),
        y=parse_event(args.y),
        adjust=parse_names(args.adjust),
        grid=parse_grid(args.grid),
        trials=args.trials,
        seed=args.seed,
        eps=args.eps,
        delta=args.delta,
        timing=args.timing,
    )


def cmd_bench_convergence(args) -> dict:
    dist = _load_source(args)
    config = _bench_config(args)
    rows = run_convergence(dist, config)
    write_rows(rows, args.out)
    return {
        "command": "bench-convergence",
        "out": args.out,
        "rows": len(rows),
        "bench_config": config.to_json(),
    }


def cmd_bench_compare(args) -> dict:
    dist = _load_source(args)
    config = _bench_config(args)
    rows = run_pipeline_comparison(dist, config)
    write_rows(rows, args.out)
    return {
        "command": "bench-compare",
        "out": args.out,
        "rows": len(rows),
        "methods": sorted({r.method for r in rows}),
        "bench_config": config.to_json(),
    }


def _add_tester_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--eps", type=float, required=True, help="independence tolerance")
    p.add_argument("--delta", type=float, default=0.05, help="failure budget")
    p.add_argument("--c0", type=float, default=2.0, help="sample-budget constant")
    p.add_argument("--oracle", help="distribution file for exact testing")
    p.add_argument("--gallery", help="gallery spec, e.g. backdoor:k=3,seed=1")
    p.add_argument("--data", help="dataset CSV for empirical testing")


def build_parser() -> _Parser:
    parser = _Parser(prog="adjustkit", description=__doc__)
    parser.add_argument("--version", action="version", version=f"adjustkit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a distribution file")
    p.add_argument("--dist", required=True)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("estimate", help="adjustment estimate, exact or plug-in")
    p.add_argument("--dist", help="distribution file (exact mode, or typing for --data)")
    p.add_argument("--data", help="dataset CSV (plug-in mode)")
    p.add_argument("--x", required=True, help="treatment event, NAME=index[,...]")
    p.add_argument("--y", required=True, help="outcome event, NAME=index[,...]")
    p.add_argument("--adjust", default="", help="adjustment set, comma separated")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("delta", help="approximate conditional-independence distance")
    p.add_argument("--dist")
    p.add_argument("--gallery")
    p.add_argument("--data")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--c", default="")
    p.set_defaults(func=cmd_delta)

    p = sub.add_parser("alpha", help="positivity margin of an adjustment set")
    p.add_argument("--dist")
    p.add_argument("--gallery")
    p.add_argument("--x", required=True)
    p.add_argument("--set", default="", help="adjustment set, comma separated")
    p.set_defaults(func=cmd_alpha)

    p = sub.add_parser("amba", help="approximate blanket search")
    p.add_argument("--x", required=True, help="target variables, comma separated")
    p.add_argument("--candidates", required=True)
    _add_tester_flags(p)
    p.set_defaults(func=cmd_amba)

    p = sub.add_parser("bamba", help="screening-set search below a blanket")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--candidates", required=True)
    p.add_argument("--blanket", required=True)
    _add_tester_flags(p)
    p.set_defaults(func=cmd_bamba)

    p = sub.add_parser("auto", help="search, decide, and estimate in one step")
    p.add_argument("--data", required=True)
    p.add_argument("--oracle")
    p.add_argument("--gallery")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--adjust", required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--delta", type=float, default=0.05)
    p.set_defaults(func=cmd_auto)

    p = sub.add_parser("gallery", help="emit a constructed distribution")
    p.add_argument("--family", required=True, choices=GALLERY_FAMILIES)
    p.add_argument("--eps", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--k", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--num-vars", dest="num_vars", type=int)
    p.add_argument("--max-card", dest="max_card", type=int)
    p.add_argument("--floor", type=float)
    p.add_argument("--out", help="write the distribution file here")
    p.set_defaults(func=cmd_gallery)

    for name, func in (
        ("bench-convergence", cmd_bench_convergence),
        ("bench-compare", cmd_bench_compare),
    ):
        p = sub.add_parser(name, help=f"{name.replace('-', ' ')} to CSV")
        p.add_argument("--dist")
        p.add_argument("--gallery")
        p.add_argument("--x", required=True)
        p.add_argument("--y", required=True)
        p.add_argument("--adjust", required=True)
        p.add_argument("--grid", required=True, help="sample sizes, comma separated")
        p.add_argument("--trials", type=int, default=20)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--eps", type=float, default=0.1)
        p.add_argument("--delta", type=float, default=0.1)
        p.add_argument("--timing", action="store_true", help="fill elapsed with wall time")
        p.add_argument("--out", required=True)
        p.set_defaults(func=func)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        report = args.func(args)
        if "config" not in report:
            report["config"] = _config_echo(args)
        print(json.dumps(report, indent=2, sort_keys=True))
        return 0
    except UsageError as e:
        print(json.dumps({"error": e.to_json()}, indent=2, sort_keys=True))
        return 2
    except AdjustKitError as e:
        print(json.dumps({"error": e.to_json()}, indent=2, sort_keys=True))
        return 1


if __name__ == "__main__":
    sys.exit(main())
