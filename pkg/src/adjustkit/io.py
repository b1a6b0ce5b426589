"""File formats.

Distribution files are UTF-8 JSON objects:

    {"variables": [{"name": "A", "cardinality": 2}, ...],
     "probabilities": [0.25, 0.25, 0.25, 0.25]}

with probabilities flat in row-major order (last variable fastest).
Dataset files are CSV: header row of variable names, then one row of decimal
category indices per sample. Floats are written with shortest round-trip
representation, so write/read is lossless.
"""

from __future__ import annotations

import csv
import json
import os
from typing import Optional, Sequence

import numpy as np

from .dist import JointDistribution, SampleDataset, VariableSpec
from .errors import ParseError


def write_dist(dist: JointDistribution, path: str | os.PathLike) -> None:
    obj = {
        "variables": [
            {"name": v.name, "cardinality": v.cardinality} for v in dist.variables
        ],
        "probabilities": [float(p) for p in dist.table],
    }
    with open(path, "w", encoding="utf-8") as f:
        json.dump(obj, f, indent=2)
        f.write("\n")


def dist_to_json(dist: JointDistribution) -> dict:
    """The same object write_dist serializes, for in-memory use."""
    return {
        "variables": [
            {"name": v.name, "cardinality": v.cardinality} for v in dist.variables
        ],
        "probabilities": [float(p) for p in dist.table],
    }


def read_dist(path: str | os.PathLike) -> JointDistribution:
    """Parse a distribution file. Malformed content raises PARSE_ERROR.

    Parsing and validation are separate: the returned object may still fail
    validate() (e.g. a table that does not sum to 1), which is what the CLI
    validate command is for.
    """
    try:
        with open(path, "r", encoding="utf-8") as f:
            obj = json.load(f)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", line=e.lineno, offset=e.colno) from e
    except OSError as e:
        raise ParseError(f"cannot read {os.fspath(path)}: {e.strerror}") from e

    if not isinstance(obj, dict):
        raise ParseError("top level must be a JSON object")
    if "variables" not in obj or "probabilities" not in obj:
        raise ParseError("missing 'variables' or 'probabilities' key")
    variables = []
    if not isinstance(obj["variables"], list):
        raise ParseError("'variables' must be a list")
    for i, entry in enumerate(obj["variables"]):
        if (
            not isinstance(entry, dict)
            or not isinstance(entry.get("name"), str)
            or not isinstance(entry.get("cardinality"), int)
            or isinstance(entry.get("cardinality"), bool)
        ):
            raise ParseError(
                f"variables[{i}] must be {{'name': str, 'cardinality': int}}"
            )
        variables.append(VariableSpec(entry["name"], entry["cardinality"]))
    probs = obj["probabilities"]
    if not isinstance(probs, list) or not all(
        isinstance(p, (int, float)) and not isinstance(p, bool) for p in probs
    ):
        raise ParseError("'probabilities' must be a list of numbers")
    return JointDistribution(variables, np.asarray(probs, dtype=np.float64))


def write_data(data: SampleDataset, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(data.names)
        for row in data.rows:
            writer.writerow([int(v) for v in row])


def read_data(
    path: str | os.PathLike,
    variables: Optional[Sequence[VariableSpec]] = None,
) -> SampleDataset:
    """Parse a dataset CSV.

    When `variables` is given, the header must match their names in order and
    every index must lie inside the declared cardinality; violations raise
    PARSE_ERROR with the offending line and column. Without `variables`,
    cardinalities are inferred as max index + 1 per column.
    """
    try:
        f = open(path, "r", encoding="utf-8", newline="")
    except OSError as e:
        raise ParseError(f"cannot read {os.fspath(path)}: {e.strerror}") from e
    with f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError("empty file: missing header row", line=1, offset=0)
        names = [h.strip() for h in header]
        if any(not n for n in names):
            raise ParseError("blank variable name in header", line=1, offset=0)
        if len(set(names)) != len(names):
            raise ParseError("duplicate variable name in header", line=1, offset=0)
        if variables is not None:
            expected = [v.name for v in variables]
            if names != expected:
                raise ParseError(
                    f"header {names} does not match expected variables {expected}",
                    line=1,
                    offset=0,
                )
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(names):
                raise ParseError(
                    f"expected {len(names)} fields, got {len(row)}",
                    line=lineno,
                    offset=0,
                )
            parsed = []
            for col, cell in enumerate(row):
                text = cell.strip()
                try:
                    value = int(text)
                except ValueError:
                    raise ParseError(
                        f"non-integer index {text!r} for {names[col]}",
                        line=lineno,
                        offset=col,
                    )
                if value < 0:
                    raise ParseError(
                        f"negative index {value} for {names[col]}",
                        line=lineno,
                        offset=col,
                    )
                if variables is not None and value >= variables[col].cardinality:
                    raise ParseError(
                        f"index {value} out of range for {names[col]} "
                        f"(cardinality {variables[col].cardinality})",
                        line=lineno,
                        offset=col,
                    )
                parsed.append(value)
            rows.append(parsed)

    arr = np.asarray(rows, dtype=np.int64).reshape(len(rows), len(names))
    if variables is not None:
        specs = tuple(variables)
    else:
        # Cardinality is not part of the format; infer the tightest fit.
        maxes = arr.max(axis=0) if len(rows) else np.zeros(len(names), dtype=np.int64)
        specs = tuple(
            VariableSpec(name, int(m) + 1) for name, m in zip(names, maxes)
        )
    return SampleDataset(specs, arr)
