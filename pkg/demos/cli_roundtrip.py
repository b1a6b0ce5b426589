"""
Driving the command-line interface end to end.

Generates a gallery distribution to a JSON file, validates it, queries
dependence and positivity, runs the subset searches, and estimates the
adjusted effect, all through subprocess calls to the installed CLI.
Every command prints a single JSON report to stdout.

Run:  python3 demos/cli_roundtrip.py
"""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

def run(*args):
    """Invoke the CLI and decode its JSON report."""
    proc = subprocess.run(
        [sys.executable, "-m", "adjustkit", *args],
        capture_output=True, text=True,
    )
    if proc.returncode != 0:
        raise RuntimeError(proc.stderr or proc.stdout)
    return json.loads(proc.stdout)

workdir = Path(tempfile.mkdtemp())
dist_path = workdir / "backdoor.json"

report = run("gallery", "--family", "backdoor", "--k", "2", "--seed", "2",
             "--out", str(dist_path))
print("gallery  ->", report["family"],
      "vars:", [v["name"] for v in report["variables"]])

report = run("validate", "--dist", str(dist_path))
print("validate -> ok:", report["ok"], "cells:", report["cells"])

report = run("delta", "--dist", str(dist_path),
              "--a", "X", "--b", "B", "--c", "A1,A2")
print("delta    ->", report["delta"])

report = run("alpha", "--dist", str(dist_path), "--x", "X=0", "--set", "B,A1,A2")
print("alpha    ->", report["alpha"])

report = run("amba", "--oracle", str(dist_path), "--x", "X",
             "--candidates", "B,A1,A2", "--eps", "1e-9")
print("amba     ->", report["chosen"], "tests:", report["tests_run"])

report = run("estimate", "--dist", str(dist_path),
             "--x", "X=0", "--y", "Y=1", "--adjust", "B,A1,A2")
print("estimate ->", report["value"])

# Exit codes are part of the interface: 1 for data errors such as an
# unknown variable, 2 for malformed invocations.
proc = subprocess.run(
    [sys.executable, "-m", "adjustkit", "delta", "--dist", str(dist_path),
     "--a", "X", "--b", "NoSuchVar"],
    capture_output=True, text=True,
)
print("unknown var -> exit", proc.returncode)

proc = subprocess.run(
    [sys.executable, "-m", "adjustkit", "estimate", "--dist", str(dist_path),
     "--x", "X", "--y", "Y=1"],
    capture_output=True, text=True,
)
print("bad event   -> exit", proc.returncode)
