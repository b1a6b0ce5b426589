"""Command-line interface: plumbing, pins, exit codes, determinism."""

import contextlib
import io
import json
import os
import subprocess
import sys

import pytest

from adjustkit import (
    AdjustmentQuery,
    Event,
    dist_to_json,
    exact_adjustment,
    gallery_backdoor,
    gallery_xor,
    plugin_adjustment,
    read_data,
    read_dist,
    sample,
    write_data,
    write_dist,
)
from adjustkit.cli import main


def run_cli(argv):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(argv)
    return code, json.loads(buf.getvalue())


def test_module_entry_point_version():
    out = subprocess.run(
        [sys.executable, "-m", "adjustkit", "--version"],
        capture_output=True, text=True)
    assert out.returncode == 0
    assert out.stdout.strip().startswith("adjustkit ")


def test_validate_ok(tmp_path):
    path = tmp_path / "xor.json"
    write_dist(gallery_xor(0.2), path)
    code, rep = run_cli(["validate", "--dist", str(path)])
    assert code == 0
    assert rep["ok"] is True
    assert rep["cells"] == 8
    assert rep["command"] == "validate"
    assert "config" in rep


def test_validate_rejects_unnormalized(tmp_path):
    doc = dist_to_json(gallery_xor(0.2))
    doc["probabilities"] = [2.0 * v for v in doc["probabilities"]]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    code, rep = run_cli(["validate", "--dist", str(path)])
    assert code == 1
    assert rep["error"]["code"] == "NOT_NORMALIZED"


def test_delta_pins(tmp_path):
    path = tmp_path / "xor.json"
    write_dist(gallery_xor(0.1), path)
    code, rep = run_cli(["delta", "--dist", str(path), "--a", "X",
                         "--b", "A,B"])
    assert code == 0
    assert rep["mode"] == "exact"
    assert rep["delta"] == pytest.approx(0.4, abs=1e-10)

    code, rep = run_cli(["delta", "--gallery", "hardness:eps=0.04,alpha=0.4",
                         "--a", "X", "--b", "B", "--c", "A"])
    assert code == 0
    assert rep["delta"] == pytest.approx(0.04, abs=1e-10)


def test_alpha_pin():
    code, rep = run_cli(["alpha", "--gallery", "hardness:eps=0.04,alpha=0.4",
                         "--x", "X=0", "--set", "A"])
    assert code == 0
    assert rep["alpha"] == pytest.approx(0.39, abs=1e-10)


def test_amba_gallery_oracle():
    code, rep = run_cli(["amba", "--gallery", "backdoor:k=3,seed=1",
                         "--x", "X", "--candidates", "B,A1,A2,A3",
                         "--eps", "1e-12"])
    assert code == 0
    assert rep["chosen"] == ["A1", "A2", "A3"]
    assert rep["fallback_used"] is False
    assert rep["config"]["candidates"] == "B,A1,A2,A3"


def test_bamba_gallery_oracle():
    code, rep = run_cli(["bamba", "--gallery", "backdoor:k=3,seed=1",
                         "--x", "X", "--y", "Y", "--candidates", "B,A1,A2,A3",
                         "--blanket", "A1,A2,A3", "--eps", "1e-12"])
    assert code == 0
    assert rep["chosen"] == ["B"]
    assert rep["level_reached"] == 1


def test_estimate_exact_and_plugin(tmp_path):
    dist = gallery_backdoor(3, seed=1)
    dist_path = tmp_path / "bd.json"
    write_dist(dist, dist_path)
    q = AdjustmentQuery(Event(X=0), Event(Y=1), ("B", "A1", "A2", "A3"))

    code, rep = run_cli(["estimate", "--dist", str(dist_path),
                         "--x", "X=0", "--y", "Y=1",
                         "--adjust", "B,A1,A2,A3"])
    assert code == 0
    assert rep["mode"] == "exact"
    assert rep["value"] == pytest.approx(exact_adjustment(dist, q), abs=1e-12)

    data_path = tmp_path / "bd.csv"
    write_data(sample(dist, 3000, seed=1), data_path)
    code, rep = run_cli(["estimate", "--data", str(data_path),
                         "--dist", str(dist_path),
                         "--x", "X=0", "--y", "Y=1",
                         "--adjust", "B,A1,A2,A3"])
    assert code == 0
    want = plugin_adjustment(read_data(data_path, dist.variables), q)
    assert rep["value"] == pytest.approx(want.value, abs=1e-15)
    assert rep["mode"] == want.mode
    assert rep["n_effective"] == want.n_effective


def test_auto_on_csv(tmp_path):
    dist = gallery_backdoor(2, seed=2)
    data_path = tmp_path / "bd2.csv"
    write_data(sample(dist, 2000, seed=3), data_path)
    code, rep = run_cli(["auto", "--data", str(data_path),
                         "--gallery", "backdoor:k=2,seed=2",
                         "--x", "X=0", "--y", "Y=1", "--adjust", "B,A1,A2",
                         "--eps", "1e-9", "--delta", "0.1"])
    assert code == 0
    assert 0.0 <= rep["value"] <= 1.0
    assert set(rep["s_star"]) <= {"B", "A1", "A2"}
    assert rep["search"]["decision"]["branch"] in ("use-subset", "use-Z")
    assert rep["search"]["decision"]["inputs"]["n"] == 2000


def test_gallery_out_round_trip(tmp_path):
    path = tmp_path / "bd.json"
    code, rep = run_cli(["gallery", "--family", "backdoor", "--k", "2",
                         "--seed", "2", "--out", str(path)])
    assert code == 0
    assert rep["written"] == str(path)
    back = read_dist(path)
    want = gallery_backdoor(2, seed=2)
    assert tuple(v.name for v in back.variables) == tuple(
        v.name for v in want.variables)
    assert (back.table == want.table).all()


def test_gallery_prints_table():
    code, rep = run_cli(["gallery", "--family", "xor", "--eps", "0.2"])
    assert code == 0
    assert len(rep["probabilities"]) == 8
    assert sum(rep["probabilities"]) == pytest.approx(1.0, abs=1e-12)


def test_bench_convergence_cli(tmp_path):
    out1, out2 = tmp_path / "r1.csv", tmp_path / "r2.csv"
    argv = ["bench-convergence", "--gallery", "weak-edge:eps=0.05",
            "--x", "X=0", "--y", "Y=1", "--adjust", "Z",
            "--grid", "100,400", "--trials", "3", "--seed", "0"]
    code, rep = run_cli(argv + ["--out", str(out1)])
    assert code == 0
    assert rep["rows"] == 6
    code, _ = run_cli(argv + ["--out", str(out2)])
    assert code == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_cli_thread_env_invariance(tmp_path):
    argv = [sys.executable, "-m", "adjustkit", "amba",
            "--gallery", "backdoor:k=3,seed=1", "--x", "X",
            "--candidates", "B,A1,A2,A3", "--eps", "1e-12"]
    outs = []
    for threads in ("1", "4"):
        env = dict(os.environ, ADJUSTKIT_THREADS=threads)
        res = subprocess.run(argv, capture_output=True, env=env)
        assert res.returncode == 0
        outs.append(res.stdout)
    assert outs[0] == outs[1]


def test_exit_codes(tmp_path):
    # data error: unknown variable
    code, rep = run_cli(["delta", "--gallery", "xor:eps=0.1",
                         "--a", "X", "--b", "NoSuchVar"])
    assert code == 1
    assert rep["error"]["code"] == "UNKNOWN_VARIABLE"

    # usage error: malformed event
    path = tmp_path / "xor.json"
    write_dist(gallery_xor(0.1), path)
    code, rep = run_cli(["estimate", "--dist", str(path), "--x", "X",
                         "--y", "Y=1"])
    assert code == 2
    assert rep["error"]["code"] == "USAGE"

    # usage error: argparse-level failure stays JSON with exit 2
    code, rep = run_cli(["amba", "--x", "X", "--candidates", "A"])
    assert code == 2
    assert rep["error"]["code"] == "USAGE"

    # usage error: no source given
    code, rep = run_cli(["delta", "--a", "X", "--b", "B"])
    assert code == 2

    # usage error: unknown gallery family
    code, rep = run_cli(["alpha", "--gallery", "nope:eps=0.1", "--x", "X=0"])
    assert code == 2


def test_missing_file_is_data_error(tmp_path):
    code, rep = run_cli(["validate", "--dist", str(tmp_path / "absent.json")])
    assert code == 1
    assert rep["error"]["code"] == "PARSE_ERROR"
