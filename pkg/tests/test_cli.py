"""End-to-end checks of the command-line interface and its exit codes."""

import csv
import json
import re
import subprocess
import sys

import numpy as np
import pytest

from fairfix.cli import main
from fairfix.fairea import TradeoffBaseline
from fairfix.prune_db import load as load_db
from fairfix.synth import write_fixture


@pytest.fixture(scope="module")
def corpus(tmp_path_factory):
    """Fixture directory with data.csv, schema.json, and a one-row manifest."""
    root = tmp_path_factory.mktemp("corpus")
    write_fixture(root, rows=800, disparity=0.3, seed=1)
    (root / "manifest.json").write_text(
        json.dumps([{"data": "data.csv", "schema": "schema.json", "model": "dtree"}]),
        encoding="utf-8",
    )
    return root


@pytest.fixture(scope="module")
def repair_outputs(corpus, tmp_path_factory):
    out = tmp_path_factory.mktemp("repair_out")
    report = out / "report.json"
    code = main([
        "repair", "--data", str(corpus / "data.csv"),
        "--schema", str(corpus / "schema.json"),
        "--model", "dtree", "--metric", "spd",
        "--trials", "25", "--seed", "0", "--out", str(report),
    ])
    assert code == 0
    baseline = out / "base.json"
    code = main([
        "baseline", "--data", str(corpus / "data.csv"),
        "--schema", str(corpus / "schema.json"),
        "--model", "dtree", "--metric", "spd",
        "--reps", "10", "--seed", "0", "--out", str(baseline),
    ])
    assert code == 0
    return report, baseline


def test_repair_summary_line_and_report(corpus, tmp_path, capsys):
    report = tmp_path / "r.json"
    code = main([
        "repair", "--data", str(corpus / "data.csv"),
        "--schema", str(corpus / "schema.json"),
        "--model", "dtree", "--metric", "spd",
        "--trials", "8", "--seed", "0", "--out", str(report),
    ])
    assert code == 0
    line = capsys.readouterr().out.strip()
    assert re.fullmatch(
        r"region=(win|good|bad|lose|inverted)"
        r" acc \d\.\d{4}→\d\.\d{4} bias \d\.\d{4}→\d\.\d{4}",
        line,
    )
    payload = json.loads(report.read_text(encoding="utf-8"))
    assert payload["metric"] == "spd"
    assert len(payload["beta_trace"]) == 8


def test_repair_is_deterministic_across_invocations(corpus, tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        code = main([
            "repair", "--data", str(corpus / "data.csv"),
            "--schema", str(corpus / "schema.json"),
            "--model", "dtree", "--metric", "spd",
            "--trials", "10", "--seed", "7", "--out", str(p),
        ])
        assert code == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_baseline_writes_json_and_plot_csv(repair_outputs):
    _, baseline_path = repair_outputs
    baseline = TradeoffBaseline.from_json(baseline_path.read_text(encoding="utf-8"))
    assert len(baseline.points) == 10
    csv_path = baseline_path.with_suffix(".csv")
    with open(csv_path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["degree", "bias", "acc"]
    assert len(rows) == 11
    # plot rows carry the same floats as the JSON points
    for row, (degree, pt) in zip(rows[1:], baseline.points):
        assert float(row[0]) == degree
        assert float(row[1]) == pt.bias
        assert float(row[2]) == pt.acc


def test_evaluate_exit_codes_follow_region(repair_outputs, tmp_path, capsys):
    report_path, baseline_path = repair_outputs
    template = json.loads(report_path.read_text(encoding="utf-8"))

    def run(acc, bias):
        fake = dict(template)
        fake["repaired"] = {"acc": acc, "bias": bias}
        p = tmp_path / "fake.json"
        p.write_text(json.dumps(fake), encoding="utf-8")
        return main(["evaluate", "--report", str(p), "--baseline", str(baseline_path)])

    orig = template["original"]
    assert run(orig["acc"] + 0.01, orig["bias"] / 2) == 0  # win
    assert run(0.5, orig["bias"] * 2) == 1                 # lose
    out = capsys.readouterr().out.strip().splitlines()
    assert out == ["region=win", "region=lose"]


def test_evaluate_rejects_mismatched_metric(corpus, repair_outputs, tmp_path, capsys):
    report_path, _ = repair_outputs
    eod_baseline = tmp_path / "base_eod.json"
    code = main([
        "baseline", "--data", str(corpus / "data.csv"),
        "--schema", str(corpus / "schema.json"),
        "--model", "dtree", "--metric", "eod",
        "--reps", "5", "--seed", "0", "--out", str(eod_baseline),
    ])
    assert code == 0
    capsys.readouterr()
    code = main([
        "evaluate", "--report", str(report_path), "--baseline", str(eod_baseline)
    ])
    assert code == 2
    assert "metric mismatch" in capsys.readouterr().err


def test_build_db_then_repair_with_it(corpus, tmp_path, capsys):
    db_path = tmp_path / "db.json"
    code = main([
        "build-db", "--corpus", str(corpus),
        "--runs", "1", "--trials", "6", "--top-k", "2", "--top-m", "2",
        "--seed", "0", "--out", str(db_path),
    ])
    assert code == 0
    assert "built 1 entries" in capsys.readouterr().out
    db = load_db(db_path)
    assert len(db.entries) == 1
    assert db.entries[0].dataset == "data.csv"
    assert db.entries[0].algorithm.value == "dtree"

    report = tmp_path / "r.json"
    code = main([
        "repair", "--data", str(corpus / "data.csv"),
        "--schema", str(corpus / "schema.json"),
        "--model", "dtree", "--metric", "spd",
        "--trials", "6", "--seed", "0", "--db", str(db_path),
        "--out", str(report),
    ])
    assert code == 0
    assert report.exists()


def test_build_db_without_manifest_exits_3(tmp_path, capsys):
    code = main([
        "build-db", "--corpus", str(tmp_path), "--seed", "0",
        "--out", str(tmp_path / "db.json"),
    ])
    assert code == 3
    assert "data error" in capsys.readouterr().err


def test_missing_data_file_exits_3(corpus, tmp_path, capsys):
    code = main([
        "repair", "--data", str(tmp_path / "nope.csv"),
        "--schema", str(corpus / "schema.json"),
        "--model", "dtree", "--metric", "spd",
        "--trials", "5", "--out", str(tmp_path / "r.json"),
    ])
    assert code == 3
    assert "data error" in capsys.readouterr().err


def test_usage_errors_exit_2(corpus, tmp_path, capsys):
    with pytest.raises(SystemExit) as exc:
        main([
            "repair", "--data", str(corpus / "data.csv"),
            "--schema", str(corpus / "schema.json"),
            "--model", "nosuch", "--metric", "spd",
            "--trials", "5", "--out", str(tmp_path / "r.json"),
        ])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2
    capsys.readouterr()


def test_already_fair_input_exits_4(tmp_path, capsys):
    # perfectly separable clusters: the stock model has zero equal-odds gap
    rng = np.random.default_rng(0)
    n = 200
    with open(tmp_path / "fair.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["x1", "group", "outcome"])
        for i in range(n):
            y = i % 2
            w.writerow([repr(10.0 * y + float(rng.normal(0, 0.1))), (i // 2) % 2, y])
    schema = {"label": "outcome", "favorable": "1", "protected": "group",
              "unprivileged": "0", "categorical": [], "drop": []}
    (tmp_path / "fair.schema.json").write_text(json.dumps(schema), encoding="utf-8")
    code = main([
        "repair", "--data", str(tmp_path / "fair.csv"),
        "--schema", str(tmp_path / "fair.schema.json"),
        "--model", "knn", "--metric", "eod",
        "--trials", "5", "--out", str(tmp_path / "r.json"),
    ])
    assert code == 4
    assert "already fair" in capsys.readouterr().err
    assert not (tmp_path / "r.json").exists()


def test_module_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "fairfix.cli", "repair", "--help"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert "--trials" in proc.stdout
