"""Tests for the figure scripts.

Golden record files come from the gap-lab command line tool run in a
subprocess; the figure package itself never imports it.  The overlay
cross-check asserts that the formula values computed here agree with the
values the lab wrote into its records to one part in 1e12.
"""

import csv
import subprocess
import sys

import pytest

from figure_plots import (
    PlotJob,
    SchemaError,
    SelectionError,
    classify_pattern,
    dense_upper_bound,
    fully_doped_gap,
    overlay_for,
    plot,
    staggered_gap,
    undoped_gap,
)
from figure_plots.cli import main


def run_lab(args, path):
    command = [sys.executable, "-m", "floquetgap.cli", *args, "--out", str(path)]
    proc = subprocess.run(command, capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    return path


def read_rows(path):
    with open(path, encoding="utf-8", newline="") as handle:
        return list(csv.DictReader(handle))


@pytest.fixture(scope="module")
def golden(tmp_path_factory):
    """Record files for every figure kind, written by the lab tool."""
    root = tmp_path_factory.mktemp("golden")
    run_lab(
        ["gap", "--n", "4,6", "--gamma", "0.5,1.0,2.0", "--pattern", "undoped",
         "--seed", "0"],
        root / "gap.csv",
    )
    run_lab(
        ["gap", "--n", "4,6,8", "--gamma", "1.0", "--pattern", "undoped",
         "--seed", "0"],
        root / "scaling.csv",
    )
    run_lab(
        ["bounds", "--n", "4", "--gamma", "0.5,1.25,2.0", "--pattern",
         "staggered,full", "--seed", "1"],
        root / "bounds.csv",
    )
    run_lab(
        ["orbits", "--n", "4", "--gate-set", "fixed,identity", "--seed", "5"],
        root / "orbits.csv",
    )
    run_lab(
        ["weight-dist", "--n", "4", "--gamma", "0.5,3.0", "--pattern", "full",
         "--seed", "7"],
        root / "weights.csv",
    )
    return root


def test_overlays_match_golden_records(golden):
    """Formula values recomputed here agree with the lab records to 1e-12."""
    for row in read_rows(golden / "gap.csv"):
        n = int(row["n"])
        gamma = float(row["gamma"])
        assert abs(float(row["delta"]) - undoped_gap(n, gamma)) <= 1e-12
    bounds = read_rows(golden / "bounds.csv")
    assert bounds
    for row in bounds:
        gamma = float(row["gamma"])
        kind = classify_pattern(row["pattern"])
        if kind == "staggered":
            assert abs(float(row["analytic"]) - staggered_gap(gamma)) <= 1e-12
            assert abs(float(row["bound_upper"]) - staggered_gap(gamma)) <= 1e-12
        else:
            assert kind == "full"
            assert abs(float(row["analytic"]) - fully_doped_gap(gamma)) <= 1e-12
            assert abs(float(row["bound_upper"]) - dense_upper_bound(gamma)) <= 1e-12


def test_gap_sweep_renders_png(golden, tmp_path):
    out = tmp_path / "sweep.png"
    plot(PlotJob(inputs=(str(golden / "gap.csv"),), kind="gap-sweep", out=str(out)))
    data = out.read_bytes()
    assert data[:8] == b"\x89PNG\r\n\x1a\n"
    assert len(data) > 2000


def test_gap_sweep_with_bounds_overlay(golden, tmp_path):
    out = tmp_path / "sweep_bounds.png"
    plot(
        PlotJob(
            inputs=(str(golden / "gap.csv"), str(golden / "bounds.csv")),
            kind="gap-sweep",
            out=str(out),
            title="gap versus damping",
        )
    )
    assert out.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_scaling_orbits_weights_render(golden, tmp_path):
    jobs = (
        PlotJob(inputs=(str(golden / "scaling.csv"),), kind="scaling",
                out=str(tmp_path / "scaling.png")),
        PlotJob(inputs=(str(golden / "orbits.csv"),), kind="orbits",
                out=str(tmp_path / "orbits.png")),
        PlotJob(inputs=(str(golden / "weights.csv"),), kind="weights",
                out=str(tmp_path / "weights.png")),
    )
    for job in jobs:
        plot(job)
        assert (tmp_path / job.out).read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_render_is_deterministic(golden, tmp_path):
    first = tmp_path / "first.png"
    second = tmp_path / "second.png"
    for out in (first, second):
        plot(
            PlotJob(
                inputs=(str(golden / "gap.csv"),),
                kind="gap-sweep",
                out=str(out),
                logy=True,
            )
        )
    assert first.read_bytes() == second.read_bytes()


def test_selection_filters_rows(golden, tmp_path):
    out = tmp_path / "selected.png"
    plot(
        PlotJob(
            inputs=(str(golden / "gap.csv"),),
            kind="gap-sweep",
            out=str(out),
            selects=(("n", "4"),),
        )
    )
    assert out.exists()


def test_missing_columns_are_named(tmp_path):
    path = tmp_path / "narrow.csv"
    path.write_text("n,gamma,pattern\n4,1.0,oooo\n", encoding="utf-8")
    job = PlotJob(inputs=(str(path),), kind="gap-sweep", out=str(tmp_path / "x.png"))
    with pytest.raises(SchemaError) as err:
        plot(job)
    message = str(err.value)
    assert "delta" in message and "stderr" in message


def test_empty_file_errors(tmp_path):
    path = tmp_path / "empty.csv"
    path.write_text("", encoding="utf-8")
    job = PlotJob(inputs=(str(path),), kind="gap-sweep", out=str(tmp_path / "x.png"))
    with pytest.raises(SchemaError, match="header"):
        plot(job)


def test_header_only_file_is_empty_selection(tmp_path):
    path = tmp_path / "bare.csv"
    path.write_text("n,gamma,pattern,delta,stderr\n", encoding="utf-8")
    job = PlotJob(inputs=(str(path),), kind="gap-sweep", out=str(tmp_path / "x.png"))
    with pytest.raises(SelectionError):
        plot(job)


def test_selection_on_unknown_column_is_schema_error(golden, tmp_path):
    job = PlotJob(
        inputs=(str(golden / "gap.csv"),),
        kind="gap-sweep",
        out=str(tmp_path / "x.png"),
        selects=(("bogus", "1"),),
    )
    with pytest.raises(SchemaError, match="bogus"):
        plot(job)


def test_selection_with_no_match_errors(golden, tmp_path):
    job = PlotJob(
        inputs=(str(golden / "gap.csv"),),
        kind="gap-sweep",
        out=str(tmp_path / "x.png"),
        selects=(("n", "99"),),
    )
    with pytest.raises(SelectionError):
        plot(job)


def test_rows_without_measured_gap_are_skipped(tmp_path):
    path = tmp_path / "partial.csv"
    path.write_text(
        "n,gamma,pattern,delta,stderr\n"
        "4,1.0,oooo,2.0,\n"
        "4,2.0,oooo,,\n",
        encoding="utf-8",
    )
    out = tmp_path / "partial.png"
    plot(PlotJob(inputs=(str(path),), kind="gap-sweep", out=str(out)))
    assert out.exists()
    all_null = tmp_path / "null.csv"
    all_null.write_text("n,gamma,pattern,delta,stderr\n4,1.0,oooo,,\n", encoding="utf-8")
    with pytest.raises(SelectionError, match="measured"):
        plot(PlotJob(inputs=(str(all_null),), kind="gap-sweep",
                     out=str(tmp_path / "y.png")))


def test_pattern_classification():
    assert classify_pattern("oooo") == "undoped"
    assert classify_pattern("xxxx") == "full"
    assert classify_pattern("xoxoxo") == "staggered"
    assert classify_pattern("xoxxox") == "dense"
    assert classify_pattern("ooxoox") == "other"
    assert classify_pattern("●○●●○●") == "dense"
    with pytest.raises(ValueError):
        classify_pattern("xyzt")


def test_overlay_selection_by_pattern():
    label, values = overlay_for("oooo", 4, [0.5, 1.0])
    assert "γ/2" in label
    assert values == [1.0, 2.0]
    label, values = overlay_for("xxxx", 4, [2.0])
    assert label == "γ+2"
    assert values == [4.0]
    assert overlay_for("ooxoox", 6, [1.0]) is None
    label, _ = overlay_for("xoxxox", 6, [1.0])
    assert "bound" in label


def test_cli_end_to_end(golden, tmp_path, capsys):
    out = tmp_path / "cli.png"
    code = main(
        ["--in", str(golden / "gap.csv"), "--kind", "gap-sweep", "--out", str(out),
         "--select", "pattern=oooo", "--title", "ring sweep"]
    )
    assert code == 0
    assert out.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_cli_error_paths(golden, tmp_path, capsys):
    missing = main(
        ["--in", str(tmp_path / "absent.csv"), "--kind", "gap-sweep",
         "--out", str(tmp_path / "x.png")]
    )
    assert missing == 2
    assert "error:" in capsys.readouterr().err
    bad_select = main(
        ["--in", str(golden / "gap.csv"), "--kind", "gap-sweep",
         "--out", str(tmp_path / "x.png"), "--select", "nonsense"]
    )
    assert bad_select == 2
    assert "COLUMN=VALUE" in capsys.readouterr().err
    with pytest.raises(SystemExit) as bad_kind:
        main(["--in", "a.csv", "--kind", "mystery", "--out", "b.png"])
    assert bad_kind.value.code == 2
