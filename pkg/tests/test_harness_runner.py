import json

import numpy as np
import pandas as pd
import pytest

import mipsbench.harness.roster as roster_module
from mipsbench.harness import (
    RESULT_COLUMNS,
    ExperimentReport,
    SweepSpec,
    check_roster,
    emit_report,
    manifest_path,
    read_results_csv,
    results_frame,
    run_replications,
)
from mipsbench.synthgen import SyntheticConfig

BASE = SyntheticConfig(num_actions=10, context_dim=3, embed_dims=2, embed_cardinality=3, seed=3)


def _spec(**changes):
    fields = dict(
        param="beta",
        values=(-1.0, 1.0),
        base=BASE,
        roster=("ips", "mips-true", "dm"),
        n=200,
        replications=4,
        ground_truth_m=2000,
    )
    fields.update(changes)
    return SweepSpec(**fields)


def test_single_replication_has_zero_variance():
    report = run_replications(_spec(replications=1))
    for row in report.aggregates():
        print(row)

        assert row.variance == 0.0
        assert row.squared_bias == row.mse


def test_aggregates_decompose_mse():
    report = run_replications(_spec())
    rows = report.aggregates()

    assert len(rows) == 6
    assert [(row.value, row.estimator) for row in rows[:3]] == [(-1.0, "ips"), (-1.0, "mips-true"), (-1.0, "dm")]
    for row in rows:
        assert abs(row.mse - (row.squared_bias + row.variance)) <= 1e-12 * max(1.0, row.mse)
        assert row.successes == 4
        assert row.failures == 0


def test_adding_replications_keeps_earlier_seeds():
    short = run_replications(_spec(replications=2))
    long = run_replications(_spec(replications=4))
    prefix = [row for row in long.estimates if row.seed < 2]

    assert list(short.estimates) == prefix


def test_logging_target_makes_ips_and_true_mips_agree():
    report = run_replications(_spec(roster=("ips", "mips-true"), target="logging", replications=2, values=(0.0,)))

    # on-policy both weight families are identically 1
    for seed in range(2):
        ips_row, mips_row = [row for row in report.estimates if row.seed == seed]
        assert ips_row.estimate == mips_row.estimate
        assert ips_row.ground_truth == report.ground_truths[0.0].value


def test_failing_estimator_is_recorded_not_fatal(monkeypatch):
    def boom(ctx):
        raise RuntimeError("model exploded")

    monkeypatch.setitem(roster_module.ESTIMATORS, "dm", boom)
    report = run_replications(_spec(replications=2))
    print("failures:", report.failures)

    assert len(report.failures) == 4
    assert report.failures[0].reason == "RuntimeError: model exploded"
    assert report.aggregate("dm", -1.0) is None
    assert report.aggregate("ips", -1.0).successes == 2
    assert report.max_failure_fraction() == 1.0


def test_emitted_files_are_byte_identical(tmp_path):
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    emit_report(run_replications(_spec(replications=2)), first)
    emit_report(run_replications(_spec(replications=2)), second)

    assert first.read_bytes() == second.read_bytes()
    manifest_a = json.loads(manifest_path(first).read_text())
    manifest_b = json.loads(manifest_path(second).read_text())
    del manifest_a["results"]
    del manifest_b["results"]
    assert manifest_a == manifest_b


@pytest.mark.slow
def test_worker_count_does_not_change_results(tmp_path):
    serial = run_replications(_spec(replications=3))
    parallel = run_replications(_spec(replications=3, workers=2))

    assert serial.estimates == parallel.estimates
    assert serial.ground_truths == parallel.ground_truths


def test_results_csv_round_trip(tmp_path):
    report = run_replications(_spec(replications=2))
    path, manifest = emit_report(report, tmp_path / "results.csv")
    frame = read_results_csv(path)
    expected = results_frame(report)

    assert list(frame.columns) == RESULT_COLUMNS
    assert frame["estimator"].tolist() == expected["estimator"].tolist()
    for column in RESULT_COLUMNS[2:]:
        assert np.array_equal(frame[column].to_numpy(dtype=float), expected[column].to_numpy(dtype=float), equal_nan=True)
    assert (frame["seed"] == -1).sum() == 6
    assert json.loads(manifest.read_text())["fingerprint"] == report.spec.fingerprint


def test_empty_report_writes_header_only(tmp_path):
    path, _ = emit_report(ExperimentReport(spec=_spec()), tmp_path / "empty.csv")

    assert path.read_text() == ",".join(RESULT_COLUMNS) + "\n"


def test_read_results_csv_errors(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b\n1,2\n")

    with pytest.raises(ValueError):
        read_results_csv(bad)
    with pytest.raises(FileNotFoundError, match="missing.csv"):
        read_results_csv(tmp_path / "missing.csv")


def test_emit_report_names_unwritable_path(tmp_path):
    with pytest.raises(OSError, match="no_such_dir"):
        emit_report(ExperimentReport(spec=_spec()), tmp_path / "no_such_dir" / "out.csv")


def test_resampled_environments_average_ground_truth():
    report = run_replications(_spec(replications=3, resample_environment=True, values=(1.0,)))
    truths = sorted({row.ground_truth for row in report.estimates})

    assert len(truths) == 3
    assert abs(report.ground_truths[1.0].value - np.mean(truths)) < 1e-12


def test_check_roster():
    assert check_roster(["ips", "mips", "ips"]) == ("ips", "mips")
    with pytest.raises(ValueError):
        check_roster([])
    with pytest.raises(ValueError, match="snips"):
        check_roster(["ips", "snips"])
