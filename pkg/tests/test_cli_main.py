import json

import pytest

import mipsbench.cli.main as cli_main
import mipsbench.harness.roster as roster_module
from mipsbench.cli.main import build_parser, main, sweep_spec_from_args
from mipsbench.harness import read_results_csv
from mipsbench.oracle import OracleCheck

SMALL = ["--num-actions", "10", "--context-dim", "3", "--embed-dims", "2", "--embed-cardinality", "3", "--seed", "1"]


def _sweep_args(out, *extra):
    return ["sweep", "--param", "beta", "--values=0,1", "--n", "200", "--reps", "2", "--ground-truth-m", "1000", "--out", str(out), *SMALL, *extra]


def test_no_command_prints_help(capsys):
    code = main([])
    captured = capsys.readouterr()

    assert code == 1
    assert "usage: mipsbench" in captured.out


def test_sweep_writes_results_and_manifest(tmp_path, capsys):
    out = tmp_path / "beta.csv"
    code = main(_sweep_args(out, "--estimators", "ips,mips-true"))
    captured = capsys.readouterr()
    print(captured.out)

    assert code == 0
    assert "SWEEP SUMMARY" in captured.out
    assert len(read_results_csv(out)) == 2 * 2 * 2 + 2 * 2
    manifest = json.loads((tmp_path / "beta.manifest.json").read_text())
    assert manifest["spec"]["roster"] == ["ips", "mips-true"]
    assert manifest["spec"]["base"]["num_actions"] == 10


def test_sweep_exits_2_when_most_seeds_fail(tmp_path, monkeypatch):
    def boom(ctx):
        raise RuntimeError("always fails")

    monkeypatch.setitem(roster_module.ESTIMATORS, "ips", boom)

    assert main(_sweep_args(tmp_path / "out.csv", "--estimators", "ips,mips-true")) == 2


def test_sweep_rejects_unknown_estimator(tmp_path, capsys):
    code = main(_sweep_args(tmp_path / "out.csv", "--estimators", "ips,snips"))
    captured = capsys.readouterr()

    assert code == 1
    assert "Error:" in captured.err
    assert "snips" in captured.err


def test_sweep_needs_param_or_experiment(tmp_path):
    assert main(["sweep", "--out", str(tmp_path / "out.csv")]) == 1


def test_experiment_preset_with_overrides():
    args = build_parser().parse_args(["sweep", "--experiment", "withheld", "--reps", "3", "--n", "500", "--out", "x.csv"])
    spec = sweep_spec_from_args(args)

    assert spec.param == "withheld_count"
    assert spec.values == (0, 10, 18)
    assert spec.base.embed_dims == 20
    assert spec.base.embed_cardinality == 2
    assert spec.replications == 3
    assert spec.n == 500


def test_sigma_alias_and_full_grid():
    args = build_parser().parse_args(["sweep", "--param", "epsilon", "--full-grid", "--sigma", "1.5", "--out", "x.csv"])
    spec = sweep_spec_from_args(args)

    assert spec.base.reward_noise == 1.5
    assert spec.values == (0.0, 0.2, 0.4, 0.6, 0.8, 1.0)


def test_oracle_check_exit_code(monkeypatch, capsys):
    monkeypatch.setattr(cli_main, "run_oracle_checks", lambda **kwargs: [OracleCheck("always", True, "ok")])
    assert main(["oracle-check"]) == 0

    monkeypatch.setattr(cli_main, "run_oracle_checks", lambda **kwargs: [OracleCheck("never", False, "gap 1.0")])
    assert main(["oracle-check"]) == 2
    assert "[FAIL] never" in capsys.readouterr().out


def test_sample_then_bootstrap_from_file(tmp_path, capsys):
    logged = tmp_path / "logged.csv"
    cdf_out = tmp_path / "cdf.csv"

    assert main(["sample", "--n", "300", "--out", str(logged), *SMALL]) == 0
    code = main(
        [
            "bootstrap-cdf",
            "--logged-data",
            str(logged),
            "--size",
            "300",
            "--n",
            "100",
            "--reps",
            "3",
            "--estimators",
            "ips,dm",
            "--out",
            str(cdf_out),
        ]
    )
    captured = capsys.readouterr()

    assert code == 0
    assert "RELATIVE SQUARED ERROR" in captured.out
    assert cdf_out.read_text().splitlines()[0] == "estimator,rank,relative_squared_error,cdf"


def test_bootstrap_rejects_sidecar_without_config(tmp_path, capsys):
    from mipsbench.ingest import DatasetReader, write_dataset_csv

    logged = tmp_path / "logged.csv"
    assert main(["sample", "--n", "50", "--out", str(logged), *SMALL]) == 0
    plain = tmp_path / "plain.csv"
    write_dataset_csv(DatasetReader.from_file(logged).read(), plain)

    assert main(["bootstrap-cdf", "--logged-data", str(plain), "--reps", "2"]) == 1
    assert "generating config" in capsys.readouterr().err


def test_bootstrap_rejects_sidecar_missing_cardinalities(tmp_path, capsys):
    logged = tmp_path / "logged.csv"
    assert main(["sample", "--n", "50", "--out", str(logged), *SMALL]) == 0
    meta_file = tmp_path / "logged.meta.json"
    meta = json.loads(meta_file.read_text())
    del meta["embedding_cardinalities"]
    meta_file.write_text(json.dumps(meta))

    assert main(["bootstrap-cdf", "--logged-data", str(logged), "--reps", "2"]) == 1
    assert "embedding_cardinalities" in capsys.readouterr().err


def test_bootstrap_from_file_warns_about_ignored_flags(tmp_path, capsys, caplog):
    logged = tmp_path / "logged.csv"
    assert main(["sample", "--n", "300", "--out", str(logged), *SMALL]) == 0

    args = ["bootstrap-cdf", "--logged-data", str(logged), "--size", "300", "--n", "100", "--reps", "2", "--estimators", "ips,dm"]
    with caplog.at_level("WARNING", logger="mipsbench.cli.main"):
        code = main([*args, "--seed", "9", "--beta", "2"])
    print(caplog.text)

    assert code == 0
    assert "Ignoring --beta, --seed" in caplog.text
    assert "logged.meta.json" in caplog.text


def test_missing_input_file(tmp_path, capsys):
    assert main(["bootstrap-cdf", "--logged-data", str(tmp_path / "nope.csv")]) == 1
    assert "nope" in capsys.readouterr().err


def test_slope_demo(capsys):
    code = main(["slope-demo", "--n", "200", "--ground-truth-m", "1000", "--num-actions", "20", "--embed-dims", "3"])
    captured = capsys.readouterr()

    assert code == 0
    assert "Selected dims" in captured.out
    assert "MIPSBENCH" in captured.out
