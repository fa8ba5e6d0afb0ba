from __future__ import annotations

import json
from math import comb

import pytest

from conftest import disjoint_periodic
from tgtasks import export_ctdg_events, export_dataset, read_metrics_report
from tgtasks.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def gen_small_pdet(capsys, out_dir, seed=7):
    return run_cli(
        capsys,
        "gen", "periodic-det", "--k", "2", "--n", "1", "--periods", "6",
        "--nodes", "20", "--p", "0.2", "--seed", str(seed),
        "--split", "periods:4,1,1", "--out", str(out_dir),
    )


def test_gen_statistics_table_example(capsys, tmp_path):
    code, out, _ = run_cli(
        capsys,
        "gen", "periodic-det", "--k", "2", "--n", "1", "--periods", "48",
        "--nodes", "100", "--p", "0.01", "--seed", "7", "--out", str(tmp_path / "d"),
    )
    assert code == 0
    manifest = json.loads(out)
    assert manifest["num_timesteps"] == 96
    assert manifest["split"] == {"train_end": 80, "val_end": 88, "num_timesteps": 96}


def test_gen_writes_all_files_and_validates(capsys, tmp_path):
    d = tmp_path / "d"
    code, out, _ = gen_small_pdet(capsys, d)
    assert code == 0
    for name in ("edges.csv", "manifest.json", "events.csv"):
        assert (d / name).is_file()
    assert run_cli(capsys, "validate", "--dataset", str(d))[0] == 0
    code, out, _ = run_cli(capsys, "stats", "--dataset", str(d))
    assert code == 0
    stats = json.loads(out)
    assert stats["num_timesteps"] == 12
    assert stats["family"] == "periodic-det"


def test_gen_is_byte_identical_across_runs(capsys, tmp_path):
    gen_small_pdet(capsys, tmp_path / "a")
    gen_small_pdet(capsys, tmp_path / "b")
    for name in ("edges.csv", "manifest.json", "events.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_gen_seed_changes_output(capsys, tmp_path):
    gen_small_pdet(capsys, tmp_path / "a", seed=7)
    gen_small_pdet(capsys, tmp_path / "b", seed=8)
    assert (tmp_path / "a" / "edges.csv").read_bytes() != (tmp_path / "b" / "edges.csv").read_bytes()


def test_gen_rejects_zero_lag(capsys, tmp_path):
    code, _, err = run_cli(
        capsys, "gen", "ce", "--lag", "0", "--seed", "1", "--out", str(tmp_path / "x")
    )
    assert code == 1
    assert "lag" in err


def test_gen_uses_env_output_root(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("TGTASKS_OUT", str(tmp_path))
    code, out, _ = run_cli(
        capsys,
        "gen", "ce", "--lag", "2", "--nodes", "15", "--p", "0.2",
        "--effect-steps", "10", "--seed", "3",
    )
    assert code == 0
    assert (tmp_path / "ce_lag2_seed3" / "manifest.json").is_file()


def test_gen_requires_out_without_env(capsys, monkeypatch):
    monkeypatch.delenv("TGTASKS_OUT", raising=False)
    code, _, err = run_cli(
        capsys, "gen", "ce", "--lag", "2", "--effect-steps", "10", "--seed", "3"
    )
    assert code == 1
    assert "--out" in err


def test_validate_tampered_dataset_fails(capsys, tmp_path):
    d = tmp_path / "d"
    gen_small_pdet(capsys, d)
    edges = d / "edges.csv"
    lines = edges.read_text().split("\n")
    del lines[1]
    edges.write_text("\n".join(lines))
    code, _, err = run_cli(capsys, "validate", "--dataset", str(d))
    assert code == 1
    assert "directed edges" in err


def test_baseline_persistence_on_disjoint_dataset(capsys, tmp_path):
    n = 8
    g, split = disjoint_periodic(2, n)
    export_dataset(g, split, tmp_path)
    export_ctdg_events(g, tmp_path)
    code, out, _ = run_cli(
        capsys,
        "baseline", "--method", "persistence", "--dataset", str(tmp_path),
        "--changepoints",
    )
    assert code == 0
    rows, footer = read_metrics_report(tmp_path / "metrics_report.csv")
    assert footer["mean_all"] == f"{(n - 1) / n:.12f}"
    assert footer["mean_changepoints"] == "0.000000000000"
    assert len(rows) == 16 * n
    assert f"mean_all={(n - 1) / n:.12f}" in out


def test_baseline_edgebank_constant_across_n(capsys, tmp_path):
    means = set()
    for n in (1, 2, 4):
        d = tmp_path / f"n{n}"
        g, split = disjoint_periodic(2, n)
        export_dataset(g, split, d)
        code, _, _ = run_cli(capsys, "baseline", "--method", "edgebank", "--dataset", str(d))
        assert code == 0
        _, footer = read_metrics_report(d / "metrics_report.csv")
        means.add(footer["mean_all"])
    assert means == {f"{2 / 3:.12f}"}


def test_baseline_requires_restrict_node_for_ce(capsys, tmp_path):
    d = tmp_path / "ce"
    run_cli(
        capsys,
        "gen", "ce", "--lag", "2", "--nodes", "15", "--p", "0.2",
        "--effect-steps", "17", "--seed", "3", "--out", str(d),
    )
    code, _, err = run_cli(capsys, "baseline", "--method", "persistence", "--dataset", str(d))
    assert code == 1
    assert "--restrict-node" in err
    code, _, _ = run_cli(
        capsys,
        "baseline", "--method", "persistence", "--dataset", str(d),
        "--restrict-node", "0",
    )
    assert code == 0


def test_baseline_unknown_method_is_usage_error(capsys, tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["baseline", "--method", "nope", "--dataset", str(tmp_path)])
    assert exc.value.code == 2


def test_eval_perfect_and_empty_predictions(capsys, tmp_path):
    d = tmp_path / "d"
    gen_small_pdet(capsys, d)
    from tgtasks import import_dataset

    g, split, _ = import_dataset(d)
    perfect = tmp_path / "perfect.csv"
    lines = ["t,u,v"]
    for t in split.evaluated:
        lines += [f"{t},{u},{v}" for u, v in sorted(g[t].edges)]
    perfect.write_text("\n".join(lines) + "\n")
    code, out, _ = run_cli(capsys, "eval", "--pred", str(perfect), "--dataset", str(d))
    assert code == 0
    assert "mean_all=1.000000000000" in out

    empty = tmp_path / "empty.csv"
    empty.write_text("t,u,v\n")
    code, out, _ = run_cli(capsys, "eval", "--pred", str(empty), "--dataset", str(d))
    assert code == 0
    assert "mean_all=0.000000000000" in out


def test_eval_all_positive_matches_closed_form(capsys, tmp_path):
    d = tmp_path / "d"
    g, split = disjoint_periodic(2, 2, num_periods=6, edges_each=3, num_nodes=8)
    export_dataset(g, split, d)
    pred = tmp_path / "allpos.csv"
    lines = ["t,u,v,score"]
    for t in split.evaluated:
        lines += [f"{t},{u},{v},1.0" for u in range(8) for v in range(u + 1, 8)]
    pred.write_text("\n".join(lines) + "\n")
    code, _, _ = run_cli(capsys, "eval", "--pred", str(pred), "--dataset", str(d))
    assert code == 0
    rows, _ = read_metrics_report(d / "metrics_report.csv")
    expected = 2 * 3 / (3 + comb(8, 2))
    assert all(f1 == pytest.approx(expected) for _, f1, _ in rows)


def test_eval_node_mode_uses_manifest_role(capsys, tmp_path):
    d = tmp_path / "ce"
    run_cli(
        capsys,
        "gen", "ce", "--lag", "2", "--nodes", "15", "--p", "0.2",
        "--effect-steps", "17", "--seed", "3", "--out", str(d),
    )
    from tgtasks import import_dataset

    g, split, _ = import_dataset(d)
    pred = tmp_path / "memory.csv"
    lines = ["t,u,v"]
    for t in split.evaluated:
        lines += [f"{t},0,{m}" for m in sorted(g[t].neighbors(0))]
    pred.write_text("\n".join(lines) + "\n")
    code, out, _ = run_cli(
        capsys, "eval", "--pred", str(pred), "--dataset", str(d), "--mode", "node"
    )
    assert code == 0
    assert "mean_all=1.000000000000" in out


def test_eval_rejects_malformed_predictions(capsys, tmp_path):
    d = tmp_path / "d"
    gen_small_pdet(capsys, d)
    bad = tmp_path / "bad.csv"
    bad.write_text("t,u,v\n0,1,notanint\n")
    code, _, err = run_cli(capsys, "eval", "--pred", str(bad), "--dataset", str(d))
    assert code == 1
    bad.write_text("t,u,v,score\n0,1,2,7.5\n")
    code, _, err = run_cli(capsys, "eval", "--pred", str(bad), "--dataset", str(d))
    assert code == 1
    assert "score" in err


def test_changepoints_command(capsys):
    code, out, _ = run_cli(capsys, "changepoints", "--k", "2", "--n", "3", "--range", "0,12")
    assert code == 0
    assert out.split() == ["3", "6", "9"]


def test_changepoints_rejects_bad_range(capsys):
    code, _, err = run_cli(capsys, "changepoints", "--k", "2", "--n", "3", "--range", "5")
    assert code == 1
