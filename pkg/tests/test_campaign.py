import json
import os

import numpy as np
import pytest

from mabc.campaign import (CampaignConfig, class_label, compare_means,
                           emit_convergence, read_manifest, read_means_csv,
                           read_summary_csv, run_campaign, summary_to_means,
                           write_means_csv, write_summary_csv)
from mabc.engine import MabcConfig
from mabc.stats import RunRecord


def _tiny_config(**overrides):
    fields = dict(problems=("F1",), dimension=10, group_size=2, runs=1, seed=3,
                  data_seed=5, engine=MabcConfig(max_evaluations=2000, scout_limit=40),
                  checkpoint_fractions=(0.04, 0.2, 1.0), trace_stride=100)
    fields.update(overrides)
    return CampaignConfig(**fields)


def test_config_defaults_reproduce_reference_protocol():
    config = CampaignConfig()
    assert config.problems == tuple(f"F{i}" for i in range(1, 21))
    assert config.dimension == 1000 and config.group_size == 50
    assert config.runs == 25
    assert config.checkpoints == (120_000, 600_000, 3_000_000)


def test_config_validation():
    with pytest.raises(ValueError):
        CampaignConfig(problems=())
    with pytest.raises(ValueError):
        CampaignConfig(problems=("F1", "F99"))
    with pytest.raises(ValueError):
        CampaignConfig(runs=0)
    with pytest.raises(ValueError):
        CampaignConfig(checkpoint_fractions=(0.0, 1.0))
    with pytest.raises(ValueError):
        CampaignConfig(checkpoint_fractions=(0.5, 1.5))
    with pytest.raises(ValueError):
        CampaignConfig(jobs=0)


def test_class_labels():
    assert class_label("F1") == "I"
    assert class_label("F8") == "II"
    assert class_label("F13") == "III"
    assert class_label("F18") == "IV"
    assert class_label("F19") == "V"


def test_smallest_campaign_files(tmp_path):
    out = tmp_path / "campaign"
    summary = run_campaign(_tiny_config(), str(out))
    assert sorted(os.listdir(out)) == ["convergence_F1.csv", "manifest.json",
                                       "summary.csv", "trace_F1_run00.csv"]
    assert summary.checkpoints("F1") == [80, 400, 2000]
    row = summary.rows[("F1", 2000)]
    assert row.runs == 1 and row.best == row.mean == row.median == row.worst


def test_manifest_replay_is_byte_identical(tmp_path):
    first = tmp_path / "first"
    run_campaign(_tiny_config(), str(first))
    config = read_manifest(first / "manifest.json")
    second = tmp_path / "second"
    run_campaign(config, str(second))
    for name in ("trace_F1_run00.csv", "summary.csv", "convergence_F1.csv"):
        assert (first / name).read_bytes() == (second / name).read_bytes()


def test_manifest_captures_every_knob(tmp_path):
    out = tmp_path / "campaign"
    run_campaign(_tiny_config(), str(out))
    manifest = json.loads((out / "manifest.json").read_text())
    config = manifest["config"]
    for field in CampaignConfig.FIELDS:
        assert field in config
    for field in MabcConfig().__slots__:
        assert field in config["engine"]
    assert "build" in manifest


def test_campaign_seeds_are_base_plus_run_index(tmp_path):
    out = tmp_path / "campaign"
    run_campaign(_tiny_config(runs=3), str(out))
    config = _tiny_config(runs=3)
    from mabc.campaign import execute_runs
    records = execute_runs(config)["F1"]
    assert [r.seed for r in records] == [3, 4, 5]


def test_parallel_jobs_match_sequential_content():
    sequential = _tiny_config(runs=2)
    parallel = _tiny_config(runs=2, jobs=2)
    from mabc.campaign import execute_runs
    assert execute_runs(sequential) == execute_runs(parallel)


def test_trace_csv_round_trip(tmp_path):
    out = tmp_path / "campaign"
    run_campaign(_tiny_config(), str(out))
    rows = (out / "trace_F1_run00.csv").read_text().strip().splitlines()
    assert rows[0] == "evaluations,best_error"
    errors = [float(line.split(",")[1]) for line in rows[1:]]
    assert all(b <= a for a, b in zip(errors, errors[1:]))


def test_summary_csv_round_trips_without_loss(tmp_path):
    out = tmp_path / "campaign"
    summary = run_campaign(_tiny_config(runs=2), str(out))
    reread = read_summary_csv(out / "summary.csv")
    assert reread == summary
    target = tmp_path / "again.csv"
    write_summary_csv(reread, target)
    assert target.read_bytes() == (out / "summary.csv").read_bytes()


def test_means_csv_round_trip(tmp_path):
    means = {"alpha": {"F1": 1.25e-7, "F2": 3.0},
             "beta": {"F1": 2.5, "F2": 1.0 / 3.0}}
    path = tmp_path / "means.csv"
    write_means_csv(means, path)
    assert read_means_csv(path) == means


# --- emit_convergence ---------------------------------------------------------

def _fake_record(seed, grid, errors):
    trace = list(zip(grid, errors))
    return RunRecord("F1", seed, [(grid[-1], errors[-1])], errors[-1], trace)


def test_emit_convergence_mean_min_max(tmp_path):
    grid = (10, 20, 30)
    records = [_fake_record(0, grid, [4.0, 2.0, 1.0]),
               _fake_record(1, grid, [6.0, 4.0, 3.0])]
    path = tmp_path / "conv.csv"
    emit_convergence(records, stride=10, path=path)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "evaluations,mean_best_error,min_best_error,max_best_error"
    first = lines[1].split(",")
    assert first[0] == "10" and float(first[1]) == 5.0
    assert float(first[2]) == 4.0 and float(first[3]) == 6.0
    means = [float(line.split(",")[1]) for line in lines[1:]]
    assert all(b <= a for a, b in zip(means, means[1:]))


def test_emit_convergence_stride_equal_budget_keeps_checkpoints_only(tmp_path):
    grid = (10, 20, 25, 30)
    records = [_fake_record(0, grid, [4.0, 2.0, 1.5, 1.0])]
    path = tmp_path / "conv.csv"
    emit_convergence(records, stride=30, path=path, checkpoints=(25, 30))
    rows = [line.split(",")[0] for line in path.read_text().strip().splitlines()[1:]]
    assert rows == ["25", "30"]


def test_emit_convergence_rejects_mismatched_grids(tmp_path):
    records = [_fake_record(0, (10, 20), [2.0, 1.0]),
               _fake_record(1, (10, 30), [2.0, 1.0])]
    with pytest.raises(ValueError):
        emit_convergence(records, stride=10, path=tmp_path / "x.csv")


# --- comparison -----------------------------------------------------------------

def test_compare_two_identical_summaries_no_rejection(tmp_path):
    out = tmp_path / "campaign"
    summary = run_campaign(_tiny_config(runs=2), str(out))
    means = summary_to_means(summary, 2000)
    table = compare_means({"one": {"F1": 1.0, "F2": 2.0},
                           "two": {"F1": 1.0, "F2": 2.0}})
    assert not table.friedman.reject
    assert table.class_points is None  # points need exactly 4 algorithms
    assert means  # summary conversion produced a column


def test_compare_mismatched_problem_sets_error():
    with pytest.raises(ValueError):
        compare_means({"one": {"F1": 1.0, "F2": 2.0},
                       "two": {"F1": 1.0, "F3": 2.0}})


def test_compare_missing_checkpoint_error(tmp_path):
    out = tmp_path / "campaign"
    summary = run_campaign(_tiny_config(), str(out))
    with pytest.raises(ValueError):
        summary_to_means(summary, 999_999)


def test_compare_four_way_points_by_class():
    means = {
        "a": {"F1": 1.0, "F2": 1.0, "F19": 4.0, "F20": 4.0},
        "b": {"F1": 2.0, "F2": 2.0, "F19": 3.0, "F20": 3.0},
        "c": {"F1": 3.0, "F2": 3.0, "F19": 2.0, "F20": 2.0},
        "d": {"F1": 4.0, "F2": 4.0, "F19": 1.0, "F20": 1.0},
    }
    table = compare_means(means)
    assert table.class_points["I"] == {"a": 50, "b": 36, "c": 30, "d": 24}
    assert table.class_points["V"] == {"a": 24, "b": 30, "c": 36, "d": 50}
    assert table.totals == {"a": 74, "b": 66, "c": 66, "d": 74}
    rendered = table.render()
    assert "friedman" in rendered and "I" in rendered


def test_comparison_table_csv(tmp_path):
    means = {name: {"F1": float(i), "F2": float(-i)}
             for i, name in enumerate("abcd")}
    table = compare_means(means)
    path = tmp_path / "comparison.csv"
    table.write_csv(path)
    header = path.read_text().splitlines()[0]
    assert header.startswith("algorithm,") and "total" in header
