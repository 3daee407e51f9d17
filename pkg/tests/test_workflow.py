import asyncio
from pathlib import Path

import orjson
import pandas as pd
import pytest
import tomlkit
from typer.testing import CliRunner

from breakage_fvm.cases import TEST_CASE_1, TEST_CASE_2
from breakage_fvm.errors import ConfigError, DegenerateConvergenceError, RejectedStepError, StudyError
from breakage_fvm.workflow import (
    RunConfig,
    StudyConfig,
    StudyWorkflow,
    config_from_dict,
    load_config,
    parse_config,
    run_single,
    run_study,
    seed_check,
    serialize_config,
)
from main import app

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def _with(data, section, **values):
    updated = dict(data)
    updated[section] = {**data.get(section, {}), **values}
    return updated


@pytest.mark.parametrize("name, preset", [("test_case_1.toml", TEST_CASE_1), ("test_case_2.toml", TEST_CASE_2)])
def test_shipped_configs_match_presets(name, preset):
    cfg = load_config(CONFIGS / name)
    assert isinstance(cfg, StudyConfig)
    assert cfg == preset


def test_run_config_without_study_table(small_run_config):
    assert type(small_run_config) is RunConfig
    assert small_run_config.quadrature.order == 4
    assert small_run_config.output.cadence == 1


@pytest.mark.parametrize(
    "section, values, field",
    [
        ("study", {"levels": [30, 50]}, "study.levels"),
        ("study", {"levels": [30, 60, 100]}, "study.levels"),
        ("time", {"theta": 1.2}, "time.theta"),
        ("time", {"t_final": float("inf")}, "time.t_final"),
        ("time", {"policy": "fixed"}, "time"),
        ("kernel", {"lam": -1.0}, "kernel.lam"),
        ("kernel", {"kind": "brownian"}, "kernel"),
        ("mesh", {"cells": 0}, "mesh.cells"),
        ("mesh", {"ratio": 2.0}, "mesh"),
        ("domain", {"max": 1e-4}, "domain"),
        ("output", {"colour": "red"}, "output.colour"),
    ],
)
def test_invalid_documents_name_the_field(small_run_dict, section, values, field):
    with pytest.raises(ConfigError) as info:
        config_from_dict(_with(small_run_dict, section, **values))
    assert field in info.value.fields


def test_unknown_top_level_table(small_run_dict):
    with pytest.raises(ConfigError):
        config_from_dict({**small_run_dict, "extras": {"a": 1}})


def test_unbalanced_dirac_comb_rejected(small_run_dict):
    with pytest.raises(ConfigError) as info:
        config_from_dict(_with(small_run_dict, "breakage", fractions=[0.5, 0.6]))
    assert info.value.fields == ["breakage"]


def test_unrepresentable_geometric_mesh_is_a_config_error(small_run_dict):
    with pytest.raises(ConfigError) as info:
        config_from_dict(_with(small_run_dict, "mesh", kind="geometric", cells=2000, ratio=2.0))
    assert info.value.fields == ["mesh"]


def test_malformed_toml():
    with pytest.raises(ConfigError):
        parse_config("[domain\nmin = 1")


@pytest.mark.parametrize(
    "overrides",
    [
        {},
        {"mesh": {"kind": "geometric", "cells": 12, "ratio": 1.1}},
        {"kernel": {"kind": "piecewise_h2", "lam": 2.0, "alpha": 0.5, "zeta": 0.25, "eta": 0.5}},
        {"breakage": {"kind": "conditional_uniform"}},
        {"initial": {"kind": "tabulated", "volumes": [0.0, 5.0, 10.0], "values": [1.0, 0.5, 0.0]}},
        {"time": {"t_final": 0.5, "policy": "fixed", "dt": 1e-4, "max_steps": 10_000}},
        {"output": {"path": "out/series.json", "format": "json", "cadence": 5}},
    ],
)
def test_serialize_round_trip(small_run_dict, overrides):
    cfg = config_from_dict({**small_run_dict, **overrides})
    assert parse_config(serialize_config(cfg)) == cfg


@pytest.mark.parametrize("preset", [TEST_CASE_1, TEST_CASE_2])
def test_preset_round_trip(preset):
    assert parse_config(serialize_config(preset)) == preset


def test_run_single_at_time_zero(small_run_dict):
    frame = run_single(config_from_dict(_with(small_run_dict, "time", t_final=0.0)))
    assert len(frame) == 1
    assert frame.loc[0, "time"] == 0.0
    assert frame.loc[0, "dt_usage"] == 0.0
    assert frame.loc[0, "m0"] > 0 and frame.loc[0, "m1"] > 0


def test_run_single_series(small_run_config, tmp_path):
    path = tmp_path / "series.csv"
    frame = run_single(small_run_config, output=path)
    assert list(frame.columns) == ["time", "m0", "m1", "min_concentration", "dt_usage"]
    assert frame["time"].iloc[-1] == pytest.approx(0.05)
    assert (frame["m0"].diff().dropna() >= -1e-12).all()
    assert (frame["min_concentration"] >= 0).all()
    assert (frame["dt_usage"] <= 1.0 + 1e-12).all()
    written = pd.read_csv(path)
    assert len(written) == len(frame)


def test_run_single_cadence(small_run_dict):
    every = run_single(config_from_dict(small_run_dict))
    sparse = run_single(config_from_dict(_with(small_run_dict, "output", cadence=10)))
    assert len(sparse) < len(every)
    assert sparse["time"].iloc[-1] == every["time"].iloc[-1]


def test_run_single_rejects_fixed_step_above_limit(small_run_dict, tmp_path):
    cfg = config_from_dict(_with(small_run_dict, "time", policy="fixed", dt=0.5))
    path = tmp_path / "never.csv"
    with pytest.raises(RejectedStepError):
        run_single(cfg, output=path)
    assert not path.exists()


def test_run_study_writes_table(small_study_config, tmp_path):
    path = tmp_path / "study.csv"
    report = run_study(small_study_config, output=path)
    assert report.cell_counts == [8, 16, 32]
    assert len(report.eoc) == 1
    lines = path.read_text().splitlines()
    assert lines[0] == "cells,total_number,error,eoc"
    assert lines[1].endswith(",-,-")
    assert lines[2].endswith(",-")


def test_run_study_json(small_study_config, tmp_path):
    path = tmp_path / "study.json"
    report = run_study(small_study_config, output=path, fmt="json")
    payload = orjson.loads(path.read_bytes())
    assert payload["cell_counts"] == [8, 16, 32]
    assert payload["totals"] == report.totals


def test_study_is_independent_of_thread_count(small_study_config):
    sequential = run_study(small_study_config, threads=1)
    concurrent = run_study(small_study_config, threads=3)
    assert sequential.totals == concurrent.totals


def test_study_uses_one_step_factor_across_levels(small_study_config):
    plans = StudyWorkflow(small_study_config).plans
    factors = [plan.dt / plan.mesh.h_max for plan in plans]
    assert factors == [pytest.approx(factors[0], rel=1e-12)] * 3
    assert all(plan.dt <= plan.budget.dt_max for plan in plans)


def test_study_workflow_callbacks(small_study_config):
    started, finished = [], []

    async def on_start(plan):
        started.append(plan.mesh.cells)

    async def on_complete(result):
        finished.append(result.cells)

    workflow = StudyWorkflow(small_study_config, threads=2, on_level_start=on_start, on_level_complete=on_complete)
    report = asyncio.run(workflow.collect())
    assert sorted(started) == sorted(finished) == [8, 16, 32]
    assert [r.cells for r in workflow.results] == report.cell_counts


def test_study_failure_names_the_level(small_study_config):
    data = small_study_config.model_dump()
    data["time"].update(policy="fixed", dt=0.5)
    with pytest.raises(StudyError) as info:
        run_study(config_from_dict(data))
    assert info.value.cells in (8, 16, 32)
    assert isinstance(info.value.__cause__, RejectedStepError)


def test_study_of_zero_data_is_degenerate(small_study_config):
    data = small_study_config.model_dump()
    data["initial"] = {"kind": "zero"}
    with pytest.raises(DegenerateConvergenceError):
        run_study(config_from_dict(data))


@pytest.mark.parametrize("preset", [TEST_CASE_1, TEST_CASE_2])
def test_seed_check_passes(preset):
    assert seed_check(preset) <= 1e-12


def test_seed_check_with_conditional_uniform(small_run_dict):
    cfg = config_from_dict({**small_run_dict, "breakage": {"kind": "conditional_uniform"}})
    assert seed_check(cfg, seed=7) <= 1e-12


runner = CliRunner()


def test_cli_study(small_study_config, tmp_path):
    config = tmp_path / "study.toml"
    config.write_text(serialize_config(small_study_config))
    out = tmp_path / "table.csv"
    result = runner.invoke(app, ["study", "--config", str(config), "--output", str(out), "--seed-check", "--threads", "2"])
    assert result.exit_code == 0, result.output
    assert out.read_text().startswith("cells,total_number,error,eoc")


def test_cli_run_json(small_run_config, tmp_path):
    config = tmp_path / "run.toml"
    config.write_text(serialize_config(small_run_config))
    out = tmp_path / "series.json"
    result = runner.invoke(app, ["--log-level", "WARNING", "run", "--config", str(config), "--output", str(out), "--format", "json"])
    assert result.exit_code == 0, result.output
    assert set(orjson.loads(out.read_bytes())) == {"time", "m0", "m1", "min_concentration", "dt_usage"}


@pytest.mark.parametrize(
    "args",
    [["run", "--preset", "nope"], ["run"], ["study", "--config", "missing.toml"]],
)
def test_cli_config_errors_exit_with_code_2(args):
    assert runner.invoke(app, args).exit_code == 2


def test_cli_study_requires_levels(small_run_config, tmp_path):
    config = tmp_path / "run.toml"
    config.write_text(serialize_config(small_run_config))
    assert runner.invoke(app, ["study", "--config", str(config)]).exit_code == 2


def test_cli_unrepresentable_mesh_exits_with_code_2(small_run_dict, tmp_path):
    config = tmp_path / "run.toml"
    config.write_text(tomlkit.dumps(_with(small_run_dict, "mesh", kind="geometric", cells=2000, ratio=2.0)))
    assert runner.invoke(app, ["run", "--config", str(config)]).exit_code == 2
