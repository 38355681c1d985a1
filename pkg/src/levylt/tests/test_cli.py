import copy
import json

import pytest

from levylt.cli.commands import quadrature_settings
from levylt.cli.figures import figure_recipes, recipe_by_name, retarget
from levylt.cli.main import _join_values, run, run_figures
from levylt.cli.serializers import companion_path, read_curve
from levylt.cli.verify import (
    CheckResult,
    SuiteContext,
    _run_check,
    check_density_closed_forms,
    check_recurrence_probability,
    render_table,
)
from levylt.core.schemas import ConfigurationError
from levylt.core.utils import quadrature


def test_values_starting_with_minus_are_joined():
    assert _join_values(["density", "--grid", "-10:10:401", "--x", "-1", "--scaled"]) == [
        "density", "--grid=-10:10:401", "--x=-1", "--scaled",
    ]


def test_density_grid_contract(tmp_path):
    target = tmp_path / "p.csv"
    code = run(["density", "--lambda", "2", "--time", "1", "--grid", "-10:10:401", "--output", str(target)])
    assert code == 0
    columns, rows = read_curve(target)
    assert columns == ["x", "P"]
    assert len(rows) == 401
    assert float(rows[0][0]) == -10.0
    assert float(rows[200][0]) == 0.0
    assert float(rows[200][1]) == pytest.approx(0.28209479177387814, rel=1e-12)


def test_scaled_resolvent_header(tmp_path):
    target = tmp_path / "r.csv"
    assert run([
        "resolvent", "--lambda", "2", "--energy", "1", "--grid", "-5:5:4", "--scaled", "--output", str(target),
    ]) == 0
    columns, rows = read_curve(target)
    assert columns == ["x_bar", "R_bar"]
    assert len(rows) == 4


def test_csv_and_json_carry_identical_numbers(tmp_path):
    args = ["moment", "--lambda", "1", "--time", "1", "--grid", "-2:2:6"]
    assert run(args + ["--output", str(tmp_path / "mu.csv")]) == 0
    assert run(args + ["--format", "json", "--output", str(tmp_path / "mu.json")]) == 0
    csv_columns, csv_rows = read_curve(tmp_path / "mu.csv")
    json_columns, json_rows = read_curve(tmp_path / "mu.json")
    assert csv_columns == json_columns == ["x", "mu"]
    assert csv_rows == json_rows
    metadata = json.loads((tmp_path / "mu.json").read_text(encoding="utf-8"))["metadata"]
    assert metadata["lambda"] == 1.0
    assert metadata["endpoint"] == "free"


def test_simulate_is_reproducible(tmp_path):
    args = [
        "simulate", "--lambda", "1.5", "--paths", "3", "--steps", "200", "--time", "1",
        "--seed", "42", "--grid", "-2:2:21",
    ]
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(args + ["--output", str(first)]) == 0
    assert run(args + ["--output", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()
    assert companion_path(first, "profile").read_bytes() == companion_path(second, "profile").read_bytes()
    columns, rows = read_curve(first)
    assert columns == ["tau", "x_0", "x_1", "x_2"]
    assert len(rows) == 201


def test_simulate_moment_estimate(tmp_path):
    target = tmp_path / "m.csv"
    assert run([
        "simulate", "--lambda", "2", "--paths", "400", "--steps", "100", "--estimate", "moment",
        "--grid", "0:0.5:2", "--output", str(target),
    ]) == 0
    columns, rows = read_curve(target)
    assert columns == ["x", "mean", "std_error"]
    assert len(rows) == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["density", "--time", "1", "--grid", "-1:1:5", "--output", "p.csv"],
        ["density", "--lambda", "1.5", "--time", "1", "--grid", "-1:1:5", "--bogus", "--output", "p.csv"],
        ["density", "--lambda", "1.5", "--time", "1", "--grid", "1:5", "--output", "p.csv"],
        ["density", "--lambda", "2.5", "--time", "1", "--grid", "-1:1:5", "--output", "p.csv"],
        ["density", "--lambda", "1.5", "--time", "-1", "--grid", "-1:1:5", "--output", "p.csv"],
        ["ltdist", "--lambda", "1.5", "--time", "1", "--endpoint", "fixed", "--grid", "0:1:5", "--output", "w.csv"],
    ],
)
def test_usage_errors_exit_two(tmp_path, monkeypatch, argv):
    monkeypatch.chdir(tmp_path)
    assert run(argv) == 2
    assert not (tmp_path / "p.csv").exists()


def test_domain_error_names_parameter(tmp_path, capsys):
    code = run([
        "moment", "--lambda", "1.5", "--time", "1", "--order", "2", "--grid", "-1:1:3",
        "--output", str(tmp_path / "m.csv"),
    ])
    assert code == 2
    assert "--order" in capsys.readouterr().err


def test_figure_recipes(settings):
    recipes = {recipe.name: recipe for recipe in figure_recipes(settings)}
    assert sorted(recipes) == [f"fig{index}" for index in range(1, 8)]
    assert [run.model.lam for run in recipes["fig2"].runs] == [1.0, 1.5, 2.0]
    assert [run.model.lam for run in recipes["fig4"].runs] == [1.05, 1.5, 2.0]
    assert all(run.scaled for name in ("fig2", "fig3", "fig6") for run in recipes[name].runs)
    # λ = 1 curves avoid x̄ = 0
    assert 0.0 not in recipes["fig3"].runs[0].grid.points()
    assert recipes["fig6"].runs[0].x_b == 0.0
    assert all(run.command == "simulate" and run.paths == 1 for run in recipes["fig1"].runs)
    with pytest.raises(KeyError):
        recipe_by_name("fig9", settings)


def test_retarget(settings, tmp_path):
    run_config = recipe_by_name("fig2", settings).runs[0]
    moved = retarget(run_config, tmp_path)
    assert moved.output == str(tmp_path / "fig2_lambda1.csv")
    assert moved.model == run_config.model


def test_figures_command_writes_selected_recipe(settings, tmp_path):
    tuned = copy.deepcopy(settings)
    tuned["figures"]["grid_points"] = 11
    run_figures(str(tmp_path), "csv", ["fig2"], tuned, workers=1)
    written = sorted(path.name for path in tmp_path.iterdir())
    assert written == ["fig2_lambda1.5.csv", "fig2_lambda1.csv", "fig2_lambda2.csv"]
    columns, rows = read_curve(tmp_path / "fig2_lambda2.csv")
    assert columns == ["x_bar", "P_bar"]
    assert len(rows) == 11


def test_cheap_checks_pass(settings):
    ctx = SuiteContext(scale=1.0, settings=settings)
    assert check_density_closed_forms(ctx).passed
    assert check_recurrence_probability(ctx).passed


def test_raising_check_is_reported_as_failure(settings):
    def check_always_raises(ctx):
        raise RuntimeError("boom")

    result = _run_check(check_always_raises, SuiteContext(scale=1.0, settings=settings))
    assert result.name == "always raises"
    assert not result.passed
    assert "boom" in result.detail


def test_render_table():
    table = render_table([
        CheckResult(name="first", passed=True, detail="ok"),
        CheckResult(name="a longer name", passed=False, detail="off by 1e-3"),
    ])
    lines = table.splitlines()
    assert lines[0].startswith("CHECK")
    assert "PASS" in lines[1] and "FAIL" in lines[2]
    assert lines[2].endswith("off by 1e-3")


def test_evaluation_budget_from_config_stops_run(tmp_path, capsys, monkeypatch, settings):
    tuned = copy.deepcopy(settings)
    tuned["quadrature"]["evaluation_budget"] = 5
    monkeypatch.setattr("levylt.cli.main.load_config", lambda: tuned)
    target = tmp_path / "p.csv"
    code = run(["density", "--lambda", "1.5", "--time", "1", "--grid", "-1:1:3", "--output", str(target)])
    assert code == 2
    assert "evaluation" in capsys.readouterr().err
    assert not target.exists()


def test_quadrature_section_is_applied(monkeypatch):
    for key in ("limit", "limlst"):
        monkeypatch.setitem(quadrature._LIMITS, key, quadrature._LIMITS[key])
    options = quadrature_settings({"quadrature": {"rtol": 1e-8, "limit": 50, "limlst": 10}})
    assert options.rtol == 1e-8
    assert options.evaluation_budget is None
    assert quadrature.current_limits() == {"limit": 50, "limlst": 10}


def test_invalid_quadrature_section():
    with pytest.raises(ConfigurationError):
        quadrature_settings({"quadrature": {"rtol": -1.0}})
