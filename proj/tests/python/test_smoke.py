import os

import numpy as np
import pytest

import evcharge


def preset(name):
    return evcharge.load_config(os.path.join(evcharge.preset_dir(), name + ".cfg"))


def test_projection_meets_budget_and_bounds():
    s = evcharge.FeasibleSet([0, 0, 0], [1, 1, 1], budget=1.5)
    x = np.array(evcharge.project([2.0, 0.5, -1.0], s))
    assert x.sum() == pytest.approx(1.5, abs=1e-12)
    assert np.all(x >= 0) and np.all(x <= 1)
    assert s.contains(list(x))
    assert evcharge.project(list(x), s) == pytest.approx(list(x), abs=1e-12)


def test_budget_multiplier_sign():
    s = evcharge.FeasibleSet([0, 0], [5, 5], budget=5.0)
    assert evcharge.budget_multiplier([3.0, 0.0], s) == pytest.approx(-1.0)


def test_invalid_set_raises():
    with pytest.raises(evcharge.InvalidSet):
        evcharge.FeasibleSet([1.0], [0.0])


def test_parse_error_reports_line():
    with pytest.raises(evcharge.ParseError, match="line 2"):
        evcharge.parse_config("[scenario]\nnope = 1\n")


def test_config_round_trip():
    cfg = preset("fig3_switching")
    again = evcharge.parse_config(cfg.to_text())
    assert again.to_text() == cfg.to_text()
    assert cfg.customers == 20 and cfg.slots == 24


def test_evaluate_switching_preset():
    cfg = preset("fig3_switching")
    cfg.days = 40
    ev = evcharge.evaluate(cfg)
    assert ev.horizon == 40
    regret = np.array(ev.company_regret)
    bound = np.array(ev.company_bound)
    assert np.all(regret <= bound + 1e-6)
    assert len(ev.total_load(40)) == 24
    assert all(c.passed for c in ev.checks if c.applicable)


def test_run_writes_outputs(tmp_path):
    cfg = preset("fig3_switching")
    cfg.days = 20
    man = evcharge.run(cfg, tmp_path)
    names = {f["name"] for f in man["files"]}
    assert {"regret.csv", "load_profiles.csv", "trace.csv"} <= names
    assert (tmp_path / "regret.csv").exists()
    assert "PASS" in man["log"]


def test_figure_presets():
    assert evcharge.figure_presets() == ["fig1_2", "fig3_4_5", "fig6", "fig7"]
