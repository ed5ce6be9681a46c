from __future__ import annotations

from pathlib import Path

import pytest

from delay_harness import CONFIG_KEYS, ConfigError, load_config, load_preset, parse_config

BASE = """\
b_mm: 22.86
b_prime_mm: 15.8
length_cm: 15
lambda_mhz: 30
"""


def test_fig1a_preset() -> None:
    cfg = load_preset("fig1a")
    assert cfg.geometry().length == pytest.approx(0.15)
    assert cfg.lambda_hwhm == pytest.approx(3.0e7)
    assert cfg.models == ("sts", "pt", "bl")


def test_fig1b_preset() -> None:
    cfg = load_preset("fig1b")
    assert cfg.geometry().length == pytest.approx(0.20)
    assert cfg.lambda_hwhm == pytest.approx(5.0e7)


def test_presets_use_only_known_keys() -> None:
    for name in ("fig1a", "fig1b"):
        text = (Path(__file__).resolve().parents[1] / "src" / "delay_harness" / "presets" / f"{name}.yaml").read_text()
        keys = {line.split(":")[0] for line in text.splitlines() if line and not line.startswith("#")}
        assert keys == set(CONFIG_KEYS)


def test_unknown_scenario() -> None:
    with pytest.raises(ConfigError, match="fig1a"):
        load_preset("fig2")


def test_defaults_bracket_the_cutoff() -> None:
    cfg = parse_config(BASE)
    sweep = cfg.sweep()
    assert sweep.start == pytest.approx(6.557e9 + 6e7, rel=1e-3)
    assert sweep.stop == pytest.approx(10.487e9, rel=1e-3)
    assert sweep.step == pytest.approx(2e7)
    assert not cfg.baseline_averaging and not cfg.baseline_subtraction
    assert cfg.ell_m == 0.0


def test_models_are_parsed_and_ordered() -> None:
    assert parse_config(BASE + "models: BL, sts\n").models == ("sts", "bl")


def test_sweep_below_outer_cutoff_reports_line() -> None:
    with pytest.raises(ConfigError) as info:
        parse_config(BASE + "sweep_start_ghz: 6.0\n")
    assert "outer cutoff" in str(info.value)


def test_unknown_key_reports_line() -> None:
    with pytest.raises(ConfigError) as info:
        parse_config(BASE + "bandwidth: 3\n")
    assert info.value.line == 5
    assert "bandwidth" in str(info.value)


def test_invalid_value_reports_line() -> None:
    with pytest.raises(ConfigError) as info:
        parse_config(BASE + "sweep_step_mhz: -5\n")
    assert info.value.line == 5


def test_empty_model_list_is_rejected() -> None:
    with pytest.raises(ConfigError) as info:
        parse_config(BASE + "models: ''\n")
    assert info.value.line == 5


def test_malformed_yaml() -> None:
    with pytest.raises(ConfigError):
        parse_config("b_mm: [1,\n")


def test_overrides_are_validated(tmp_path: Path) -> None:
    path = tmp_path / "exp.yaml"
    path.write_text(BASE, encoding="utf-8")
    cfg = load_config(path)
    assert cfg.with_overrides(ell_m=1.5, models="pt").ell_m == 1.5
    assert cfg.with_overrides(models=None) is cfg
    with pytest.raises(ValueError):
        cfg.with_overrides(models="larmor")
