import pytest
import yaml

from bridgestep.config import load_config, parse_config
from bridgestep.exceptions import ConfigurationError


def test_defaults_reproduce_full_grid():
    cfg = parse_config({})
    grid = cfg.to_grid()
    assert len(grid.bridges) == 4
    assert len(grid.axle_distances_m) == 12
    assert len(grid.speeds_m_s) == 34
    assert grid.dt_grid_s == (0.05, 0.025, 0.015, 0.01, 0.005, 0.0025)
    assert grid.axle_load_newton == pytest.approx(196200.0)
    assert "speeds" in cfg.defaults_used and "bridges" in cfg.defaults_used


def test_explicit_values(tmp_path):
    path = tmp_path / "study.yaml"
    path.write_text(yaml.safe_dump({
        "bridges": [{"span_m": 15, "f1_hz": 8, "damping_ratio": 0.02, "mode_count": 3}],
        "train": {"axle_load_ton": 18, "axle_count": 8, "axle_spacing_m": 13},
        "speeds_kmh": [360, 375],
        "dt_grid_s": [0.01, 0.005],
        "workers": 2,
    }))
    cfg = load_config(path)
    grid = cfg.to_grid()
    assert grid.bridges[0].damping_ratio == 0.02
    assert grid.bridges[0].mass_per_length_kg_m == 1000.0
    assert grid.speeds_m_s == pytest.approx((100.0, 375 / 3.6))
    assert grid.axle_distances_m == (13.0,)
    assert cfg.workers == 2
    assert "bridges[0].mass_per_length_kg_m" in cfg.defaults_used


@pytest.mark.parametrize("raw, where", [
    ({"speeds_kmh": []}, "speeds_kmh"),
    ({"bridges": [{"span_m": 10, "f1_hz": 12, "stiffness": 1}]}, "bridges/0"),
    ({"speed_kmh": [100]}, "<root>"),
    ({"dt_grid_s": [0.01, 0.02]}, "dt_grid_s"),
    ({"dt_grid_s": [0.01]}, "dt_grid_s"),
    ({"train": {"axle_load_ton": 0}}, "train/axle_load_ton"),
    ({"speeds_kmh": [100], "speeds": {"start_kmh": 1, "step_m_s": 1, "count": 1}}, "<root>"),
    ({"bridges": [{"span_m": 10, "f1_hz": 12, "damping_ratio": 1.0}]}, "bridges/0/damping_ratio"),
])
def test_rejects(raw, where):
    with pytest.raises(ConfigurationError, match=where):
        parse_config(raw)


def test_malformed_file(tmp_path):
    p = tmp_path / "bad.yaml"
    p.write_text("bridges: [\n")
    with pytest.raises(ConfigurationError):
        load_config(p)
    with pytest.raises(ConfigurationError):
        load_config(tmp_path / "missing.yaml")


def test_hash_stable():
    assert parse_config({"speeds_kmh": [100]}).config_hash() == parse_config({"speeds_kmh": [100]}).config_hash()
    assert parse_config({"speeds_kmh": [100]}).config_hash() != parse_config({"speeds_kmh": [101]}).config_hash()
