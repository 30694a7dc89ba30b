"""YAML scenario loading: key checking, unit conversion, overrides."""

import math
import os
import textwrap

import numpy as np
import pytest

from uavsim.config import apply_overrides, config_from_dict, load_config, load_scenario
from uavsim.disturbances import sample
from uavsim.errors import ConfigError

CONFIG_DIR = os.path.join(os.path.dirname(__file__), os.pardir, "configs")


def write(tmp_path, text):
    path = tmp_path / "scenario.yaml"
    path.write_text(textwrap.dedent(text), encoding="utf-8")
    return str(path)


def test_canned_scenarios_load_and_validate():
    for stem, controller in (("paper_default", "adp_asmc"), ("ftsm_gst_airspeed", "ftsm_gst")):
        cfg = load_scenario(os.path.join(CONFIG_DIR, f"{stem}.yaml"))
        assert cfg.name == stem
        assert cfg.controller == controller
        assert cfg.duration == 120.0 and cfg.dt == 1e-3
        assert cfg.aero_force == "model_gravity"


def test_empty_config_gives_pure_defaults(tmp_path):
    cfg = load_scenario(write(tmp_path, ""))
    assert cfg.name == "scenario"
    assert cfg.integrator == "rk4"
    assert cfg.adp.beta_w == 0.5


def test_unknown_top_level_key(tmp_path):
    with pytest.raises(ConfigError, match="durations"):
        load_scenario(write(tmp_path, "durations: 10\n"))


def test_unknown_section_key_reports_dotted_path(tmp_path):
    with pytest.raises(ConfigError, match=r"uav\.mass"):
        load_scenario(write(tmp_path, "uav:\n  mass: 2.0\n"))


def test_unknown_signal_key_reports_indexed_path(tmp_path):
    text = """
    disturbances:
      mode: custom
      d_m:
        - {type: sine, amplitude: 1.0, omega: 0.5, phaze: 0.0}
        - {type: zero}
        - {type: zero}
    """
    with pytest.raises(ConfigError, match=r"d_m\[0\]\.phaze"):
        load_scenario(write(tmp_path, text))


def test_validator_errors_carry_source(tmp_path):
    with pytest.raises(ConfigError, match="kappa0"):
        load_scenario(write(tmp_path, "attitude:\n  kappa0: 1.5\n"))
    with pytest.raises(ConfigError, match="dt"):
        load_scenario(write(tmp_path, "dt: -0.001\n"))
    with pytest.raises(ConfigError, match="integrator"):
        load_scenario(write(tmp_path, "integrator: leapfrog\n"))


def test_rate_unit_scales_the_standard_profile(tmp_path):
    deg = load_scenario(write(tmp_path, "disturbances: {mode: standard, rate_unit: deg}\n"))
    rad = load_scenario(write(tmp_path, "disturbances: {mode: standard, rate_unit: rad}\n"))
    t = 9.0
    d = np.asarray(sample(deg.disturbances, t).d_u)
    r = np.asarray(sample(rad.disturbances, t).d_u)
    np.testing.assert_allclose(d, np.radians(1.0) * r, rtol=1e-12)


def test_disturbance_mode_none(tmp_path):
    cfg = load_scenario(write(tmp_path, "disturbances: {mode: none}\n"))
    got = sample(cfg.disturbances, 50.0)
    assert np.all(np.asarray(got.d_m) == 0.0) and got.d_v == 0.0


def test_custom_disturbances_with_rate_unit(tmp_path):
    text = """
    disturbances:
      mode: custom
      rate_unit: deg
      d_u:
        - {type: sine, amplitude: 2.1, omega: 0.165}
        - {type: zero}
        - {type: zero}
      d_v: {type: piecewise, breakpoints: [6.0], parts: [{type: zero}, {type: sine, amplitude: 5.0, omega: 0.2}]}
    """
    cfg = load_scenario(write(tmp_path, text))
    got = sample(cfg.disturbances, 10.0)
    assert got.d_u[0] == pytest.approx(math.radians(2.1) * math.sin(1.65), rel=1e-12)
    assert got.d_v == pytest.approx(5.0 * math.sin(2.0), rel=1e-12)
    assert sample(cfg.disturbances, 5.0).d_v == 0.0


def test_reference_angle_unit_degrees(tmp_path):
    text = """
    reference:
      angle_unit: deg
      phi: {type: step, start: 0.0, end: 10.0, t_step: 1.0, duration: 0.5}
      airspeed: {type: constant, value_const: 15.0}
    """
    cfg = load_scenario(write(tmp_path, text))
    assert cfg.reference.phi.end == pytest.approx(math.radians(10.0))
    assert cfg.reference.airspeed.value(0.0) == 15.0  # airspeed never converted
    # untouched channels keep their defaults
    assert cfg.reference.theta.value(10.0) == pytest.approx(math.radians(5.0))


def test_initial_conditions_section(tmp_path):
    text = """
    initial:
      theta_deg: [1.0, -2.0, 3.0]
      omega_deg: [0.0, 0.0, 0.0]
      v0: 1.5
    """
    cfg = load_scenario(write(tmp_path, text))
    state = cfg.initial.state()
    np.testing.assert_allclose(state.Theta, np.radians([1.0, -2.0, 3.0]))
    assert state.v[0] == 1.5


def test_adp_matrix_shorthands(tmp_path):
    text = """
    adp:
      beta_w: 50.0
      q_e: 1.5
      r_u: [1.2, 1.23, 1.0, 2.2]
      gamma_a: 5.0
      gamma_b: 0.1
    """
    cfg = load_scenario(write(tmp_path, text))
    np.testing.assert_allclose(cfg.adp.q_e, 1.5 * np.eye(7))
    np.testing.assert_allclose(cfg.adp.r_u, [1.2, 1.23, 1.0, 2.2])
    assert cfg.adp.beta_w == 50.0
    np.testing.assert_allclose(cfg.adp.gamma_a, 5.0 * np.eye(35))
    np.testing.assert_allclose(cfg.adp.gamma_b, np.full(35, 0.1))


def test_overrides_nested_and_parsed(tmp_path):
    data = load_config(write(tmp_path, "duration: 10.0\n"))
    apply_overrides(data, ["dt=2e-3", "adp.beta_w=75", "name=sweep_a"])
    cfg = config_from_dict(data)
    assert cfg.dt == pytest.approx(2e-3)
    assert cfg.adp.beta_w == 75
    assert cfg.name == "sweep_a"


def test_override_without_equals_rejected():
    with pytest.raises(ConfigError, match="key=value"):
        apply_overrides({}, ["dt 2e-3"])


def test_top_level_must_be_mapping(tmp_path):
    path = tmp_path / "bad.yaml"
    path.write_text("- 1\n- 2\n", encoding="utf-8")
    with pytest.raises(ConfigError, match="mapping"):
        load_config(str(path))


def test_thrust_clamp_keys(tmp_path):
    cfg = load_scenario(write(tmp_path, "thrust_min: -5.0\nthrust_max: 40.0\n"))
    assert cfg.thrust_min == -5.0 and cfg.thrust_max == 40.0
    with pytest.raises(ConfigError, match="thrust_min"):
        load_scenario(write(tmp_path, "thrust_min: 10.0\nthrust_max: -10.0\n"))
