"""Rigid-body model: rotation maps, wind quantities, 12-state derivative."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import (
    fd_jacobian,
    slow_dcm_body_to_inertial,
    slow_rate_matrix,
    slow_rate_matrix_standard,
)
from uavsim.disturbances import DisturbanceSample, ZERO_SAMPLE
from uavsim.dynamics import (
    UavParams,
    UavState,
    airspeed_quantities,
    com_attitude_G,
    plant_derivative,
    r_theta_dot,
    rotation_R_I,
    rotation_R_Theta,
)
from uavsim.errors import SingularityError

SAFE_ANGLE = st.floats(-1.2, 1.2)  # inside the pitch guard for theta
ANY_ANGLE = st.floats(-math.pi, math.pi)


def random_state(rng, v_scale=5.0):
    return UavState(
        p_n=rng.normal(size=3),
        v=np.array([abs(rng.normal(v_scale, 1.0)) + 1.0, rng.normal(0, 0.2), rng.normal(0, 0.2)]),
        Theta=np.array([rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8), rng.uniform(-3, 3)]),
        omega=rng.normal(0, 0.5, size=3),
    )


@given(phi=SAFE_ANGLE, theta=SAFE_ANGLE, psi=ANY_ANGLE)
@settings(max_examples=200, deadline=None)
def test_rate_matrix_matches_naive_paper_layout(phi, theta, psi):
    Theta = np.array([phi, theta, psi])
    got = rotation_R_Theta(Theta, UavParams())
    np.testing.assert_allclose(got, slow_rate_matrix(Theta), rtol=0, atol=1e-14)


def test_rate_matrix_standard_layout():
    params = UavParams(euler_convention="standard")
    Theta = np.array([0.3, -0.4, 1.1])
    np.testing.assert_allclose(
        rotation_R_Theta(Theta, params), slow_rate_matrix_standard(Theta), atol=1e-14
    )


@given(phi=ANY_ANGLE, theta=SAFE_ANGLE, psi=ANY_ANGLE)
@settings(max_examples=200, deadline=None)
def test_dcm_orthogonal_unit_determinant(phi, theta, psi):
    R = rotation_R_I(np.array([phi, theta, psi]))
    np.testing.assert_allclose(R @ R.T, np.eye(3), atol=1e-12)
    assert abs(np.linalg.det(R) - 1.0) < 1e-12
    np.testing.assert_allclose(
        R, slow_dcm_body_to_inertial(np.array([phi, theta, psi])), atol=1e-14
    )


@given(
    phi=st.floats(-1.0, 1.0),
    theta=st.floats(-1.0, 1.0),
    psi=ANY_ANGLE,
    dphi=st.floats(-2, 2),
    dtheta=st.floats(-2, 2),
    dpsi=st.floats(-2, 2),
)
@settings(max_examples=100, deadline=None)
def test_rate_matrix_time_derivative_matches_fd(phi, theta, psi, dphi, dtheta, dpsi):
    Theta = np.array([phi, theta, psi])
    Theta_dot = np.array([dphi, dtheta, dpsi])
    got = r_theta_dot(Theta, Theta_dot)
    h = 1e-6
    fd = (
        rotation_R_Theta(Theta + h * Theta_dot, UavParams())
        - rotation_R_Theta(Theta - h * Theta_dot, UavParams())
    ) / (2 * h)
    np.testing.assert_allclose(got, fd, atol=5e-6)


def test_pitch_margin_guard_raises():
    bad = UavState(
        p_n=np.zeros(3),
        v=np.array([10.0, 0, 0]),
        Theta=np.array([0.0, math.pi / 2 - 0.01, 0.0]),
        omega=np.zeros(3),
    )
    with pytest.raises(SingularityError):
        plant_derivative(bad, np.zeros(3), 0.0, np.zeros(3), ZERO_SAMPLE, UavParams(), t=1.5)


def test_airspeed_quantities_pure_forward_flight():
    params = UavParams()
    s = UavState(
        p_n=np.zeros(3),
        v=np.array([12.0, 0, 0]),
        Theta=np.array([0.0, 0.2, 0.0]),
        omega=np.zeros(3),
    )
    V, alpha, beta, g_v, drag = airspeed_quantities(s, params)
    assert V == pytest.approx(12.0)
    assert alpha == 0.0 and beta == 0.0
    assert drag == pytest.approx(params.k_d * 144.0)
    # level wings, pure pitch: g_v = -g sin(theta) with zero wind angles
    assert g_v == pytest.approx(-params.g * math.sin(0.2), rel=1e-12)


def test_airspeed_quantities_general_case_matches_naive():
    rng = np.random.default_rng(7)
    params = UavParams()
    for _ in range(50):
        s = random_state(rng)
        V, alpha, beta, g_v, drag = airspeed_quantities(s, params)
        u, vy, w = s.v
        assert V == pytest.approx(math.sqrt(u * u + vy * vy + w * w), rel=1e-12)
        assert alpha == pytest.approx(math.atan2(w, u), rel=1e-12)
        assert beta == pytest.approx(math.asin(vy / V), rel=1e-12)
        assert drag == pytest.approx(params.k_d * V * V, rel=1e-12)
        phi, theta, _ = s.Theta
        expect_gv = params.g * (
            -math.cos(alpha) * math.cos(beta) * math.sin(theta)
            + math.sin(beta) * math.sin(phi) * math.cos(theta)
            + math.sin(alpha) * math.cos(beta) * math.cos(phi) * math.cos(theta)
        )
        assert g_v == pytest.approx(expect_gv, rel=1e-10, abs=1e-12)


def test_wind_angle_guard_raises():
    params = UavParams()
    s = UavState(
        p_n=np.zeros(3),
        v=np.array([0.5, 0.0, 10.0]),  # alpha ~ 87 deg
        Theta=np.zeros(3),
        omega=np.zeros(3),
    )
    with pytest.raises(SingularityError):
        airspeed_quantities(s, params)


def test_plant_derivative_matches_handwritten_model():
    """Every term of the 12-state RHS, recomputed longhand."""
    rng = np.random.default_rng(3)
    params = UavParams()
    for _ in range(25):
        s = random_state(rng)
        M = rng.normal(size=3)
        T_x = rng.normal()
        F = rng.normal(size=3)
        dist = DisturbanceSample(
            d_m=tuple(rng.normal(size=3)), d_u=tuple(rng.normal(size=3)), d_v=0.0
        )
        ds = plant_derivative(s, M, T_x, F, dist, params)

        R_I = slow_dcm_body_to_inertial(s.Theta)
        np.testing.assert_allclose(ds.p_n, R_I @ s.v, atol=1e-12)
        v_dot = (
            (F + np.array([T_x, 0, 0])) / params.m
            + R_I[:, 2] * params.g
            - np.cross(s.omega, s.v)
        )
        np.testing.assert_allclose(ds.v, v_dot, atol=1e-12)
        theta_dot = slow_rate_matrix(s.Theta) @ s.omega + np.asarray(dist.d_u)
        np.testing.assert_allclose(ds.Theta, theta_dot, atol=1e-12)
        inertia = params.inertia
        omega_dot = np.linalg.solve(
            inertia,
            M + np.asarray(dist.d_m) - np.cross(s.omega, inertia @ s.omega),
        )
        np.testing.assert_allclose(ds.omega, omega_dot, atol=1e-10)


def test_attitude_drift_term_composed_from_primitives():
    """com_attitude_G must equal R' w + R I^{-1} (-w x Iw) built by hand."""
    rng = np.random.default_rng(11)
    params = UavParams()
    for _ in range(50):
        s = random_state(rng)
        got = com_attitude_G(s, params)
        R = rotation_R_Theta(s.Theta, params)
        theta_dot = R @ s.omega  # drift uses the undisturbed kinematics
        Rd = r_theta_dot(s.Theta, theta_dot, params)
        gyro = np.linalg.solve(params.inertia, -np.cross(s.omega, params.inertia @ s.omega))
        expect = Rd @ s.omega + R @ gyro
        np.testing.assert_allclose(got, expect, atol=1e-12)
