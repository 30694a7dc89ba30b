"""Six-degree-of-freedom fixed-wing UAV dynamics and kinematic maps.

State convention (body axes x-forward, y-right, z-down; inertial NED):

* ``p_n``  inertial position (m)
* ``v``    body-frame velocity [u, v, w] (m/s)
* ``Theta``Euler angles [phi, theta, psi] (rad)
* ``omega``body rates [omega_x, omega_y, omega_z] (rad/s)

Equations of motion::

    p_n' = R_I v
    v'   = (F + T)/m + R_I g - omega x v          T = [T_x, 0, 0], g = [0, 0, g_z]
    Theta' = R_Theta omega + d_u                  d_u: rate-channel disturbance
    omega' = -I^{-1}(omega x I omega) + I^{-1}(M + d_m)

The gravity term is applied exactly in the form above (``R_I g``, not the
transpose); the airspeed controller's model uses the wind-axis projection
``g_v`` below, and any mismatch between the two is absorbed by the robust
loops as a bounded disturbance.

``R_Theta`` has two selectable layouts.  The default (``"paper"``) keeps the
row ordering used throughout the controller derivation, which is a row
permutation of the textbook Euler-kinematics matrix; ``"standard"`` gives the
textbook ordering.  Both are implemented verbatim — neither is a "fix" of the
other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .disturbances import DisturbanceSample
from .errors import SingularityError

EULER_CONVENTIONS = ("paper", "standard")
BETA_CONVENTIONS = ("standard", "paper")


@dataclass
class UavParams:
    """Physical constants and guard margins for the vehicle model."""

    m: float = 1.56            # mass (kg)
    g: float = 9.81            # gravity magnitude, +z inertial (down) (m/s^2)
    k_d: float = 0.02          # quadratic drag coefficient: D = k_d V^2 (N s^2/m^2)
    ixx: float = 0.5528        # inertia tensor entries (kg m^2)
    iyy: float = 0.6335
    izz: float = 1.0783
    ixz: float = 0.0015
    theta_margin: float = 0.05       # pitch singularity guard (rad)
    wind_angle_margin: float = 0.05  # |alpha|,|beta| guard distance from pi/2 (rad)
    v_min: float = 0.1               # minimum airspeed for wind-angle definitions (m/s)
    euler_convention: str = "paper"
    beta_convention: str = "standard"

    @cached_property
    def inertia(self) -> np.ndarray:
        return np.array(
            [
                [self.ixx, 0.0, self.ixz],
                [0.0, self.iyy, 0.0],
                [self.ixz, 0.0, self.izz],
            ]
        )

    @cached_property
    def inertia_inv(self) -> np.ndarray:
        return np.linalg.inv(self.inertia)


@dataclass
class UavState:
    """Full vehicle state; also used to carry state derivatives."""

    p_n: np.ndarray = field(default_factory=lambda: np.zeros(3))
    v: np.ndarray = field(default_factory=lambda: np.zeros(3))
    Theta: np.ndarray = field(default_factory=lambda: np.zeros(3))
    omega: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def as_array(self) -> np.ndarray:
        return np.concatenate([self.p_n, self.v, self.Theta, self.omega])

    @classmethod
    def from_array(cls, y: np.ndarray) -> "UavState":
        y = np.asarray(y, dtype=float)
        return cls(p_n=y[0:3].copy(), v=y[3:6].copy(), Theta=y[6:9].copy(), omega=y[9:12].copy())


@dataclass
class ComState:
    """Combined tracking-error state seen by the controllers.

    ``z_Theta`` is the attitude-error rate (the measured Euler-angle rate,
    disturbance included, minus the reference rate); both loops and the
    optimal layer consume this same triple.
    """

    e_Theta: np.ndarray
    z_Theta: np.ndarray
    e_V: float


def _check_pitch(theta: float, params: UavParams, t: float | None = None) -> None:
    if abs(theta) >= 0.5 * math.pi - params.theta_margin:
        raise SingularityError(
            f"pitch {theta:.4f} rad within {params.theta_margin} rad of +/-90 deg", t
        )


def rotation_R_Theta(Theta: np.ndarray, params: UavParams | None = None) -> np.ndarray:
    """Body-rate to Euler-rate matrix (layout set by ``euler_convention``)."""
    params = params or _DEFAULT_PARAMS
    phi, theta = float(Theta[0]), float(Theta[1])
    _check_pitch(theta, params)
    sph, cph = math.sin(phi), math.cos(phi)
    cth = math.cos(theta)
    tth = math.tan(theta)
    if params.euler_convention == "paper":
        return np.array(
            [
                [0.0, cph, -sph],
                [0.0, sph / cth, cph / cth],
                [1.0, sph * tth, cph * tth],
            ]
        )
    return np.array(
        [
            [1.0, sph * tth, cph * tth],
            [0.0, cph, -sph],
            [0.0, sph / cth, cph / cth],
        ]
    )


def rotation_R_I(Theta: np.ndarray) -> np.ndarray:
    """Body-to-inertial direction cosine matrix (Z-Y-X Euler sequence)."""
    phi, theta, psi = (float(x) for x in Theta)
    sph, cph = math.sin(phi), math.cos(phi)
    sth, cth = math.sin(theta), math.cos(theta)
    sps, cps = math.sin(psi), math.cos(psi)
    return np.array(
        [
            [cth * cps, sth * cps * sph - sps * cph, sth * cps * cph + sps * sph],
            [cth * sps, sth * sps * sph + cps * cph, sth * sps * cph - cps * sph],
            [-sth, cth * sph, cth * cph],
        ]
    )


def r_theta_dot(
    Theta: np.ndarray, Theta_dot: np.ndarray, params: UavParams | None = None
) -> np.ndarray:
    """Analytic time derivative of ``rotation_R_Theta`` along ``Theta_dot``.

    Only phi and theta enter the matrix, so only their rates appear.
    """
    params = params or _DEFAULT_PARAMS
    phi, theta = float(Theta[0]), float(Theta[1])
    _check_pitch(theta, params)
    dphi, dtheta = float(Theta_dot[0]), float(Theta_dot[1])
    sph, cph = math.sin(phi), math.cos(phi)
    sth, cth = math.sin(theta), math.cos(theta)
    tth = sth / cth
    sec2 = 1.0 / (cth * cth)

    # d/dt of each nonzero entry by the chain rule.
    d_cph = -sph * dphi
    d_msph = -cph * dphi
    d_sph_over_cth = (cph * dphi * cth + sph * sth * dtheta) * sec2
    d_cph_over_cth = (-sph * dphi * cth + cph * sth * dtheta) * sec2
    d_sph_tth = cph * dphi * tth + sph * sec2 * dtheta
    d_cph_tth = -sph * dphi * tth + cph * sec2 * dtheta

    if params.euler_convention == "paper":
        return np.array(
            [
                [0.0, d_cph, d_msph],
                [0.0, d_sph_over_cth, d_cph_over_cth],
                [0.0, d_sph_tth, d_cph_tth],
            ]
        )
    return np.array(
        [
            [0.0, d_sph_tth, d_cph_tth],
            [0.0, d_cph, d_msph],
            [0.0, d_sph_over_cth, d_cph_over_cth],
        ]
    )


def airspeed_quantities(
    s: UavState, params: UavParams, t: float | None = None
) -> tuple[float, float, float, float, float]:
    """Airspeed V, wind angles (alpha, beta), gravity projection g_v, drag D.

    g_v is the wind-axis component of gravity entering the airspeed model::

        g_v = g(-cos a cos b sin th + sin b sin ph cos th + sin a cos b cos ph cos th)

    Raises :class:`SingularityError` below ``v_min`` airspeed, when the
    angle-of-attack definition arctan(w/u) loses meaning (u -> 0), or when
    either wind angle leaves its guard band.
    """
    u, vy, w = (float(x) for x in s.v)
    phi, theta = float(s.Theta[0]), float(s.Theta[1])
    return _wind_quantities(u, vy, w, phi, theta, params, t)


def _wind_quantities(
    u: float, vy: float, w: float, phi: float, theta: float,
    params: UavParams, t: float | None = None,
) -> tuple[float, float, float, float, float]:
    """Scalar-form core of :func:`airspeed_quantities` (hot path for the engine)."""
    V = math.sqrt(u * u + vy * vy + w * w)
    if V < params.v_min:
        raise SingularityError(f"airspeed {V:.4f} m/s below v_min={params.v_min}", t)
    if abs(u) < 1e-9:
        raise SingularityError("angle of attack undefined: forward velocity ~ 0", t)
    alpha = math.atan(w / u)
    if params.beta_convention == "standard":
        beta = math.asin(max(-1.0, min(1.0, vy / V)))
    else:
        # Literal printed form: arcsin of forward over lateral velocity.
        if abs(vy) < 1e-9 or abs(u / vy) > 1.0:
            raise SingularityError("sideslip (literal form) outside arcsin domain", t)
        beta = math.asin(u / vy)
    guard = 0.5 * math.pi - params.wind_angle_margin
    if abs(alpha) >= guard or abs(beta) >= guard:
        raise SingularityError(
            f"wind angle out of range: alpha={alpha:.4f}, beta={beta:.4f}", t
        )
    sph, cph = math.sin(phi), math.cos(phi)
    sth, cth = math.sin(theta), math.cos(theta)
    sa, ca = math.sin(alpha), math.cos(alpha)
    sb, cb = math.sin(beta), math.cos(beta)
    g_v = params.g * (-ca * cb * sth + sb * sph * cth + sa * cb * cph * cth)
    D = params.k_d * V * V
    return V, alpha, beta, g_v, D


def com_attitude_G(
    s: UavState, params: UavParams, *, r_theta: np.ndarray | None = None
) -> np.ndarray:
    """Drift term of the attitude error-rate dynamics.

    G = R_Theta' omega - R_Theta I^{-1} (omega x I omega), where the Euler
    rate used inside R_Theta' is the nominal (disturbance-free) R_Theta omega
    — the controller cannot observe the rate-channel disturbance, and the
    resulting mismatch is part of the lumped disturbance the switching loop
    rejects.  ``r_theta`` lets callers pass an already-built rotation matrix.
    """
    R = rotation_R_Theta(s.Theta, params) if r_theta is None else r_theta
    theta_dot_nom = R @ s.omega
    Rdot = r_theta_dot(s.Theta, theta_dot_nom, params)
    Iw = params.inertia @ s.omega
    gyro = np.cross(s.omega, Iw)
    return Rdot @ s.omega - R @ (params.inertia_inv @ gyro)


def plant_derivative(
    s: UavState,
    M: np.ndarray,
    T_x: float,
    F: np.ndarray,
    dist: DisturbanceSample,
    params: UavParams,
    t: float | None = None,
) -> UavState:
    """Right-hand side of the rigid-body equations (returned as a UavState).

    ``F`` is the total aerodynamic force in body axes (the harness passes
    drag along the negative velocity direction by default, with the
    airspeed-channel disturbance folded in along the velocity direction);
    only the moment-channel (``d_m``) and rate-channel (``d_u``) entries of
    ``dist`` act here.
    """
    y = s.as_array()
    d_m, d_u = dist.d_m, dist.d_u
    dy = _rhs12(
        y,
        float(M[0]), float(M[1]), float(M[2]),
        float(T_x),
        float(F[0]), float(F[1]), float(F[2]),
        float(d_m[0]), float(d_m[1]), float(d_m[2]),
        float(d_u[0]), float(d_u[1]), float(d_u[2]),
        params,
        t,
    )
    return UavState.from_array(dy)


def _rhs12(
    y: np.ndarray,
    mx: float, my: float, mz: float,
    tx: float,
    fx: float, fy: float, fz: float,
    dmx: float, dmy: float, dmz: float,
    dux: float, duy: float, duz: float,
    params: UavParams,
    t: float | None = None,
) -> np.ndarray:
    """Array-form rigid-body RHS used by the fixed-step integrators."""
    phi, theta, psi = float(y[6]), float(y[7]), float(y[8])
    _check_pitch(theta, params, t)
    u, vy, w = float(y[3]), float(y[4]), float(y[5])
    p, q, r = float(y[9]), float(y[10]), float(y[11])

    sph, cph = math.sin(phi), math.cos(phi)
    sth, cth = math.sin(theta), math.cos(theta)
    sps, cps = math.sin(psi), math.cos(psi)

    # R_I columns (body -> inertial)
    r00 = cth * cps
    r01 = sth * cps * sph - sps * cph
    r02 = sth * cps * cph + sps * sph
    r10 = cth * sps
    r11 = sth * sps * sph + cps * cph
    r12 = sth * sps * cph - cps * sph
    r20 = -sth
    r21 = cth * sph
    r22 = cth * cph

    out = np.empty(12)
    # p_n' = R_I v
    out[0] = r00 * u + r01 * vy + r02 * w
    out[1] = r10 * u + r11 * vy + r12 * w
    out[2] = r20 * u + r21 * vy + r22 * w

    # v' = (F + T)/m + R_I g - omega x v     (gravity term exactly as modeled)
    gz = params.g
    inv_m = 1.0 / params.m
    out[3] = (fx + tx) * inv_m + r02 * gz - (q * w - r * vy)
    out[4] = fy * inv_m + r12 * gz - (r * u - p * w)
    out[5] = fz * inv_m + r22 * gz - (p * vy - q * u)

    # Theta' = R_Theta omega + d_u
    if params.euler_convention == "paper":
        out[6] = cph * q - sph * r + dux
        out[7] = (sph * q + cph * r) / cth + duy
        out[8] = p + (sph * q + cph * r) * sth / cth + duz
    else:
        out[6] = p + (sph * q + cph * r) * sth / cth + dux
        out[7] = cph * q - sph * r + duy
        out[8] = (sph * q + cph * r) / cth + duz

    # omega' = I^{-1}(M + d_m - omega x I omega)
    ih = params.inertia
    iw0 = ih[0, 0] * p + ih[0, 2] * r
    iw1 = ih[1, 1] * q
    iw2 = ih[2, 0] * p + ih[2, 2] * r
    gx = q * iw2 - r * iw1
    gy = r * iw0 - p * iw2
    gzc = p * iw1 - q * iw0
    tx0 = mx + dmx - gx
    tx1 = my + dmy - gy
    tx2 = mz + dmz - gzc
    inv = params.inertia_inv
    out[9] = inv[0, 0] * tx0 + inv[0, 2] * tx2
    out[10] = inv[1, 1] * tx1
    out[11] = inv[2, 0] * tx0 + inv[2, 2] * tx2
    return out


_DEFAULT_PARAMS = UavParams()
