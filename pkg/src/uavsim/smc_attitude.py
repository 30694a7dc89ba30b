"""Adaptive multivariable generalized super-twisting attitude controller.

The attitude loop drives the combined error (e_Theta, z_Theta) onto an
integral sliding manifold

    S = z_Theta - integral_0^t (R_Theta I^{-1} M_a - Theta_d'') dtau

(the integral starts at zero, so S(0) = z_Theta(0) and the loop has a true
finite-time reaching phase) and applies the switching moment

    M_s = I R_Theta^{-1} ( -k1 Phi1(S) + z1 - G(z_Theta) ),
    z1' = -k20 L Phi2(S),

with Phi1(S) = |S|^{1/2} sign-preserving + S and Phi2 = Phi1' Phi1 expanded
in closed form.  Two independent adaptation layers tune the gains:

* k1 integrates kappa1 ||S|| + kappa0 whenever ||S|| is away from zero
  (dead zone eps_s), so it is non-decreasing;
* L = L0 + dL follows a dual-layer law: dL' = -(lambda0 + r) sign(e_delta)
  with e_delta = 0.5 L - ||u_eq_bar||/(a l) - eps, and r' switches between
  r_bar |e_delta| sign(|e_delta| - e_bar) and a constant positive push-back
  rate when r falls to its floor r_m.

u_eq_bar approximates the equivalent control by low-pass filtering the
discontinuous term (k20 L / 2) sign(S); the filter advances by an exact
exponential step so large dt/tau ratios stay stable.

All adaptation updates here are single forward-Euler steps: the right-hand
sides are discontinuous, so higher-order schemes buy nothing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dynamics import UavParams, UavState, com_attitude_G, rotation_R_Theta
from .mathcore import msign, pow_sign

EPS_S = 1e-6     # manifold dead zone replacing the exact ||S|| != 0 test
L_FLOOR = 0.01   # keeps L positive when dL transiently dives below -L0


@dataclass
class AttitudeSmcParams:
    """Gains of the attitude switching loop (defaults = stock tuning)."""

    k20: float = 1.0
    kappa1: float = 8.0
    kappa0: float = 0.2
    l0: float = 0.3
    al: float = 0.99         # the product a*l of the equivalent-control bound
    eps: float = 0.01
    lambda0: float = 0.01
    r_bar: float = 10.0
    r_m: float = 0.6
    e_bar: float = 0.1
    tau_f: float = 0.01
    r_law: str = "rate"      # "rate": r' = r_m below the floor; "clamp": hard floor

    def validate(self) -> None:
        for name in ("k20", "kappa1", "l0", "al", "eps", "lambda0", "r_bar", "r_m", "tau_f"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be positive")
        if not 0.0 < self.kappa0 < 1.0:
            raise ValueError("kappa0 must satisfy kappa0 ∈ (0,1)")
        if not 0.0 < self.e_bar < 1.0:
            raise ValueError("e_bar must satisfy e_bar ∈ (0,1)")
        if not self.al < 1.0:
            raise ValueError("al (the product a*l) must satisfy 0 < a*l < 1")
        if self.r_law not in ("rate", "clamp"):
            raise ValueError("r_law must be 'rate' or 'clamp'")


@dataclass
class AttitudeSmcState:
    """Mutable controller state; one instance per simulation."""

    z1: np.ndarray = field(default_factory=lambda: np.zeros(3))
    k1: float = 1.0
    dL: float = 0.0
    r: float = 0.6
    u_eq_bar: np.ndarray = field(default_factory=lambda: np.zeros(3))
    ism_integral: np.ndarray = field(default_factory=lambda: np.zeros(3))

    @classmethod
    def initial(cls, params: AttitudeSmcParams) -> "AttitudeSmcState":
        return cls(r=params.r_m)

    def L(self, params: AttitudeSmcParams) -> float:
        return max(params.l0 + self.dL, L_FLOOR)


def phi1(S: np.ndarray) -> np.ndarray:
    return pow_sign(S, 0.5) + S


def phi2(S: np.ndarray) -> np.ndarray:
    """Phi1'(S) Phi1(S) in its expanded form 0.5 sign + 1.5 |S|^{1/2} sign + S."""
    return 0.5 * msign(S) + 1.5 * pow_sign(S, 0.5) + S


def sliding_S(z_theta: np.ndarray, ism_integral: np.ndarray) -> np.ndarray:
    return z_theta - ism_integral


def ism_integrand(
    s: UavState, M_a: np.ndarray, theta_d_ddot: np.ndarray, params: UavParams
) -> np.ndarray:
    """Rate of the manifold's integral state: R_Theta I^{-1} M_a - Theta_d''."""
    R = rotation_R_Theta(s.Theta, params)
    return R @ (params.inertia_inv @ M_a) - theta_d_ddot


def control_Ms(
    s: UavState,
    smc: AttitudeSmcState,
    S: np.ndarray,
    params: AttitudeSmcParams,
    uav: UavParams,
    *,
    r_theta: np.ndarray | None = None,
    g_term: np.ndarray | None = None,
) -> np.ndarray:
    """Switching moment M_s = I R_Theta^{-1}(-k1 Phi1(S) + z1 - G).

    ``r_theta`` and ``g_term`` let the simulation loop pass in the rotation
    matrix and drift term it has already evaluated for this step.
    """
    R = rotation_R_Theta(s.Theta, uav) if r_theta is None else r_theta
    if g_term is None:
        g_term = com_attitude_G(s, uav)
    inner = -smc.k1 * phi1(S) + smc.z1 - g_term
    return uav.inertia @ np.linalg.solve(R, inner)


def z1_rate(S: np.ndarray, L: float, params: AttitudeSmcParams) -> np.ndarray:
    return -params.k20 * L * phi2(S)


def adapt_k1(k1: float, S: np.ndarray, params: AttitudeSmcParams, dt: float) -> float:
    """k1 grows at kappa1 ||S|| + kappa0 outside the manifold dead zone."""
    norm_s = float(np.linalg.norm(S))
    if norm_s <= EPS_S:
        return k1
    return k1 + (params.kappa1 * norm_s + params.kappa0) * dt


def e_delta(L: float, u_eq_bar: np.ndarray, params: AttitudeSmcParams) -> float:
    return 0.5 * L - float(np.linalg.norm(u_eq_bar)) / params.al - params.eps


def adapt_L(
    smc: AttitudeSmcState, params: AttitudeSmcParams, dt: float
) -> tuple[float, float, float]:
    """One Euler step of the dual-layer (dL, r) law; returns (L, e_delta, r).

    The rates are evaluated on the pre-step state, then committed together.
    In "rate" mode r's floor branch is the printed constant positive rate; a
    final max() guards the r >= r_m invariant against one-step undershoot.
    """
    L = smc.L(params)
    e_d = e_delta(L, smc.u_eq_bar, params)
    dL_dot = -(params.lambda0 + smc.r) * math.copysign(1.0, e_d) if e_d != 0.0 else 0.0
    if params.r_law == "rate":
        if smc.r > params.r_m:
            r_dot = params.r_bar * abs(e_d) * math.copysign(1.0, abs(e_d) - params.e_bar)
        else:
            r_dot = params.r_m
        smc.r = max(smc.r + r_dot * dt, params.r_m)
    else:
        r_dot = params.r_bar * abs(e_d) * math.copysign(1.0, abs(e_d) - params.e_bar)
        smc.r = max(smc.r + r_dot * dt, params.r_m)
    smc.dL += dL_dot * dt
    return smc.L(params), e_d, smc.r


def filter_u_eq(
    smc: AttitudeSmcState, S: np.ndarray, L: float, params: AttitudeSmcParams, dt: float
) -> np.ndarray:
    """Exact exponential step of the first-order equivalent-control filter.

    Input is the discontinuous switching term (k20 L / 2) sign(S); with the
    input held over the step, u' = (input - u)/tau integrates exactly to
    u <- input + (u - input) e^{-dt/tau}.
    """
    inp = (0.5 * params.k20 * L) * msign(S)
    decay = math.exp(-dt / params.tau_f)
    smc.u_eq_bar = inp + (smc.u_eq_bar - inp) * decay
    return smc.u_eq_bar
