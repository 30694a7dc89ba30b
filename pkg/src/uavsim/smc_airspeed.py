"""Adaptive generalized super-twisting airspeed controller and scalar demo.

The airspeed loop works on the integral manifold

    S_V = e_V - integral_0^t ( -g_v - V_d' + (cos a cos b T_xa - D)/m ) dtau

(the integral starts at zero, so S_V(0) = e_V(0)) and applies the thrust

    T_xs = (m / (cos a cos b)) ( -k1v sqrt(Lv/2) phi_v1(S_V) + z_v + phi_v3 ),
    z_v' = -k2v Lv phi_v2(S_V),

with phi_v1 = |S|^{1/2} sign-preserving + S, phi_v2 = phi_v1' phi_v1, and the
gain-variation compensation phi_v3 = -Lv' phi_v1 / (2 Lv phi_v1'), where Lv'
is the last commanded adaptation rate (the only derivative the controller
knows in closed form).  phi_v3 is zero at the manifold or when Lv is not
moving, where the law reduces to the fixed-gain generalized super-twisting
structure.

A single adaptive gain Lv scales both channels (k1v sqrt(Lv/2) and k2v Lv);
it follows the same dual-layer law as the attitude loop, driven by the
filtered equivalent control u_eqv_bar of the switching term
(k2v Lv / 2) sign(S_V).

Update-order convention (shared with the attitude loop): each control step
evaluates every adaptation rate on the time-t snapshot — z_v and the dL/r
layer commit from pre-step values, and only then does the filter advance —
so the discrete system is a plain forward-Euler pass over the coupled ODEs.

``run_siso_demo`` exercises the same law on the scalar plant x' = u + d(t),
for which the manifold degenerates to S_V = x.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .disturbances import siso_disturbance
from .errors import SingularityError
from .mathcore import pow_sign

EPS_S = 1e-6
L_FLOOR = 0.01


@dataclass
class AirspeedSmcParams:
    """Gains of the airspeed switching loop (defaults = stock tuning)."""

    k1v: float = 5.0
    k2v: float = 3.0
    lv0: float = 0.55
    lv: float = 0.99
    eps_v: float = 0.05
    lambda_v0: float = 0.01
    r_bar_v: float = 5.0
    r_mv: float = 0.5
    e_b: float = 0.3
    tau_f: float = 0.01
    r_law: str = "rate"

    def validate(self) -> None:
        for name in (
            "k1v", "k2v", "lv0", "lv", "eps_v", "lambda_v0",
            "r_bar_v", "r_mv", "e_b", "tau_f",
        ):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be positive")
        if self.r_law not in ("rate", "clamp"):
            raise ValueError("r_law must be 'rate' or 'clamp'")


def siso_demo_params() -> AirspeedSmcParams:
    """Tuning used by the scalar demo (differs from the flight defaults)."""
    return AirspeedSmcParams(
        k1v=1.35, k2v=1.26, lv0=0.26, lv=0.99, eps_v=0.05,
        lambda_v0=0.38, r_bar_v=7.0, r_mv=0.6, e_b=0.15,
    )


@dataclass
class AirspeedSmcState:
    zv: float = 0.0
    dLv: float = 0.0
    rv: float = 0.5
    u_eqv_bar: float = 0.0
    ism_integral: float = 0.0
    lv_dot_last: float = 0.0

    @classmethod
    def initial(cls, params: AirspeedSmcParams) -> "AirspeedSmcState":
        return cls(rv=params.r_mv)

    def Lv(self, params: AirspeedSmcParams) -> float:
        return max(params.lv0 + self.dLv, L_FLOOR)


def phi_v1(sv: float) -> float:
    return pow_sign(sv, 0.5) + sv


def phi_v1_prime(sv: float) -> float:
    """d phi_v1 / d S_V = 0.5 |S_V|^{-1/2} + 1 (diverges at the origin)."""
    return 0.5 / math.sqrt(abs(sv)) + 1.0


def phi_v2(sv: float) -> float:
    return 0.5 * pow_sign(sv, 0.0) + 1.5 * pow_sign(sv, 0.5) + sv


def phi_v3(sv: float, lv_gain: float, lv_dot: float) -> float:
    """Gain-variation feedforward -Lv' phi_v1 / (2 Lv phi_v1'); 0 in the
    dead zone or when the gain is stationary."""
    if abs(sv) < EPS_S or lv_dot == 0.0:
        return 0.0
    return -lv_dot * phi_v1(sv) / (2.0 * lv_gain * phi_v1_prime(sv))


def sliding_Sv(e_v: float, ism_integral: float) -> float:
    return e_v - ism_integral


def ism_integrand_v(
    g_v: float, v_d_dot: float, alpha: float, beta: float, t_xa: float,
    drag: float, mass: float,
) -> float:
    """Rate of the airspeed manifold integral: -g_v - V_d' + (ca cb T_xa - D)/m."""
    return -g_v - v_d_dot + (math.cos(alpha) * math.cos(beta) * t_xa - drag) / mass


def control_Txs(
    state: AirspeedSmcState,
    sv: float,
    alpha: float,
    beta: float,
    params: AirspeedSmcParams,
    mass: float,
    wind_angle_margin: float = 0.05,
    t: float | None = None,
) -> float:
    """Switching thrust (m / cos a cos b)(-k1v sqrt(Lv/2) phi_v1 + z_v + phi_v3)."""
    guard = 0.5 * math.pi - wind_angle_margin
    if abs(alpha) >= guard or abs(beta) >= guard:
        raise SingularityError(
            f"wind angle out of range: alpha={alpha:.4f}, beta={beta:.4f}", t
        )
    lv_gain = state.Lv(params)
    inner = (
        -params.k1v * math.sqrt(0.5 * lv_gain) * phi_v1(sv)
        + state.zv
        + phi_v3(sv, lv_gain, state.lv_dot_last)
    )
    return mass / (math.cos(alpha) * math.cos(beta)) * inner


def zv_rate(sv: float, lv_gain: float, params: AirspeedSmcParams) -> float:
    return -params.k2v * lv_gain * phi_v2(sv)


def e_bar_v(lv_gain: float, u_eqv_bar: float, params: AirspeedSmcParams) -> float:
    return 0.5 * lv_gain - abs(u_eqv_bar) / params.lv - params.eps_v


def adapt_Lv(
    state: AirspeedSmcState, params: AirspeedSmcParams, dt: float
) -> tuple[float, float, float]:
    """One Euler step of the scalar dual-layer law; returns (Lv, e_bar_v, rv).

    Stores the commanded dLv rate so the next control evaluation's phi_v3
    sees the derivative actually applied.
    """
    lv_gain = state.Lv(params)
    e_bv = e_bar_v(lv_gain, state.u_eqv_bar, params)
    dlv_dot = -(params.lambda_v0 + state.rv) * math.copysign(1.0, e_bv) if e_bv != 0.0 else 0.0
    if params.r_law == "rate":
        if state.rv > params.r_mv:
            rv_dot = params.r_bar_v * abs(e_bv) * math.copysign(1.0, abs(e_bv) - params.e_b)
        else:
            rv_dot = params.r_mv
        state.rv = max(state.rv + rv_dot * dt, params.r_mv)
    else:
        rv_dot = params.r_bar_v * abs(e_bv) * math.copysign(1.0, abs(e_bv) - params.e_b)
        state.rv = max(state.rv + rv_dot * dt, params.r_mv)
    state.dLv += dlv_dot * dt
    state.lv_dot_last = dlv_dot
    return state.Lv(params), e_bv, state.rv


def filter_u_eqv(
    state: AirspeedSmcState, sv: float, lv_gain: float, params: AirspeedSmcParams, dt: float
) -> float:
    """Exact exponential step of u_eqv' = ((k2v Lv / 2) sign(S_V) - u_eqv)/tau."""
    inp = 0.5 * params.k2v * lv_gain * pow_sign(sv, 0.0)
    decay = math.exp(-dt / params.tau_f)
    state.u_eqv_bar = inp + (state.u_eqv_bar - inp) * decay
    return state.u_eqv_bar


def run_siso_demo(
    params: AirspeedSmcParams | None = None,
    duration: float = 30.0,
    dt: float = 1e-3,
    x0: float = 1.0,
    disturbance=siso_disturbance,
) -> dict[str, np.ndarray]:
    """Run the scalar benchmark x' = u + d(t) under the AGST law.

    The plant already is the error dynamic, so the manifold is S_V = x and
    the thrust geometry factors drop out (m = 1, zero wind angles).  Euler
    integration throughout at the given dt; returns aligned time series
    ``t, x, u, lv, rv, phi_v3`` with samples at every step including both
    endpoints.
    """
    params = params or siso_demo_params()
    params.validate()
    state = AirspeedSmcState.initial(params)
    n = int(round(duration / dt))
    out = {k: np.empty(n + 1) for k in ("t", "x", "u", "lv", "rv", "phi_v3")}
    x = float(x0)
    for i in range(n + 1):
        t = i * dt
        sv = x
        lv_gain = state.Lv(params)
        p3 = phi_v3(sv, lv_gain, state.lv_dot_last)
        u = -params.k1v * math.sqrt(0.5 * lv_gain) * phi_v1(sv) + state.zv + p3
        out["t"][i] = t
        out["x"][i] = x
        out["u"][i] = u
        out["lv"][i] = lv_gain
        out["rv"][i] = state.rv
        out["phi_v3"][i] = p3
        if i == n:
            break
        # Plant and controller advance from the time-t snapshot.
        x += (u + disturbance(t)) * dt
        state.zv += zv_rate(sv, lv_gain, params) * dt
        adapt_Lv(state, params, dt)
        filter_u_eqv(state, sv, lv_gain, params, dt)
    return out
