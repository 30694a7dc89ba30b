"""Baseline airspeed controllers for head-to-head comparison runs.

The fully implemented baseline is FTSM-GST: a fast terminal sliding-mode
surface

    S_vf = e_V + k_s * integral of ( |e_V|^g1 sgn + |e_V|^g2 sgn ) dtau

driven by a fixed-gain generalized super-twisting thrust law

    T_x = (m / cos a cos b) [ D/m + g_v + V_d'
          - k_s (|e_V|^g1 sgn + |e_V|^g2 sgn) - k1f phi_f1(S_vf) + z_f ],
    z_f' = -k2f phi_f2(S_vf).

Unlike the adaptive scheme it feeds the model terms (drag, gravity
projection, reference acceleration) forward explicitly and keeps both gains
constant — there is no disturbance adaptation anywhere in the law.

Other published comparison controllers (LSS-ASOSM, ACTA, ASOSM) are *not*
implemented — their algorithms live in external references.  Their printed
tuning tables ship as inert records (`REFERENCE_TUNINGS`) so configs can
cite them, and `ThrustController` documents the interface third-party
implementations must satisfy to plug into the simulation loop.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Protocol

from .errors import SingularityError
from .mathcore import pow_sign


@dataclass
class FtsmGstParams:
    """Fixed gains of the FTSM-GST baseline (defaults = stock tuning)."""

    k_s: float = 1.5
    gamma_f1: float = 1.2
    gamma_f2: float = 0.88
    k1f: float = 4.0
    k2f: float = 1.5

    def validate(self) -> None:
        if self.k_s <= 0.0:
            raise ValueError("k_s must be positive")
        if self.gamma_f1 < 1.0:
            raise ValueError("gamma_f1 must be >= 1")
        if not 0.0 < self.gamma_f2 < 1.0:
            raise ValueError("gamma_f2 must lie in (0,1)")
        if self.k1f <= 0.0 or self.k2f <= 0.0:
            raise ValueError("k1f and k2f must be positive")


@dataclass
class FtsmGstState:
    z_f: float = 0.0
    ism_integral: float = 0.0   # raw integral of the two signed powers


def phi_f1(s: float) -> float:
    return pow_sign(s, 0.5) + s


def phi_f2(s: float) -> float:
    return 0.5 * pow_sign(s, 0.0) + 1.5 * pow_sign(s, 0.5) + s


def surface_integrand(e_v: float, params: FtsmGstParams) -> float:
    """Integrand of the terminal surface: |e_V|^g1 sgn + |e_V|^g2 sgn."""
    return pow_sign(e_v, params.gamma_f1) + pow_sign(e_v, params.gamma_f2)


def ftsm_surface(e_v: float, ism_integral: float, params: FtsmGstParams) -> float:
    return e_v + params.k_s * ism_integral


def ftsm_gst_thrust(
    state: FtsmGstState,
    s_vf: float,
    e_v: float,
    alpha: float,
    beta: float,
    g_v: float,
    v_d_dot: float,
    drag: float,
    mass: float,
    params: FtsmGstParams,
    wind_angle_margin: float = 0.05,
    t: float | None = None,
) -> float:
    """Total baseline thrust (model feedforward + surface feedback)."""
    guard = 0.5 * math.pi - wind_angle_margin
    if abs(alpha) >= guard or abs(beta) >= guard:
        raise SingularityError(
            f"wind angle out of range: alpha={alpha:.4f}, beta={beta:.4f}", t
        )
    inner = (
        drag / mass
        + g_v
        + v_d_dot
        - params.k_s * surface_integrand(e_v, params)
        - params.k1f * phi_f1(s_vf)
        + state.z_f
    )
    return mass / (math.cos(alpha) * math.cos(beta)) * inner


def zf_rate(s_vf: float, params: FtsmGstParams) -> float:
    return -params.k2f * phi_f2(s_vf)


class ThrustController(Protocol):
    """Interface for pluggable airspeed controllers.

    Implementations keep whatever private mutable memory they need;
    ``thrust`` must be side-effect free (it may be called repeatedly at the
    same instant) and ``advance`` commits one time step of internal state.
    """

    def thrust(
        self, t: float, e_v: float, alpha: float, beta: float,
        g_v: float, v_d_dot: float, drag: float, mass: float,
    ) -> float:
        """Return the commanded thrust for the current measurements."""
        ...

    def advance(self, dt: float) -> None:
        """Integrate internal controller state by one step."""
        ...


# Printed tunings of the unimplemented comparison controllers, kept as data
# so configuration files can reference them; nothing in the package
# evaluates these laws.
REFERENCE_TUNINGS: dict[str, dict[str, float]] = {
    "lss_asosm": {"lambda_l": 1.0, "k": 15.0, "mu": 0.005, "K_min": 0.8, "epsilon": 1.35},
    "acta": {"l": 5.0, "k1t": 1.1, "k2t": 1.1, "k3t": 1.2, "k4t": 1.2},
    "asosm": {"k_V": 12.0, "mu": 0.01, "K_Vmin": 0.8, "epsilon_V": 1.0},
}
