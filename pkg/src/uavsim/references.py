"""Reference trajectory primitives with analytic derivatives.

Attitude references must be twice differentiable (their second derivative
enters the feedforward term of the combined-error dynamics) and the airspeed
reference once, so every primitive provides analytic ``value``/``deriv``/
``deriv2``.  The smoothed step uses the quintic polynomial
``6 tau^5 - 15 tau^4 + 10 tau^3``, which has zero first and second
derivatives at both ends, keeping the reference C^2 across the blend.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass
class Constant:
    value_const: float = 0.0

    def value(self, t: float) -> float:
        return self.value_const

    def deriv(self, t: float) -> float:
        return 0.0

    def deriv2(self, t: float) -> float:
        return 0.0


@dataclass
class SmoothStep:
    """Quintic-blended step from ``start`` to ``end`` beginning at ``t_step``."""

    start: float = 0.0
    end: float = 1.0
    t_step: float = 1.0
    duration: float = 0.5

    def _tau(self, t: float) -> float:
        return (t - self.t_step) / self.duration

    def value(self, t: float) -> float:
        tau = self._tau(t)
        if tau <= 0.0:
            return self.start
        if tau >= 1.0:
            return self.end
        s = tau * tau * tau * (10.0 + tau * (-15.0 + 6.0 * tau))
        return self.start + (self.end - self.start) * s

    def deriv(self, t: float) -> float:
        tau = self._tau(t)
        if tau <= 0.0 or tau >= 1.0:
            return 0.0
        ds = 30.0 * tau * tau * (tau - 1.0) * (tau - 1.0)
        return (self.end - self.start) * ds / self.duration

    def deriv2(self, t: float) -> float:
        tau = self._tau(t)
        if tau <= 0.0 or tau >= 1.0:
            return 0.0
        d2s = 60.0 * tau * (2.0 * tau - 1.0) * (tau - 1.0)
        return (self.end - self.start) * d2s / (self.duration * self.duration)


@dataclass
class Sine:
    offset: float = 0.0
    amplitude: float = 1.0
    omega: float = 1.0
    phase: float = 0.0

    def value(self, t: float) -> float:
        return self.offset + self.amplitude * math.sin(self.omega * t + self.phase)

    def deriv(self, t: float) -> float:
        return self.amplitude * self.omega * math.cos(self.omega * t + self.phase)

    def deriv2(self, t: float) -> float:
        w = self.omega
        return -self.amplitude * w * w * math.sin(w * t + self.phase)


SIGNAL_TYPES = {"constant": Constant, "step": SmoothStep, "sine": Sine}


def signal_from_dict(spec: dict) -> Constant | SmoothStep | Sine:
    """Build a primitive from a config mapping ({'type': ..., params...})."""
    spec = dict(spec)
    kind = spec.pop("type", None)
    if kind not in SIGNAL_TYPES:
        raise ValueError(
            f"unknown reference type {kind!r}; expected one of {sorted(SIGNAL_TYPES)}"
        )
    cls = SIGNAL_TYPES[kind]
    valid = set(cls.__dataclass_fields__)
    unknown = set(spec) - valid
    if unknown:
        raise ValueError(f"unknown reference key(s) {sorted(unknown)} for type {kind!r}")
    return cls(**{k: float(v) for k, v in spec.items()})


@dataclass
class ReferenceCommand:
    """A full command: three attitude channels plus airspeed."""

    phi: Constant | SmoothStep | Sine
    theta: Constant | SmoothStep | Sine
    psi: Constant | SmoothStep | Sine
    airspeed: Constant | SmoothStep | Sine

    def theta_d(self, t: float) -> np.ndarray:
        return np.array([self.phi.value(t), self.theta.value(t), self.psi.value(t)])

    def theta_d_dot(self, t: float) -> np.ndarray:
        return np.array([self.phi.deriv(t), self.theta.deriv(t), self.psi.deriv(t)])

    def theta_d_ddot(self, t: float) -> np.ndarray:
        return np.array([self.phi.deriv2(t), self.theta.deriv2(t), self.psi.deriv2(t)])

    def v_d(self, t: float) -> float:
        return self.airspeed.value(t)

    def v_d_dot(self, t: float) -> float:
        return self.airspeed.deriv(t)


def default_reference() -> ReferenceCommand:
    """Stock command: smoothed attitude steps to (10, 5, 15) deg at t = 1 s
    over 0.5 s, and an airspeed ramp 0.4 -> 20 m/s starting at t = 1 s over
    5 s (a gentle pull-up keeps the thrust channel inside a realistic range).
    """
    d2r = math.pi / 180.0
    return ReferenceCommand(
        phi=SmoothStep(0.0, 10.0 * d2r, 1.0, 0.5),
        theta=SmoothStep(0.0, 5.0 * d2r, 1.0, 0.5),
        psi=SmoothStep(0.0, 15.0 * d2r, 1.0, 0.5),
        airspeed=SmoothStep(0.4, 20.0, 1.0, 5.0),
    )
