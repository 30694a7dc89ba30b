"""Time-dependent disturbance signals used by the closed-loop scenarios.

All generators are pure functions of time so that runs are reproducible and
the integrators can sample them at stage times.  The piecewise signals use
half-open intervals [a, b): the value at a breakpoint belongs to the segment
starting there, and any jump discontinuities are kept exactly as defined.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

_ZERO3 = np.zeros(3)


def moment_disturbance(t: float) -> np.ndarray:
    """Moment-channel disturbance d_m(t) (N m): zero until t = 5 s, then sines."""
    if t < 5.0:
        return _ZERO3
    return np.array(
        [
            1.5 * math.sin(math.pi * t / 17.0),
            0.8 * math.sin(math.pi * t / 15.0),
            1.1 * math.sin(math.pi * t / 16.0),
        ]
    )


def rate_disturbance(t: float) -> np.ndarray:
    """Euler-rate-channel disturbance d_u(t) (rad/s): equal sines on all axes."""
    val = 2.1 * math.sin(math.pi * t / 19.0)
    return np.array([val, val, val])


def airspeed_disturbance(t: float) -> float:
    """Airspeed-channel disturbance Delta_V(t) (m/s^2): off until t = 6 s."""
    if t < 6.0:
        return 0.0
    return 5.0 * math.sin(0.2 * t)


def siso_disturbance(t: float) -> float:
    """Matched disturbance d(t) for the scalar demo, defined on [0, 30) s.

    Three segments (half-open; the jumps at t = 10 and t = 20 are genuine):

    * [0, 10):  (2/pi) sin(pi t / 2)
    * [10, 20): (3/32) t^2 - (5/4) t
    * [20, 30): (5/pi) sin(pi t / 2)
    """
    if t < 0.0 or t >= 30.0:
        raise ValueError(f"siso disturbance defined on [0, 30) s, got t={t}")
    if t < 10.0:
        return (2.0 / math.pi) * math.sin(0.5 * math.pi * t)
    if t < 20.0:
        return (3.0 / 32.0) * t * t - 1.25 * t
    return (5.0 / math.pi) * math.sin(0.5 * math.pi * t)


# --------------------------------------------------------------------------
# Composable profile layer
#
# Scenarios describe each disturbance channel as a small expression tree of
# signal primitives (zero / sine / polynomial / piecewise).  The closed-form
# functions above remain the quick hand-written references; the stock profile
# built by ``default_profile()`` evaluates to exactly the same values.
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Zero:
    """The identically-zero signal."""

    def validate(self) -> None:
        return None

    def __call__(self, t: float) -> float:
        return 0.0


@dataclass(frozen=True)
class Sine:
    """amplitude * sin(omega * t + phase).  ``omega`` is in rad/s."""

    amplitude: float
    omega: float
    phase: float = 0.0

    def validate(self) -> None:
        for name in ("amplitude", "omega", "phase"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"sine {name} must be finite")

    def __call__(self, t: float) -> float:
        return self.amplitude * math.sin(self.omega * t + self.phase)


@dataclass(frozen=True)
class Polynomial:
    """sum_k coeffs[k] * t**k (coefficients in ascending order)."""

    coeffs: tuple[float, ...]

    def validate(self) -> None:
        if len(self.coeffs) == 0:
            raise ValueError("polynomial needs at least one coefficient")
        if not all(math.isfinite(c) for c in self.coeffs):
            raise ValueError("polynomial coefficients must be finite")

    def __call__(self, t: float) -> float:
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc


@dataclass(frozen=True)
class Piecewise:
    """Half-open segments: parts[k] rules [breakpoints[k-1], breakpoints[k]).

    ``parts`` has one more entry than ``breakpoints``; the last part extends
    to +inf.  Values at a breakpoint belong to the segment starting there, so
    jump discontinuities land exactly where the breakpoint says.
    """

    breakpoints: tuple[float, ...]
    parts: tuple["Signal", ...]

    def validate(self) -> None:
        if len(self.parts) != len(self.breakpoints) + 1:
            raise ValueError(
                "piecewise needs len(parts) == len(breakpoints) + 1, got "
                f"{len(self.parts)} parts for {len(self.breakpoints)} breakpoints"
            )
        for a, b in zip(self.breakpoints, self.breakpoints[1:]):
            if not a < b:
                raise ValueError(
                    f"piecewise breakpoints must be strictly increasing, got {a} then {b}"
                )
        for part in self.parts:
            part.validate()

    def __call__(self, t: float) -> float:
        for k, b in enumerate(self.breakpoints):
            if t < b:
                return self.parts[k](t)
        return self.parts[-1](t)


Signal = Zero | Sine | Polynomial | Piecewise


@dataclass(frozen=True)
class DisturbanceSample:
    """Disturbance values at one instant, in the units the plant consumes."""

    d_m: np.ndarray  # body-axis moment disturbance, N m, shape (3,)
    d_u: np.ndarray  # Euler-rate disturbance, rad/s, shape (3,)
    d_v: float       # airspeed-dynamics disturbance, m/s^2


#: Shared all-zero sample for undisturbed calls (treat as read-only).
ZERO_SAMPLE = DisturbanceSample(_ZERO3, _ZERO3, 0.0)


@dataclass(frozen=True)
class DisturbanceProfile:
    """One signal per disturbance channel (3 moment + 3 rate + 1 airspeed)."""

    d_m: tuple[Signal, Signal, Signal] = field(
        default_factory=lambda: (Zero(), Zero(), Zero())
    )
    d_u: tuple[Signal, Signal, Signal] = field(
        default_factory=lambda: (Zero(), Zero(), Zero())
    )
    d_v: Signal = field(default_factory=Zero)

    def validate(self) -> None:
        if len(self.d_m) != 3 or len(self.d_u) != 3:
            raise ValueError("d_m and d_u need exactly three channel signals")
        for sig in (*self.d_m, *self.d_u, self.d_v):
            sig.validate()


def sample(profile: DisturbanceProfile, t: float) -> DisturbanceSample:
    """Evaluate every channel of ``profile`` at time ``t`` (requires t >= 0)."""
    if t < 0.0:
        raise ValueError(f"disturbances are defined for t >= 0, got t={t}")
    return DisturbanceSample(
        d_m=np.array([profile.d_m[0](t), profile.d_m[1](t), profile.d_m[2](t)]),
        d_u=np.array([profile.d_u[0](t), profile.d_u[1](t), profile.d_u[2](t)]),
        d_v=profile.d_v(t),
    )


def zero_profile() -> DisturbanceProfile:
    """All channels identically zero (undisturbed plant)."""
    return DisturbanceProfile()


def default_profile(rate_in_degrees: bool = False) -> DisturbanceProfile:
    """The stock scenario disturbances as a composable profile.

    Moment channels switch on at t = 5 s, the airspeed channel at t = 6 s, and
    the Euler-rate channels run from t = 0.  The printed rate amplitude (2.1)
    carries no explicit unit; the default reads it literally as rad/s, matching
    ``rate_disturbance``.  ``rate_in_degrees=True`` reads the same number as
    deg/s instead, the scale consistent with the rest of the angular scenario
    data (initial attitude and body rates are given in degrees), which keeps
    the vehicle inside its attitude envelope.
    """
    rate_amp = math.radians(2.1) if rate_in_degrees else 2.1
    rate = Sine(rate_amp, math.pi / 19.0)
    return DisturbanceProfile(
        d_m=(
            Piecewise((5.0,), (Zero(), Sine(1.5, math.pi / 17.0))),
            Piecewise((5.0,), (Zero(), Sine(0.8, math.pi / 15.0))),
            Piecewise((5.0,), (Zero(), Sine(1.1, math.pi / 16.0))),
        ),
        d_u=(rate, rate, rate),
        d_v=Piecewise((6.0,), (Zero(), Sine(5.0, 0.2))),
    )
