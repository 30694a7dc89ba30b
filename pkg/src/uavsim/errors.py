"""Exception types shared across the toolkit."""

from __future__ import annotations


class ConfigError(Exception):
    """A scenario/controller configuration violates a documented invariant.

    The message always starts with the dotted key path of the offending
    field so CLI users can locate it in their config file.
    """


class SingularityError(Exception):
    """The simulation entered a kinematic singularity (pitch near +/-90 deg,
    vanishing airspeed, or wind angles outside their guard margins).

    Carries the simulation time at which the abort happened when raised
    from inside a run.
    """

    def __init__(self, message: str, t: float | None = None):
        self.t = t
        if t is not None:
            message = f"{message} (at t={t:.6f} s)"
        super().__init__(message)
