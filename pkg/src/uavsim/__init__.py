"""Closed-loop fixed-wing UAV simulation toolkit.

Adaptive-gain generalized super-twisting sliding-mode inner loops (attitude
and airspeed, on integral sliding manifolds) composed with an online
actor-critic nearly-optimal outer loop, a 6-DOF rigid-body plant, scenario
disturbance generators, a fixed-gain terminal-surface baseline thrust law,
and a fixed-step simulation engine with CSV/summary outputs.
"""

from .adp import AdpParams, AdpState
from .baselines import FtsmGstParams, FtsmGstState
from .disturbances import (
    DisturbanceProfile,
    DisturbanceSample,
    default_profile,
    sample,
    zero_profile,
)
from .dynamics import (
    ComState,
    UavParams,
    UavState,
    airspeed_quantities,
    plant_derivative,
    rotation_R_I,
    rotation_R_Theta,
)
from .engine import (
    COLUMNS,
    InitialConditions,
    RunResult,
    ScenarioConfig,
    run,
    save_run,
    write_csv,
    write_summary,
)
from .errors import ConfigError, SingularityError
from .config import apply_overrides, config_from_dict, load_config, load_scenario
from .references import ReferenceCommand, default_reference
from .smc_airspeed import AirspeedSmcParams, AirspeedSmcState, run_siso_demo
from .smc_attitude import AttitudeSmcParams, AttitudeSmcState

__version__ = "0.1.0"

__all__ = [
    "AdpParams",
    "AdpState",
    "AirspeedSmcParams",
    "AirspeedSmcState",
    "AttitudeSmcParams",
    "AttitudeSmcState",
    "COLUMNS",
    "ComState",
    "ConfigError",
    "DisturbanceProfile",
    "DisturbanceSample",
    "FtsmGstParams",
    "FtsmGstState",
    "InitialConditions",
    "ReferenceCommand",
    "RunResult",
    "ScenarioConfig",
    "SingularityError",
    "UavParams",
    "UavState",
    "airspeed_quantities",
    "apply_overrides",
    "config_from_dict",
    "default_profile",
    "default_reference",
    "load_config",
    "load_scenario",
    "plant_derivative",
    "rotation_R_I",
    "rotation_R_Theta",
    "run",
    "run_siso_demo",
    "sample",
    "save_run",
    "write_csv",
    "write_summary",
    "zero_profile",
    "__version__",
]
