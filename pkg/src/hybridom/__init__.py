"""Pump-probe response of a hybrid optomechanical cavity (moving mirror + two-level atom)."""

__version__ = "0.1.0"

from .errors import HybridomError
from .params import (
    DriveParams,
    PowerCalibration,
    SystemParams,
    amplitude_to_power,
    cyclic_to_angular,
    reference_params,
    power_to_amplitude,
    validate,
)
from .steady import SteadyState, cubic_roots, solve_steady_state
from .response import (
    ProbeResponse,
    Variant,
    mechanical_susceptibility,
    probe_response,
    transmission_spectrum,
)
from .dispersion import DispersionCurve, delay_at, group_delay, unwrap_phase

