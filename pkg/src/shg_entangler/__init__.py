"""Entangled subharmonic fields reflected from a triply resonant type II SHG cavity.

Mean-field dynamics, linearized fluctuation spectra of the reflected pump
modes, continuous-variable inseparability criteria and brute-force oracles.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    BranchUnavailable,
    ConfigError,
    DegenerateHarmonicLoss,
    Diverged,
    InsufficientData,
    InvalidSteadyState,
    NonFiniteSample,
    ShgError,
    SingularSystem,
    StepTooLarge,
)
from .model import (  # noqa: E402
    Branch,
    CavityParams,
    DriveKind,
    DriveSpec,
    Regime,
    SteadyState,
    pump_parameter,
    sigma_prime,
    steady_state,
    threshold_pump,
)
from .spectra import (  # noqa: E402
    SpectrumPoint,
    denominator_D,
    duan_sum,
    epr_product,
    spectrum_point,
    spectrum_x_sum,
    spectrum_y_diff,
)
