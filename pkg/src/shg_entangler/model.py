"""Cavity parameters, pump drive and the classical stationary solutions.

All loss and coupling coefficients are per round trip, so rates are in units
of 1/tau.  The two subharmonic modes share the same coupler and extra losses
(balanced cavity), and both are pumped with the same real amplitude beta at
zero phase.  Only the products chi*beta and the pump parameter sigma enter the
observable quantities, which is why DriveSpec stores chi*beta rather than beta.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import BranchUnavailable, DegenerateHarmonicLoss, InvalidSteadyState

__all__ = [
    "CavityParams",
    "DriveKind",
    "DriveSpec",
    "Branch",
    "Regime",
    "SteadyState",
    "threshold_pump",
    "threshold_chi_beta",
    "pump_parameter",
    "input_amplitude",
    "sigma_prime",
    "steady_state",
    "stationary_residuals",
    "check_steady_state",
    "AT_THRESHOLD_TOL",
    "LARGE_LOSS_WARNING",
]

AT_THRESHOLD_TOL = 1e-9
LARGE_LOSS_WARNING = 0.2


@dataclass(frozen=True)
class CavityParams:
    """Static physics of the triply resonant cavity.

    Attributes:
        gamma_b: coupler transmission loss of each subharmonic mode.
        gamma_c: extra intracavity loss of each subharmonic mode.
        gamma0: total loss of the harmonic mode.
        chi: nonlinear coupling per round trip.
        tau: round-trip time, common to all three modes.
    """

    gamma_b: float
    gamma_c: float
    gamma0: float
    chi: float = 1.0
    tau: float = 1.0

    def __post_init__(self):
        for name in ("gamma_b", "gamma_c", "gamma0", "chi", "tau"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
        if self.gamma0 == 0:
            raise DegenerateHarmonicLoss(
                "gamma0 = 0 makes the oscillation threshold vanish; the pump parameter is undefined"
            )
        if self.gamma_b <= 0 or self.gamma0 < 0 or self.chi <= 0 or self.tau <= 0:
            raise ValueError("gamma_b, gamma0, chi and tau must be strictly positive")
        if self.gamma_c < 0:
            raise ValueError("gamma_c must be non-negative")
        big = [n for n in ("gamma_b", "gamma_c", "gamma0") if getattr(self, n) > LARGE_LOSS_WARNING]
        if big:
            warnings.warn(
                f"loss coefficients {big} exceed {LARGE_LOSS_WARNING}; the small-loss cavity model is questionable",
                RuntimeWarning,
                stacklevel=3,
            )

    @property
    def gamma(self) -> float:
        """Total subharmonic loss gamma_b + gamma_c."""
        return self.gamma_b + self.gamma_c

    @property
    def reflection(self) -> float:
        return 1.0 - self.gamma_b

    @property
    def transmission(self) -> float:
        return math.sqrt(2.0 * self.gamma_b)

    def replace(self, **changes) -> "CavityParams":
        fields = dict(gamma_b=self.gamma_b, gamma_c=self.gamma_c, gamma0=self.gamma0, chi=self.chi, tau=self.tau)
        fields.update(changes)
        return CavityParams(**fields)


class DriveKind(str, enum.Enum):
    AMPLITUDE = "Amplitude"
    PUMP_PARAMETER = "PumpParameter"


@dataclass(frozen=True)
class DriveSpec:
    """Pump drive, either as chi*beta or as sigma = beta / beta_th.

    Both subharmonic inputs carry the same real amplitude.  Input phases are
    fixed at zero; any other value is rejected.
    """

    kind: DriveKind
    value: float
    phase1: float = 0.0
    phase2: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "kind", DriveKind(self.kind))
        if not math.isfinite(self.value) or self.value < 0:
            raise ValueError(f"drive value must be finite and >= 0, got {self.value!r}")
        if self.phase1 != 0.0 or self.phase2 != 0.0:
            raise ValueError("only zero input phases are supported")

    @classmethod
    def amplitude(cls, chi_beta: float) -> "DriveSpec":
        return cls(DriveKind.AMPLITUDE, chi_beta)

    @classmethod
    def pump(cls, sigma: float) -> "DriveSpec":
        return cls(DriveKind.PUMP_PARAMETER, sigma)


class Branch(str, enum.Enum):
    AUTO = "Auto"
    SYMMETRIC = "Symmetric"
    BRANCH_A = "BranchA"
    BRANCH_B = "BranchB"


class Regime(str, enum.Enum):
    BELOW_THRESHOLD = "BelowThreshold"
    AT_THRESHOLD = "AtThreshold"
    ABOVE_A = "AboveThresholdBranchA"
    ABOVE_B = "AboveThresholdBranchB"
    SYMMETRIC_UNSTABLE = "SymmetricUnstable"

    @property
    def symmetric(self) -> bool:
        return self not in (Regime.ABOVE_A, Regime.ABOVE_B)


@dataclass(frozen=True)
class SteadyState:
    """Stationary intracavity amplitudes (all real) and regime metadata."""

    alpha0: float
    alpha1: float
    alpha2: float
    sigma: float
    sigma_prime: float
    regime: Regime

    def as_dict(self) -> dict:
        return {
            "alpha0": self.alpha0,
            "alpha1": self.alpha1,
            "alpha2": self.alpha2,
            "sigma": self.sigma,
            "sigma_prime": self.sigma_prime,
            "regime": self.regime.value,
        }

    def swapped(self) -> "SteadyState":
        """The mirror-image state with the two subharmonic modes exchanged."""
        regime = {Regime.ABOVE_A: Regime.ABOVE_B, Regime.ABOVE_B: Regime.ABOVE_A}.get(self.regime, self.regime)
        return SteadyState(self.alpha0, self.alpha2, self.alpha1, self.sigma, self.sigma_prime, regime)


def threshold_pump(params: CavityParams) -> float:
    """Oscillation threshold amplitude beta_th = sqrt(2 gamma^3 gamma0 / (chi^2 gamma_b))."""
    g = params.gamma
    return math.sqrt(2.0 * g**3 * params.gamma0 / (params.chi**2 * params.gamma_b))


def threshold_chi_beta(params: CavityParams) -> float:
    return params.chi * threshold_pump(params)


def pump_parameter(params: CavityParams, drive: DriveSpec) -> float:
    if drive.kind is DriveKind.PUMP_PARAMETER:
        return drive.value
    if params.gamma0 == 0:
        raise DegenerateHarmonicLoss("sigma is undefined for gamma0 = 0")
    return drive.value / threshold_chi_beta(params)


def input_amplitude(params: CavityParams, drive: DriveSpec) -> float:
    """Pump amplitude beta outside the coupler."""
    if drive.kind is DriveKind.AMPLITUDE:
        return drive.value / params.chi
    return drive.value * threshold_pump(params)


def sigma_prime(sigma):
    """Real root of s**3 + s - 2*sigma = 0 from Cardano's formula.

    The textbook form ``v - 1/(3v)`` with ``v = (sigma + sqrt(sigma**2 + 1/27))**(1/3)``
    cancels catastrophically as sigma -> 0.  Writing the difference of the two
    cube roots as ``(a**3 - b**3) / (a**2 + ab + b**2)`` with ``a*b = 1/3`` and
    ``a**3 - b**3 = 2*sigma`` gives a cancellation-free expression.
    Accepts scalars or arrays.
    """
    s = np.asarray(sigma, dtype=float)
    if np.any(s < 0):
        raise ValueError("sigma must be non-negative")
    v = np.cbrt(s + np.sqrt(s * s + 1.0 / 27.0))
    v2 = v * v
    out = 2.0 * s / (v2 + 1.0 / 3.0 + 1.0 / (9.0 * v2))
    return float(out) if out.ndim == 0 else out


def _classify(sigma: float) -> Regime:
    if abs(sigma - 1.0) <= AT_THRESHOLD_TOL:
        return Regime.AT_THRESHOLD
    if sigma < 1.0:
        return Regime.BELOW_THRESHOLD
    return Regime.ABOVE_A


def steady_state(params: CavityParams, drive: DriveSpec, branch: Branch | str = Branch.AUTO) -> SteadyState:
    """Classical stationary solution for the requested branch.

    Below threshold only the symmetric solution exists and asymmetric branches
    raise BranchUnavailable.  Above threshold ``Auto`` and ``BranchA`` give the
    solution with the smaller amplitude in mode 1, ``BranchB`` its mirror image,
    and ``Symmetric`` the unstable symmetric continuation.  Within
    AT_THRESHOLD_TOL of sigma = 1 all branches coincide and the symmetric
    solution is returned.
    """
    branch = Branch(branch)
    sigma = pump_parameter(params, drive)
    sp = sigma_prime(sigma)
    g, g0, chi = params.gamma, params.gamma0, params.chi
    scale = math.sqrt(g * g0) / chi
    regime = _classify(sigma)

    if regime is Regime.BELOW_THRESHOLD and branch in (Branch.BRANCH_A, Branch.BRANCH_B):
        raise BranchUnavailable(f"branch {branch.value} requires sigma >= 1, got sigma = {sigma:.6g}")

    if regime is Regime.ABOVE_A and branch is not Branch.SYMMETRIC:
        root = math.sqrt(sigma * sigma - 1.0)
        # sigma - root == 1 / (sigma + root), free of cancellation at large sigma
        small = scale / (sigma + root)
        large = scale * (sigma + root)
        state = SteadyState(-g / chi, small, large, sigma, sp, Regime.ABOVE_A)
        return state.swapped() if branch is Branch.BRANCH_B else state

    if regime is Regime.ABOVE_A:
        regime = Regime.SYMMETRIC_UNSTABLE
    alpha = scale * sp
    return SteadyState(-g * sp * sp / chi, alpha, alpha, sigma, sp, regime)


def stationary_residuals(steady: SteadyState, params: CavityParams) -> tuple[float, float, float]:
    """Residuals of the three stationary equations.

    Returns ``(r0, r1, r2)`` where ``r0 = alpha0 + chi*alpha1*alpha2/gamma0`` and
    r1, r2 are the left-hand sides of the two subharmonic balance equations.
    """
    g, g0, chi = params.gamma, params.gamma0, params.chi
    drive = math.sqrt(2.0 * params.gamma_b) * steady.sigma * threshold_pump(params)
    a0, a1, a2 = steady.alpha0, steady.alpha1, steady.alpha2
    r0 = a0 + chi * a1 * a2 / g0
    r1 = (-g - chi**2 * a2 * a2 / g0) * a1 + drive
    r2 = (-g - chi**2 * a1 * a1 / g0) * a2 + drive
    return r0, r1, r2


def check_steady_state(steady: SteadyState, params: CavityParams, rtol: float = 1e-9) -> None:
    """Raise InvalidSteadyState unless the stationary equations hold to ``rtol``."""
    r0, r1, r2 = stationary_residuals(steady, params)
    drive = math.sqrt(2.0 * params.gamma_b) * steady.sigma * threshold_pump(params)
    if max(abs(r1), abs(r2)) > rtol * drive or abs(r0) > rtol * max(abs(steady.alpha0), 1e-300):
        raise InvalidSteadyState(f"stationary residuals too large: r0={r0:.3e}, r1={r1:.3e}, r2={r2:.3e}")
