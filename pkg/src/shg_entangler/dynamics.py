"""Noiseless mean-field dynamics, linear stability and the pitchfork bifurcation.

Time is measured in round trips (tau = 1 internally); every rate below is a
per-round-trip coefficient.  Jacobians and eigenvalues are reported in units
of 1/tau.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import Diverged, StepTooLarge
from .model import (
    CavityParams,
    DriveSpec,
    Regime,
    SteadyState,
    check_steady_state,
    input_amplitude,
    steady_state,
)

__all__ = [
    "FieldState",
    "Trajectory",
    "StabilityReport",
    "mean_field_derivative",
    "integrate_mean_field",
    "jacobian",
    "quadrature_blocks",
    "stability",
    "antisymmetric_perturbation",
    "PitchforkOutcome",
    "pitchfork_experiment",
    "CONVERGENCE_TOL",
    "CONVERGENCE_WINDOW",
    "DIVERGENCE_BOUND",
]

CONVERGENCE_TOL = 1e-10
CONVERGENCE_WINDOW = 10
DIVERGENCE_BOUND = 1e6
PERTURBATION_SCALE = 1e-6


@dataclass(frozen=True)
class FieldState:
    """Instantaneous complex intracavity amplitudes."""

    a0: complex
    a1: complex
    a2: complex

    def __post_init__(self):
        for name in ("a0", "a1", "a2"):
            value = complex(getattr(self, name))
            if not (math.isfinite(value.real) and math.isfinite(value.imag)):
                raise ValueError(f"{name} is not finite")
            object.__setattr__(self, name, value)

    def to_array(self) -> np.ndarray:
        return np.array([self.a0, self.a1, self.a2], dtype=complex)

    @classmethod
    def from_array(cls, arr) -> "FieldState":
        return cls(*arr)

    @classmethod
    def from_steady(cls, steady: SteadyState) -> "FieldState":
        return cls(steady.alpha0, steady.alpha1, steady.alpha2)


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # shape (n, 3), complex
    converged: bool
    final_residual: float

    def __post_init__(self):
        if len(self.times) != len(self.states):
            raise ValueError("times and states must have equal length")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be strictly increasing")

    @property
    def final(self) -> FieldState:
        return FieldState.from_array(self.states[-1])


@dataclass(frozen=True)
class StabilityReport:
    eigenvalues: np.ndarray
    stable: bool
    x_minus_eigenvalue: float
    pitchfork_flag: bool


def _rhs(y: np.ndarray, params: CavityParams, drive_term: float) -> np.ndarray:
    a0, a1, a2 = y
    chi = params.chi
    g = params.gamma
    return np.array(
        [
            -params.gamma0 * a0 - chi * a1 * a2,
            -g * a1 + chi * np.conj(a2) * a0 + drive_term,
            -g * a2 + chi * np.conj(a1) * a0 + drive_term,
        ]
    )


def _drive_term(params: CavityParams, drive: DriveSpec) -> float:
    return math.sqrt(2.0 * params.gamma_b) * input_amplitude(params, drive)


def mean_field_derivative(state: FieldState, params: CavityParams, drive: DriveSpec) -> FieldState:
    """tau * d(alpha)/dt for the noiseless equations of motion."""
    return FieldState.from_array(_rhs(state.to_array(), params, _drive_term(params, drive)))


def integrate_mean_field(
    init: FieldState,
    params: CavityParams,
    drive: DriveSpec,
    horizon: float,
    step: float,
    record_every: int = 1,
    stop_when_converged: bool = False,
) -> Trajectory:
    """Fixed-step RK4 integration over ``horizon`` round trips.

    The run counts as converged once the derivative max-norm has stayed below
    CONVERGENCE_TOL for CONVERGENCE_WINDOW consecutive recorded samples.
    """
    if horizon <= 0:
        raise ValueError("horizon must be positive")
    max_step = 0.1 / max(params.gamma, params.gamma0)
    if step <= 0 or step > max_step:
        raise StepTooLarge(f"step {step} outside (0, {max_step:.6g}]")

    f = _drive_term(params, drive)
    n_steps = int(math.ceil(horizon / step - 1e-12))
    y = init.to_array()
    times = [0.0]
    states = [y.copy()]
    quiet = 0
    resid = float(np.max(np.abs(_rhs(y, params, f))))

    for i in range(1, n_steps + 1):
        h = min(step, horizon - (i - 1) * step)
        k1 = _rhs(y, params, f)
        k2 = _rhs(y + 0.5 * h * k1, params, f)
        k3 = _rhs(y + 0.5 * h * k2, params, f)
        k4 = _rhs(y + h * k3, params, f)
        y = y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        if not np.all(np.isfinite(y)) or np.max(np.abs(y)) > DIVERGENCE_BOUND:
            raise Diverged(f"amplitude exceeded {DIVERGENCE_BOUND:g} at t = {(i * step):.6g}")
        if i % record_every == 0 or i == n_steps:
            times.append(min(i * step, horizon))
            states.append(y.copy())
            resid = float(np.max(np.abs(_rhs(y, params, f))))
            quiet = quiet + 1 if resid < CONVERGENCE_TOL else 0
            if stop_when_converged and quiet >= CONVERGENCE_WINDOW:
                break

    return Trajectory(np.array(times), np.array(states), quiet >= CONVERGENCE_WINDOW, resid)


def quadrature_blocks(alpha0: float, alpha1: float, alpha2: float, params: CavityParams):
    """Drift matrices of the amplitude (X) and phase (Y) quadrature fluctuations.

    Both act on ``(dq0, dq1, dq2)`` and are returned in units of 1/tau.
    """
    chi, g, g0 = params.chi, params.gamma, params.gamma0
    x_block = np.array(
        [
            [-g0, -chi * alpha2, -chi * alpha1],
            [chi * alpha2, -g, chi * alpha0],
            [chi * alpha1, chi * alpha0, -g],
        ]
    )
    y_block = np.array(
        [
            [-g0, -chi * alpha2, -chi * alpha1],
            [chi * alpha2, -g, -chi * alpha0],
            [chi * alpha1, -chi * alpha0, -g],
        ]
    )
    return x_block / params.tau, y_block / params.tau


def jacobian(steady: SteadyState, params: CavityParams) -> np.ndarray:
    """6x6 drift matrix on (dX0, dX1, dX2, dY0, dY1, dY2).

    Real stationary amplitudes decouple the quadratures, so the result is
    block diagonal.
    """
    check_steady_state(steady, params)
    x_block, y_block = quadrature_blocks(steady.alpha0, steady.alpha1, steady.alpha2, params)
    out = np.zeros((6, 6))
    out[:3, :3] = x_block
    out[3:, 3:] = y_block
    return out


_ANTISYMMETRIC = np.array([0.0, 1.0, -1.0]) / math.sqrt(2.0)


def stability(steady: SteadyState, params: CavityParams) -> StabilityReport:
    """Eigenvalues of the Jacobian and the soft antisymmetric amplitude mode.

    For symmetric states (0, 1, -1) is an exact eigenvector of the X block
    with eigenvalue -gamma (1 - sigma'^2) / tau; it is checked against the
    numerical block before being reported.  For the asymmetric branches no
    exact antisymmetric eigenvector exists and the X-block eigenvalue whose
    eigenvector overlaps most with (0, 1, -1) is reported instead.
    """
    jac = jacobian(steady, params)
    eig = np.linalg.eigvals(jac)
    x_block = jac[:3, :3]
    g = params.gamma
    if steady.regime.symmetric:
        lam = -g * (1.0 - steady.sigma_prime**2) / params.tau
        mismatch = np.max(np.abs(x_block @ _ANTISYMMETRIC - lam * _ANTISYMMETRIC))
        if mismatch > 1e-9 * g / params.tau:
            raise AssertionError(f"antisymmetric mode check failed by {mismatch:.3e}")
    else:
        w, v = np.linalg.eig(x_block)
        k = int(np.argmax(np.abs(_ANTISYMMETRIC @ v) / np.linalg.norm(v, axis=0)))
        lam = float(w[k].real)
    return StabilityReport(
        eigenvalues=eig,
        stable=bool(np.all(eig.real < 0)),
        x_minus_eigenvalue=float(lam),
        pitchfork_flag=bool(abs(lam) <= 1e-9 * g / params.tau),
    )


def antisymmetric_perturbation(
    params: CavityParams, drive: DriveSpec, delta: float | None = None
) -> FieldState:
    """Symmetric stationary state displaced by (+delta, -delta) in the subharmonic modes.

    ``delta`` defaults to 1e-6 of sqrt(gamma gamma0)/chi; a negative value
    pushes the state toward the mirror branch.
    """
    if delta is None:
        delta = PERTURBATION_SCALE * math.sqrt(params.gamma * params.gamma0) / params.chi
    sym = steady_state(params, drive, "Symmetric")
    return FieldState(sym.alpha0, sym.alpha1 + delta, sym.alpha2 - delta)


@dataclass
class PitchforkOutcome:
    final: FieldState
    trajectory: Trajectory
    branch: Regime | None
    branch_distance: float
    product_ratio: float


def pitchfork_experiment(
    params: CavityParams,
    drive: DriveSpec,
    delta: float | None = None,
    horizon: float = 20000.0,
    step: float = 1.0,
) -> PitchforkOutcome:
    """Integrate from a perturbed symmetric state and identify the final branch.

    ``product_ratio`` is alpha1*alpha2*chi^2/(gamma*gamma0) of the final
    state, which is 1 on either asymmetric branch.  ``branch`` is the closest
    stationary solution (relative distance in ``branch_distance``) or None if
    the state is not within 1e-6 of any of them.
    """
    init = antisymmetric_perturbation(params, drive, delta)
    traj = integrate_mean_field(init, params, drive, horizon, step, record_every=10)
    end = traj.states[-1]
    candidates = [steady_state(params, drive, "Symmetric")]
    if candidates[0].regime not in (Regime.BELOW_THRESHOLD, Regime.AT_THRESHOLD):
        candidates += [steady_state(params, drive, b) for b in ("BranchA", "BranchB")]
    best, best_dist = None, math.inf
    for cand in candidates:
        ref = np.array([cand.alpha0, cand.alpha1, cand.alpha2])
        dist = float(np.linalg.norm(end - ref) / np.linalg.norm(ref)) if np.any(ref) else float(np.linalg.norm(end))
        if dist < best_dist:
            best, best_dist = cand.regime, dist
    ratio = float((end[1] * end[2]).real * params.chi**2 / (params.gamma * params.gamma0))
    return PitchforkOutcome(
        final=FieldState.from_array(end),
        trajectory=traj,
        branch=best if best_dist <= 1e-6 else None,
        branch_distance=best_dist,
        product_ratio=ratio,
    )
