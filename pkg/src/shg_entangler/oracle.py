"""Independent checks of the closed-form spectra.

Two routes are provided:

* a brute-force frequency-domain solve of the full linearized quadrature
  equations, valid for any real steady state including the asymmetric
  branches, followed by the coupler input-output relation;
* a stochastic time-domain integration of the same linear equations
  (Euler-Maruyama) driven by white vacuum noise, analysed with Welch's method.

Noise convention: every input quadrature is white with unit two-sided spectral
density, which makes an empty cavity reflect exactly the vacuum level.  Output
spectra are halved like the closed forms so that vacuum maps to 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
from scipy import signal

from .dynamics import quadrature_blocks
from .errors import InsufficientData, NonFiniteSample, SingularSystem, StepTooLarge
from .model import CavityParams, SteadyState

__all__ = [
    "NOISE_BASIS",
    "OUTPUT_LABELS",
    "TransferResponse",
    "transfer_matrices",
    "output_spectra_full",
    "LangevinRun",
    "simulate_langevin",
    "WelchEstimate",
    "welch_psd",
    "WELCH_SQL_SCALE",
]

NOISE_BASIS = ("X_c0", "Y_c0", "X_b1", "Y_b1", "X_b2", "Y_b2", "X_c1", "Y_c1", "X_c2", "Y_c2")
OUTPUT_LABELS = ("x_sum", "x_diff", "y_sum", "y_diff")

# columns of NOISE_BASIS feeding each quadrature block, ordered (c0, b1, b2, c1, c2)
_X_COLUMNS = [0, 2, 4, 6, 8]
_Y_COLUMNS = [1, 3, 5, 7, 9]

# one-sided Welch density (factor 2) of a two-port sum whose vacuum level is 2
WELCH_SQL_SCALE = 0.25

_SINGULAR_COND = 1e13


def _injection(params: CavityParams) -> np.ndarray:
    b = np.zeros((3, 5))
    b[0, 0] = math.sqrt(2.0 * params.gamma0)
    b[1, 1] = b[2, 2] = math.sqrt(2.0 * params.gamma_b)
    b[1, 3] = b[2, 4] = math.sqrt(2.0 * params.gamma_c)
    return b


def _coupler_pickoff() -> np.ndarray:
    e = np.zeros((2, 5))
    e[0, 1] = e[1, 2] = 1.0
    return e


def _drift_blocks(steady: SteadyState, params: CavityParams):
    # per-round-trip drift, so the frequency variable is i*omega*tau = i*Omega*gamma
    xb, yb = quadrature_blocks(steady.alpha0, steady.alpha1, steady.alpha2, params)
    return xb * params.tau, yb * params.tau


@dataclass(frozen=True)
class TransferResponse:
    """Output response at one normalized frequency.

    Rows of ``matrix`` follow OUTPUT_LABELS, columns follow NOISE_BASIS.
    """

    frequency: float
    matrix: np.ndarray

    def raw_spectra(self) -> np.ndarray:
        return np.sum(np.abs(self.matrix) ** 2, axis=1)


def transfer_matrices(omega_norm: float, steady: SteadyState, params: CavityParams) -> TransferResponse:
    s = 1j * omega_norm * params.gamma
    inj = _injection(params)
    pick = _coupler_pickoff()
    t = math.sqrt(2.0 * params.gamma_b)
    out = np.zeros((4, 10), dtype=complex)
    for block, cols, rows in zip(_drift_blocks(steady, params), (_X_COLUMNS, _Y_COLUMNS), ((0, 1), (2, 3))):
        system = s * np.eye(3) - block
        if np.linalg.cond(system) > _SINGULAR_COND:
            raise SingularSystem(f"linearized system is singular at Omega = {omega_norm}")
        resp = np.linalg.solve(system, inj)
        ports = t * resp[1:] - pick  # outgoing fields of subharmonic modes 1 and 2
        out[rows[0], cols] = ports[0] + ports[1]
        out[rows[1], cols] = ports[0] - ports[1]
    return TransferResponse(float(omega_norm), out)


def output_spectra_full(omega_norm: float, steady: SteadyState, params: CavityParams):
    """Normalized (sXsum, sXdiff, sYsum, sYdiff) at one frequency."""
    return tuple(float(v) for v in transfer_matrices(omega_norm, steady, params).raw_spectra() / 2.0)


@dataclass
class LangevinRun:
    seed: int
    step: float
    duration: float
    params: CavityParams
    series: np.ndarray = field(repr=False)  # shape (4, n), rows follow OUTPUT_LABELS

    def __getitem__(self, label: str) -> np.ndarray:
        return self.series[OUTPUT_LABELS.index(label)]


class _TriangularRecursion:
    """Runs q[k+1] = M q[k] + u[k] chunk by chunk.

    M is brought to complex Schur form so each coordinate becomes a scalar
    first-order recursion, solved by back substitution with ``lfilter``.
    The recursion output at index k is the state *before* input u[k].
    """

    def __init__(self, m: np.ndarray, q0: np.ndarray):
        self.t, self.z = scipy.linalg.schur(m.astype(complex), output="complex")
        self.state = self.z.conj().T @ q0.astype(complex)

    def run(self, u: np.ndarray) -> np.ndarray:
        v = self.z.conj().T @ u
        n = len(self.state)
        w = np.empty_like(v)
        for i in range(n - 1, -1, -1):
            drive = v[i] + self.t[i, i + 1 :] @ w[i + 1 :]
            w[i], zf = signal.lfilter([0.0, 1.0], [1.0, -self.t[i, i]], drive, zi=[self.state[i]])
            self.state[i] = zf[0]
        return (self.z @ w).real


def _stationary_sample(m: np.ndarray, q: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    if np.max(np.abs(np.linalg.eigvals(m))) >= 1.0:
        rng.standard_normal(3)  # keep the stream layout independent of stability
        return np.zeros(3)
    cov = scipy.linalg.solve_discrete_lyapunov(m, q)
    cov = 0.5 * (cov + cov.T)
    w, v = np.linalg.eigh(cov)
    return v @ (np.sqrt(np.clip(w, 0.0, None)) * rng.standard_normal(3))


def simulate_langevin(
    steady: SteadyState,
    params: CavityParams,
    duration: float,
    step: float,
    seed: int,
    chunk_size: int = 1 << 18,
) -> LangevinRun:
    """Euler-Maruyama integration of the linearized quadrature fluctuations.

    Each of the ten vacuum inputs contributes an independent Wiener increment
    of variance ``step`` per step.  Outputs pair the intracavity state at the
    start of a step with the input noise of that step (the Ito-consistent
    choice), and are recorded every step.  The fluctuations start from a draw
    of the stationary distribution of the discrete recursion, so no burn-in is
    needed.  Times are in round trips.
    """
    g = params.gamma
    if step <= 0 or g * step > 0.05:
        raise StepTooLarge(f"gamma*step = {g * step:.4g} exceeds 0.05")
    if duration < 1e4 / g:
        raise ValueError(f"duration must be at least 1e4/gamma = {1e4 / g:.4g} round trips")
    n = int(round(duration / step))

    rng = np.random.default_rng(seed)
    inj = _injection(params)
    t = math.sqrt(2.0 * params.gamma_b)
    sqrt_dt = math.sqrt(step)
    recursions = []
    for block in _drift_blocks(steady, params):
        m = np.eye(3) + block * step
        q0 = _stationary_sample(m, inj @ inj.T * step, rng)
        recursions.append(_TriangularRecursion(m, q0))

    series = np.empty((4, n))
    for start in range(0, n, chunk_size):
        stop = min(start + chunk_size, n)
        dw = rng.standard_normal((10, stop - start)) * sqrt_dt
        for rec, cols, rows in zip(recursions, (_X_COLUMNS, _Y_COLUMNS), ((0, 1), (2, 3))):
            noise = dw[cols]
            q = rec.run(inj @ noise)
            out1 = t * q[1] - noise[1] / step
            out2 = t * q[2] - noise[2] / step
            series[rows[0], start:stop] = out1 + out2
            series[rows[1], start:stop] = out1 - out2
        if not np.all(np.isfinite(series[:, start:stop])):
            raise NonFiniteSample(f"non-finite output between samples {start} and {stop}")
    return LangevinRun(seed=seed, step=step, duration=n * step, params=params, series=series)


@dataclass(frozen=True)
class WelchEstimate:
    omega_norm: np.ndarray
    spectra: np.ndarray  # shape (4, nfreq), rows follow OUTPUT_LABELS
    segment_length: int
    segments: int

    def at(self, omega_norm) -> np.ndarray:
        """Linear interpolation of all four spectra at the given frequencies."""
        omega_norm = np.atleast_1d(np.asarray(omega_norm, dtype=float))
        return np.array([np.interp(omega_norm, self.omega_norm, row) for row in self.spectra])


def welch_psd(run: LangevinRun, segment_length: int, overlap_fraction: float = 0.5) -> WelchEstimate:
    """Hann-windowed averaged periodogram of the four output series.

    Returned spectra use the SQL-normalized convention (vacuum = 1); the
    frequency axis is Omega = omega*tau/gamma.
    """
    n = run.series.shape[1]
    if segment_length < 8 or segment_length > n:
        raise InsufficientData(f"segment_length {segment_length} not in [8, {n}]")
    if not 0 <= overlap_fraction < 1:
        raise ValueError("overlap_fraction must lie in [0, 1)")
    noverlap = int(overlap_fraction * segment_length)
    fs = 1.0 / run.step
    rows = []
    for x in run.series:
        # one row at a time keeps the segment buffer small
        f, p = signal.welch(x, fs=fs, window="hann", nperseg=segment_length, noverlap=noverlap, detrend=False)
        rows.append(p * WELCH_SQL_SCALE)
    omega_norm = 2.0 * np.pi * f / run.params.gamma  # f in cycles per round trip
    segments = 1 + (n - segment_length) // (segment_length - noverlap)
    return WelchEstimate(omega_norm, np.array(rows), segment_length, segments)
