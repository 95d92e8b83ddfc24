"""Closed-form output correlation spectra and the inseparability criteria.

Spectra are normalized so that vacuum (no coupling) gives exactly 1 for each
quadrature combination.  The raw closed forms evaluate to 2 for vacuum inputs
because they add the noise of two output ports, so they are halved here.
With this convention the sum criterion compares against 2 and the product
criterion against 1.

Every function takes the dimensionless stationary amplitude sigma' directly,
which lets callers evaluate the symmetric continuation above threshold.
Frequencies are normalized as Omega = omega * tau / gamma, so that
i*omega*tau = i*Omega*gamma.  All spectral functions broadcast over numpy
arrays of ``omega_norm``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import CavityParams

__all__ = [
    "SpectrumPoint",
    "denominator_D",
    "spectrum_x_sum",
    "spectrum_y_diff",
    "duan_sum",
    "epr_product",
    "spectrum_point",
    "SQL_SUM_BOUND",
    "SQL_PRODUCT_BOUND",
]

SQL_SUM_BOUND = 2.0
SQL_PRODUCT_BOUND = 1.0


def denominator_D(omega_norm, sigma_prime: float, params: CavityParams):
    """Characteristic polynomial of the symmetric amplitude-quadrature subsystem.

    D = (gamma0 + s)(gamma (1 + sigma'^2) + s) + 2 gamma gamma0 sigma'^2, s = i Omega gamma.
    """
    g, g0 = params.gamma, params.gamma0
    s = 1j * np.asarray(omega_norm, dtype=float) * g
    sp2 = sigma_prime * sigma_prime
    return (g0 + s) * (g * (1.0 + sp2) + s) + 2.0 * g * g0 * sp2


def _scalar(x):
    return float(x) if np.ndim(x) == 0 else x


def spectrum_x_sum(omega_norm, sigma_prime: float, params: CavityParams):
    """Normalized spectrum of the summed output amplitude quadratures.

    The three terms are the harmonic loss port, the two coupler ports and the
    two extra-loss ports of the subharmonic modes.
    """
    g, gb, gc, g0 = params.gamma, params.gamma_b, params.gamma_c, params.gamma0
    s = 1j * np.asarray(omega_norm, dtype=float) * g
    d = denominator_D(omega_norm, sigma_prime, params)
    harmonic = 2.0 * abs(g0 * sigma_prime * np.sqrt(gb * g)) ** 2
    coupler = np.abs(gb * (g0 + s) - d / 2.0) ** 2
    loss = np.abs(np.sqrt(gb * gc) * (g0 + s)) ** 2
    raw = 8.0 / np.abs(d) ** 2 * (harmonic + coupler + loss)
    return _scalar(raw / 2.0)


def spectrum_y_diff(omega_norm, sigma_prime: float, params: CavityParams):
    """Normalized spectrum of the differenced output phase quadratures.

    Independent of gamma0 at fixed sigma'.
    """
    g, gb, gc = params.gamma, params.gamma_b, params.gamma_c
    pole = g + 1j * np.asarray(omega_norm, dtype=float) * g + g * sigma_prime * sigma_prime
    raw = 2.0 * np.abs(2.0 * gb / pole - 1.0) ** 2 + 2.0 * np.abs(2.0 * np.sqrt(gb * gc) / pole) ** 2
    return _scalar(raw / 2.0)


def duan_sum(s_x_sum: float, s_y_diff: float) -> tuple[float, bool]:
    total = s_x_sum + s_y_diff
    return total, bool(total < SQL_SUM_BOUND)


def epr_product(s_x_sum: float, s_y_diff: float) -> tuple[float, bool]:
    prod = s_x_sum * s_y_diff
    return prod, bool(prod < SQL_PRODUCT_BOUND)


@dataclass(frozen=True)
class SpectrumPoint:
    omega_norm: float
    s_x_sum: float
    s_y_diff: float
    duan_sum: float
    epr_product: float
    inseparable_sum: bool
    inseparable_product: bool

    @classmethod
    def from_spectra(cls, omega_norm: float, s_x_sum: float, s_y_diff: float) -> "SpectrumPoint":
        total, ins_sum = duan_sum(s_x_sum, s_y_diff)
        prod, ins_prod = epr_product(s_x_sum, s_y_diff)
        return cls(float(omega_norm), float(s_x_sum), float(s_y_diff), total, prod, ins_sum, ins_prod)

    def as_dict(self) -> dict:
        return {
            "omega_norm": self.omega_norm,
            "s_x_sum": self.s_x_sum,
            "s_y_diff": self.s_y_diff,
            "duan_sum": self.duan_sum,
            "epr_product": self.epr_product,
            "inseparable_sum": self.inseparable_sum,
            "inseparable_product": self.inseparable_product,
        }


def spectrum_point(omega_norm: float, sigma_prime: float, params: CavityParams) -> SpectrumPoint:
    if omega_norm < 0:
        raise ValueError("omega_norm must be non-negative")
    return SpectrumPoint.from_spectra(
        omega_norm,
        spectrum_x_sum(omega_norm, sigma_prime, params),
        spectrum_y_diff(omega_norm, sigma_prime, params),
    )
