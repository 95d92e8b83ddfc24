"""Spectra at fixed drive chi*beta = 0.001 and Omega = 0.6 as the harmonic loss grows."""

import numpy as np

from shg_entangler.model import DriveSpec, steady_state
from shg_entangler.spectra import spectrum_x_sum, spectrum_y_diff
from shg_entangler.sweep import FIGURE_PARAMS

if __name__ == "__main__":
    print(f"{'gamma0':>10s} {'sigma':>8s} {'S_X':>8s} {'S_Y':>8s} regime")
    for g0 in np.r_[np.geomspace(1e-4, 1e-3, 4), np.linspace(0.002, 0.02, 10)]:
        p = FIGURE_PARAMS.replace(gamma0=g0)
        st = steady_state(p, DriveSpec.amplitude(0.001), "Symmetric")
        sx = spectrum_x_sum(0.6, st.sigma_prime, p)
        sy = spectrum_y_diff(0.6, st.sigma_prime, p)
        print(f"{g0:10.2e} {st.sigma:8.4f} {sx:8.4f} {sy:8.4f} {st.regime.value}")
