"""Acceptance criteria, one test each.

The terminal summary (see conftest.py) prints a PASS/FAIL line per criterion.
Tolerances and runtime budgets are the published ones; nothing here is tuned
to make a criterion pass.
"""

import math
import time

import numpy as np
import pytest

from shg_entangler.dynamics import pitchfork_experiment, stability
from shg_entangler.model import CavityParams, DriveSpec, Regime, sigma_prime, stationary_residuals, steady_state
from shg_entangler.oracle import output_spectra_full, simulate_langevin, welch_psd
from shg_entangler.spectra import duan_sum, epr_product, spectrum_x_sum, spectrum_y_diff

FIG2 = CavityParams(gamma_b=0.015, gamma_c=0.005, gamma0=0.002, chi=1.0)
ANCHOR_OMEGA = 0.6
BAND = np.linspace(0.0, 5.0, 501)


class Budget:
    def __init__(self, seconds):
        self.seconds = seconds

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0
        if exc[0] is None:
            assert self.elapsed < self.seconds, f"took {self.elapsed:.2f} s, budget {self.seconds} s"


def _newton(s):
    x = max(2 * s, 1e-300) if s < 0.5 else (2 * s) ** (1 / 3)
    for _ in range(100):
        dx = (x**3 + x - 2 * s) / (3 * x * x + 1)
        x -= dx
        if abs(dx) <= 1e-17 * max(1.0, x):
            break
    return x


def _point(params, sigma, omega):
    st = steady_state(params, DriveSpec.pump(sigma) if sigma is not None else DriveSpec.amplitude(0.001))
    return st, output_spectra_full(omega, st, params)


def _criteria_points():
    """(params, steady, omega) for every point touched by criteria 1-6."""
    rng = np.random.default_rng(2)
    pts = []
    s08 = steady_state(FIG2, DriveSpec.pump(0.8))
    pts += [(FIG2, s08, w) for w in BAND]
    for _ in range(200):
        p = CavityParams(*rng.uniform([1e-4, 0.0, 1e-4], [0.1, 0.1, 0.1]))
        pts.append((p, steady_state(p, DriveSpec.pump(0.0)), rng.uniform(0, 10)))
    for g0 in (0.002, 0.02):
        p = FIG2.replace(gamma0=g0)
        pts.append((p, steady_state(p, DriveSpec.amplitude(0.001)), ANCHOR_OMEGA))
    pts.append((FIG2, steady_state(FIG2, DriveSpec.pump(0.1)), ANCHOR_OMEGA))
    return pts


def test_criterion_01_fig2_anchor():
    with Budget(1.0):
        sp = sigma_prime(0.8)
        sx = spectrum_x_sum(ANCHOR_OMEGA, sp, FIG2)
        sy = spectrum_y_diff(ANCHOR_OMEGA, sp, FIG2)
        assert abs(sx - 0.31768) <= 1e-4
        assert abs(sy - 0.33422) <= 1e-4
        full = output_spectra_full(ANCHOR_OMEGA, steady_state(FIG2, DriveSpec.pump(0.8)), FIG2)
        assert abs(full[0] - sx) <= 1e-10 * sx
        assert abs(full[3] - sy) <= 1e-10 * sy


def test_criterion_02_vacuum_calibration():
    rng = np.random.default_rng(20)
    with Budget(1.0):
        for _ in range(200):
            gb, gc, g0 = rng.uniform([1e-4, 0.0, 1e-4], [0.2, 0.2, 0.2])
            p = CavityParams(gb, gc, g0)
            assert p.gamma == gb + gc
            omega = rng.uniform(0, 20)
            assert abs(spectrum_x_sum(omega, 0.0, p) - 1) <= 1e-12
            assert abs(spectrum_y_diff(omega, 0.0, p) - 1) <= 1e-12


def test_criterion_03_below_sql_band():
    with Budget(1.0):
        sp = sigma_prime(0.8)
        assert np.all(spectrum_x_sum(BAND, sp, FIG2) < 1)
        assert np.all(spectrum_y_diff(BAND, sp, FIG2) < 1)


def test_criterion_04_inseparability():
    with Budget(1.0):
        sp = sigma_prime(0.8)
        sx = spectrum_x_sum(ANCHOR_OMEGA, sp, FIG2)
        sy = spectrum_y_diff(ANCHOR_OMEGA, sp, FIG2)
        total, sum_ok = duan_sum(sx, sy)
        prod, prod_ok = epr_product(sx, sy)
        assert sum_ok and abs(total - 0.65190) <= 1e-4
        assert prod_ok and abs(prod - 0.10618) <= 1e-4
        band = spectrum_x_sum(BAND, sp, FIG2) * spectrum_y_diff(BAND, sp, FIG2)
        assert np.all(band < 1)


def test_criterion_05_harmonic_loss_degradation():
    with Budget(1.0):
        vals = {}
        for g0 in (0.002, 0.02):
            p = FIG2.replace(gamma0=g0)
            st = steady_state(p, DriveSpec.amplitude(0.001))
            vals[g0] = (spectrum_x_sum(ANCHOR_OMEGA, st.sigma_prime, p), spectrum_y_diff(ANCHOR_OMEGA, st.sigma_prime, p))
        print(f"gamma0=0.002: S_X={vals[0.002][0]:.5f} S_Y={vals[0.002][1]:.5f}; "
              f"gamma0=0.02: S_X={vals[0.02][0]:.5f} S_Y={vals[0.02][1]:.5f}")
        assert vals[0.02][0] > vals[0.002][0]
        assert vals[0.02][1] > vals[0.002][1]
        assert abs(vals[0.02][0] - 1) <= 0.15
        assert abs(vals[0.02][1] - 1) <= 0.15


def test_criterion_06_pump_trend():
    with Budget(1.0):
        products = {}
        for sigma in (0.1, 0.8):
            sp = sigma_prime(sigma)
            products[sigma] = epr_product(spectrum_x_sum(ANCHOR_OMEGA, sp, FIG2), spectrum_y_diff(ANCHOR_OMEGA, sp, FIG2))[0]
        assert abs(spectrum_y_diff(ANCHOR_OMEGA, sigma_prime(0.1), FIG2) - 0.92217) <= 1e-3
        assert abs(products[0.8] - 0.10618) <= 1e-4
        assert products[0.8] < products[0.1]


def test_criterion_07_steady_state_algebra():
    with Budget(1.0):
        grid = np.random.default_rng(7).uniform(0, 3, 1000)
        for s in grid:
            assert abs(sigma_prime(s) - _newton(s)) <= 1e-12
        for sigma in (0.05, 0.3, 0.8, 0.999):
            st = steady_state(FIG2, DriveSpec.pump(sigma))
            drive = math.sqrt(2 * FIG2.gamma_b) * sigma * math.sqrt(2 * FIG2.gamma**3 * FIG2.gamma0 / FIG2.gamma_b)
            r0, r1, r2 = stationary_residuals(st, FIG2)
            assert abs(r0) <= 1e-12 * abs(st.alpha0)
            assert max(abs(r1), abs(r2)) <= 1e-12 * drive
        for branch in ("BranchA", "BranchB"):
            st = steady_state(FIG2, DriveSpec.pump(1.25), branch)
            assert abs(st.alpha0 + FIG2.gamma / FIG2.chi) <= 1e-12 * FIG2.gamma / FIG2.chi
            ref = FIG2.gamma * FIG2.gamma0 / FIG2.chi**2
            assert abs(st.alpha1 * st.alpha2 - ref) <= 1e-12 * ref


def test_criterion_08_pitchfork():
    with Budget(10.0):
        for sigma in np.linspace(0, 2, 41):
            st = steady_state(FIG2, DriveSpec.pump(sigma), "Symmetric")
            lam = stability(st, FIG2).x_minus_eigenvalue
            assert abs(lam + FIG2.gamma * (1 - st.sigma_prime**2) / FIG2.tau) <= 1e-9
        at = stability(steady_state(FIG2, DriveSpec.pump(1.0), "Symmetric"), FIG2).x_minus_eigenvalue
        assert abs(at) <= 1e-9
        drive = DriveSpec.pump(1.25)
        delta = 1e-6 * math.sqrt(FIG2.gamma * FIG2.gamma0) / FIG2.chi
        plus = pitchfork_experiment(FIG2, drive, +delta)
        minus = pitchfork_experiment(FIG2, drive, -delta)
        assert {plus.branch, minus.branch} == {Regime.ABOVE_A, Regime.ABOVE_B}
        for out in (plus, minus):
            assert abs(out.product_ratio - 1) <= 1e-6


def test_criterion_09_stochastic_oracle():
    omegas = [0.3, 0.6, 1.2]
    st = steady_state(FIG2, DriveSpec.pump(0.8))
    exact = np.array([[output_spectra_full(w, st, FIG2)[i] for w in omegas] for i in (0, 3)])
    with Budget(60.0):
        run = simulate_langevin(st, FIG2, duration=1e7, step=1.0, seed=1)
        single = welch_psd(run, 8192).at(omegas)[[0, 3]]
        del run
        rel = np.abs(single - exact) / exact
        print("single-seed relative error:", np.round(rel, 4).tolist())
        assert np.all(rel <= 0.05)

        ens = []
        for seed in range(20):
            run = simulate_langevin(st, FIG2, duration=1e6, step=0.5, seed=seed)
            ens.append(welch_psd(run, 16384).at(omegas)[[0, 3]])
            del run
        ens = np.array(ens)
        z = (ens.mean(axis=0) - exact) / (ens.std(axis=0, ddof=1) / math.sqrt(len(ens)))
        print("ensemble z-scores:", np.round(z, 2).tolist())
        assert np.all(np.abs(z) <= 2)


def test_criterion_10_heisenberg():
    with Budget(5.0):
        pts = _criteria_points()
        for params, st, omega in pts:
            sxs, sxd, sys_, syd = output_spectra_full(omega, st, params)
            assert sxs * sys_ >= 1 - 1e-12
            assert sxd * syd >= 1 - 1e-12
    assert len(pts) == 501 + 200 + 3
