"""Command-line front end.

Exit codes: 0 success, 1 configuration error, 2 numerical failure (for sweeps:
every row failed).
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import __version__
from .dynamics import pitchfork_experiment, stability
from .errors import ConfigError, ShgError
from .model import CavityParams, DriveSpec, steady_state
from .oracle import OUTPUT_LABELS, output_spectra_full, simulate_langevin, welch_psd
from .spectra import spectrum_point
from .sweep import FIGURE_IDS, columns_for, figure_config, load_config, run_sweep, with_sink, write_rows

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad arguments; 2 is reserved for numerical failures here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _add_cavity(p: argparse.ArgumentParser) -> None:
    p.add_argument("--gamma-b", type=float, default=0.015, help="coupler loss (default 0.015)")
    p.add_argument("--gamma-c", type=float, default=0.005, help="extra subharmonic loss (default 0.005)")
    p.add_argument("--gamma0", type=float, default=0.002, help="harmonic loss (default 0.002)")
    p.add_argument("--chi", type=float, default=1.0)
    p.add_argument("--tau", type=float, default=1.0)


def _add_drive(p: argparse.ArgumentParser, required: bool = True) -> None:
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--sigma", type=float, help="pump parameter beta/beta_th")
    g.add_argument("--chi-beta", type=float, help="drive amplitude chi*beta")


def _params(args) -> CavityParams:
    return CavityParams(args.gamma_b, args.gamma_c, args.gamma0, args.chi, args.tau)


def _drive(args) -> DriveSpec:
    if args.chi_beta is not None:
        return DriveSpec.amplitude(args.chi_beta)
    return DriveSpec.pump(args.sigma)


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2))


def cmd_steady(args) -> int:
    params = _params(args)
    st = steady_state(params, _drive(args), args.branch)
    report = stability(st, params)
    out = st.as_dict()
    out.update(stable=report.stable, x_minus_eigenvalue=report.x_minus_eigenvalue)
    _emit(out)
    return EXIT_OK


def cmd_spectrum(args) -> int:
    if args.omega < 0:
        raise ConfigError("--omega must be non-negative")
    params = _params(args)
    st = steady_state(params, _drive(args), "Symmetric")
    out = spectrum_point(args.omega, st.sigma_prime, params).as_dict()
    out.update(sigma=st.sigma, sigma_prime=st.sigma_prime, regime=st.regime.value)
    if args.oracle:
        full = output_spectra_full(args.omega, st, params)
        out["oracle"] = dict(zip(OUTPUT_LABELS, full))
    _emit(out)
    return EXIT_OK


def _finish_sweep(config) -> int:
    rows = run_sweep(config)
    cols = columns_for(config)
    if config.sink is None:
        write_rows(rows, sys.stdout, config.format, cols)
    else:
        write_rows(rows, config.sink, config.format, cols)
        print(f"wrote {len(rows)} rows to {config.sink}", file=sys.stderr)
    if rows and all(r["error"] for r in rows):
        return EXIT_NUMERIC
    return EXIT_OK


def cmd_sweep(args) -> int:
    config = load_config(args.config)
    if args.out:
        config = with_sink(config, args.out, args.format)
    return _finish_sweep(config)


def cmd_figure(args) -> int:
    if args.points < 2:
        raise ConfigError("--points must be at least 2")
    config = with_sink(figure_config(args.id, args.points), args.out, args.format)
    return _finish_sweep(config)


def cmd_bifurcation(args) -> int:
    params = _params(args)
    drive = DriveSpec.pump(args.sigma)
    outcome = pitchfork_experiment(params, drive, args.perturb, args.horizon, args.step)
    f = outcome.final
    _emit(
        {
            "sigma": args.sigma,
            "final": {"alpha0": [f.a0.real, f.a0.imag], "alpha1": [f.a1.real, f.a1.imag], "alpha2": [f.a2.real, f.a2.imag]},
            "branch": outcome.branch.value if outcome.branch else None,
            "branch_distance": outcome.branch_distance,
            "product_ratio": outcome.product_ratio,
            "converged": outcome.trajectory.converged,
            "final_residual": outcome.trajectory.final_residual,
        }
    )
    return EXIT_OK


def cmd_langevin(args) -> int:
    params = _params(args)
    st = steady_state(params, _drive(args), "Symmetric")
    try:
        omegas = [float(w) for w in args.omega.split(",") if w.strip()]
    except ValueError:
        raise ConfigError(f"cannot parse --omega {args.omega!r}") from None
    t0 = time.perf_counter()
    run = simulate_langevin(st, params, args.duration, args.step, args.seed)
    est = welch_psd(run, args.segment, args.overlap)
    values = est.at(omegas)
    rows = []
    for k, w in enumerate(omegas):
        closed = output_spectra_full(w, st, params)
        rows.append(
            {
                "omega_norm": w,
                **{f"welch_{lab}": float(values[i, k]) for i, lab in enumerate(OUTPUT_LABELS)},
                **{f"exact_{lab}": closed[i] for i, lab in enumerate(OUTPUT_LABELS)},
            }
        )
    _emit({"seed": args.seed, "step": run.step, "duration": run.duration, "segments": est.segments,
           "elapsed_s": time.perf_counter() - t0, "points": rows})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="shg-entangler", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("steady", help="classical stationary state as JSON")
    _add_cavity(p)
    _add_drive(p)
    p.add_argument("--branch", default="Auto", choices=["Auto", "Symmetric", "BranchA", "BranchB"])
    p.set_defaults(func=cmd_steady)

    p = sub.add_parser("spectrum", help="output spectra and criteria at one frequency")
    p.add_argument("--omega", type=float, required=True, help="normalized frequency omega*tau/gamma")
    _add_cavity(p)
    _add_drive(p)
    p.add_argument("--oracle", action="store_true", help="also report the brute-force linear solve")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("sweep", help="run a sweep described by a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--out", help="override the [output] path")
    p.add_argument("--format", choices=["csv", "json"])
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("figure", help="regenerate the data behind a figure")
    p.add_argument("id", choices=FIGURE_IDS)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--points", type=int, default=200)
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("bifurcation", help="integrate from a perturbed symmetric state")
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--perturb", type=float, default=None,
                   help="antisymmetric displacement (default 1e-6 sqrt(gamma gamma0)/chi)")
    p.add_argument("--horizon", type=float, default=20000.0)
    p.add_argument("--step", type=float, default=1.0)
    _add_cavity(p)
    p.set_defaults(func=cmd_bifurcation)

    p = sub.add_parser("langevin", help="stochastic run with Welch estimates beside closed forms")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--duration", type=float, default=1e7)
    p.add_argument("--step", type=float, default=1.0)
    p.add_argument("--omega", default="0.3,0.6,1.2")
    p.add_argument("--segment", type=int, default=8192)
    p.add_argument("--overlap", type=float, default=0.5)
    _add_cavity(p)
    _add_drive(p, required=False)
    p.set_defaults(func=cmd_langevin, sigma=0.8)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ShgError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
