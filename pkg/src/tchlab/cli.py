"""Command line experiments.

Four subcommands: ``gate`` sweeps the entangling-gate error over pulse
amplitude, ``walk`` spreads one photon over a cavity ring and compares it
with the free-particle propagator, ``dark`` separates dark from light atomic
states by photon arrival times, and ``resonance`` ranks the Rabi-counter
pairs the gate schedule relies on.

Exit codes: 0 success, 2 usage error, 3 numerical drift beyond tolerance,
4 classification attempted but statistically inconclusive (|z| < 3).
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from .darkstates import (
    DecayConfig,
    classify_dark,
    emission_density,
    is_dark,
    sample_emission_times,
    singlet_product,
    triplet_state,
)
from .evolution import NumericalDriftError, rabi_periods
from .gate import (
    BASIS_LABELS,
    GateConfig,
    branch_phase,
    cocsign_schedule,
    resonance_table,
    run_gate,
    sweep,
    uniform_superposition,
)
from .reports import format_float, write_csv, write_json
from .walk import WalkConfig, ballistic_exponent, simulate_walk

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DRIFT = 3
EXIT_INCONCLUSIVE = 4


def _float_list(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma list of numbers: {text!r}") from exc


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out-dir", default=".", help="directory for output files")
    parser.add_argument("--seed", type=int, default=0, help="random seed")
    parser.add_argument(
        "--threads",
        type=int,
        default=None,
        help="worker threads (default: TCHLAB_THREADS env var, else 1)",
    )


def _resolve_threads(args) -> int:
    if args.threads is not None:
        return max(1, args.threads)
    env = os.environ.get("TCHLAB_THREADS", "").strip()
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            print(f"TCHLAB_THREADS is not an integer: {env!r}", file=sys.stderr)
            raise SystemExit(EXIT_USAGE) from None
    return 1


# ---------------------------------------------------------------------------
# gate
# ---------------------------------------------------------------------------

def cmd_gate(args) -> int:
    config = GateConfig(
        g=args.g,
        sigma=args.sigma,
        n1=args.n1,
        n2=args.n2,
        omega=args.omega,
        dt=args.dt,
    )
    base_alpha = config.resolved_alpha
    alphas = [s * base_alpha for s in args.alpha_scales]
    if args.input == "uniform":
        q = uniform_superposition()
    else:
        q = np.zeros(4, dtype=complex)
        q[BASIS_LABELS.index(args.input)] = 1.0

    rows = sweep(config, alphas, q=q, max_workers=_resolve_threads(args))
    sweep_path = write_csv(
        os.path.join(args.out_dir, "gate_sweep.csv"),
        ("alpha", "sigma", "n1", "n2", "d_tr", "d_mod"),
        rows,
    )

    phases = {}
    for label in BASIS_LABELS:
        basis = np.zeros(4, dtype=complex)
        basis[BASIS_LABELS.index(label)] = 1.0
        psi = run_gate(basis, config)
        phases[label] = branch_phase(psi, label, config)

    best = min(rows, key=lambda r: r[5])
    tau1, tau2 = rabi_periods(config.g)
    summary = {
        "command": "gate",
        "g": config.g,
        "omega": config.omega,
        "sigma": config.sigma,
        "n1": config.n1,
        "n2": config.n2,
        "input": args.input,
        "alpha_scales": list(args.alpha_scales),
        "area_rule_alpha": base_alpha,
        "tau1": tau1,
        "tau2": tau2,
        "total_duration": cocsign_schedule(config).total_duration,
        "n_points": len(rows),
        "best": {
            "alpha": best[0],
            "sigma": best[1],
            "n1": best[2],
            "n2": best[3],
            "d_tr": best[4],
            "d_mod": best[5],
        },
        "basis_branch_phases": phases,
        "files": {"sweep": os.path.basename(sweep_path)},
    }
    write_json(os.path.join(args.out_dir, "gate_summary.json"), summary)
    return EXIT_OK


# ---------------------------------------------------------------------------
# walk
# ---------------------------------------------------------------------------

def _kernel_band(n: int, origin: int, t: float, mass: float) -> np.ndarray:
    """Sites whose stationary momentum lies safely inside the band, where
    the free-particle kernel describes the ring dynamics."""
    offsets = (np.arange(n) - origin + n // 2) % n - n // 2
    x = np.abs(offsets) / np.sqrt(n)
    x_max = 0.8 * (np.sqrt(n) / 2.0) * t / (2.0 * np.pi * mass)
    band = x <= x_max
    band |= np.abs(offsets) <= 2  # keep at least the immediate neighborhood
    return band


def cmd_walk(args) -> int:
    config = WalkConfig(
        n_cavities=args.n_cavities,
        mass=args.mass,
        origin=args.origin,
        t_max=args.t_max,
        n_times=args.n_times,
    )
    result = simulate_walk(config)
    exponent = ballistic_exponent(result.times, result.variances)

    amp_rows = []
    kernel_rows = []
    for i, t in enumerate(result.times):
        for q in range(config.n_cavities):
            a = result.amplitudes[i, q]
            k = result.kernel[i, q]
            x = result.positions[q]
            amp_rows.append((t, q, x, a.real, a.imag, abs(a)))
            kernel_rows.append((t, q, x, k.real, k.imag, abs(k)))
    amp_path = write_csv(
        os.path.join(args.out_dir, "walk_amplitude.csv"),
        ("time", "cavity", "position", "re_amplitude", "im_amplitude", "abs_amplitude"),
        amp_rows,
    )
    kernel_path = write_csv(
        os.path.join(args.out_dir, "kernel.csv"),
        ("time", "cavity", "position", "re_kernel", "im_kernel", "abs_kernel"),
        kernel_rows,
    )
    net_path = write_csv(
        os.path.join(args.out_dir, "network.csv"),
        ("separation", "n_links", "mean_amplitude", "mean_phase"),
        result.network.distance_profile(),
    )

    n = config.n_cavities
    origin = config.resolved_origin
    band = _kernel_band(n, origin, float(result.times[-1]), config.mass)
    psi_final = result.amplitudes[-1, band]
    ker_final = result.kernel[-1, band]
    denom = np.linalg.norm(psi_final) * np.linalg.norm(ker_final)
    kernel_overlap = float(abs(np.vdot(ker_final, psi_final)) / denom) if denom > 0 else 0.0

    mirror = (2 * origin - np.arange(n)) % n
    reflection_residual = float(
        np.max(np.abs(np.abs(result.amplitudes) - np.abs(result.amplitudes[:, mirror])))
    )

    summary = {
        "command": "walk",
        "n_cavities": n,
        "mass": config.mass,
        "origin": origin,
        "t_max": config.resolved_t_max,
        "n_times": config.n_times,
        "ballistic_exponent": exponent,
        "momentum_population_drift": result.momentum_drift,
        "norm_drift": result.norm_drift,
        "reflection_residual": reflection_residual,
        "kernel_overlap_final": kernel_overlap,
        "n_links": len(result.network.hops),
        "files": {
            "amplitude": os.path.basename(amp_path),
            "kernel": os.path.basename(kernel_path),
            "network": os.path.basename(net_path),
        },
    }
    write_json(os.path.join(args.out_dir, "walk_summary.json"), summary)
    return EXIT_OK


# ---------------------------------------------------------------------------
# dark
# ---------------------------------------------------------------------------

def _light_reference(n_atoms: int) -> np.ndarray:
    """Symmetric pair on atoms (0, 1), singlets on the remaining adjacent
    pairs: same excitation count as the all-singlet state but optically
    active."""
    state = triplet_state()
    if n_atoms > 2:
        rest = singlet_product([(i, i + 1) for i in range(2, n_atoms, 2)])
        state = np.kron(state, rest)
    return state


def cmd_dark(args) -> int:
    if args.atoms < 0 or args.atoms % 2 != 0:
        print("--atoms must be zero or an even number", file=sys.stderr)
        return EXIT_USAGE
    couplings = (args.g,) * args.atoms
    config = DecayConfig(
        couplings=couplings,
        kappa=args.kappa,
        omega=args.omega,
        n_times=args.n_times,
        t_max=args.t_max,
    )

    if args.atoms == 0:
        report = emission_density(np.array([1.0 + 0.0j]), config)
        write_csv(
            os.path.join(args.out_dir, "emission_density.csv"),
            ("time", "density", "survival"),
            zip(report.times, report.density, report.survival),
        )
        write_json(
            os.path.join(args.out_dir, "dark_summary.json"),
            {
                "command": "dark",
                "atoms": 0,
                "kappa": config.resolved_kappa,
                "omega": config.omega,
                "t_max": config.resolved_t_max,
                "n_times": config.n_times,
                "escape_probability": report.escape_probability,
                "mean_emission_time": report.mean_emission_time,
            },
        )
        return EXIT_OK

    dark_state = singlet_product([(i, i + 1) for i in range(0, args.atoms, 2)])
    light_state = _light_reference(args.atoms)
    dark_report = emission_density(dark_state, config)
    light_report = emission_density(light_state, config)

    write_csv(
        os.path.join(args.out_dir, "emission_density.csv"),
        ("time", "p_dark", "p_light", "s_dark", "s_light"),
        zip(
            dark_report.times,
            dark_report.density,
            light_report.density,
            dark_report.survival,
            light_report.survival,
        ),
    )

    rng = np.random.default_rng(args.seed)
    truth_report = dark_report if args.truth == "dark" else light_report
    samples = sample_emission_times(truth_report, args.n_trials, rng=rng)
    result = classify_dark(
        samples,
        dark_report.mean_emission_time,
        light_report.mean_emission_time,
        detector_error=args.detector_error,
        rng=rng,
    )

    dark_check = is_dark(dark_state, couplings)
    light_check = is_dark(light_state, couplings)
    write_json(
        os.path.join(args.out_dir, "classify.json"),
        {
            "truth": args.truth,
            "decision": result.decision,
            "correct": result.decision == args.truth,
            "z_score": result.z_score,
            "n_trials": result.n_trials,
            "n_censored": result.n_censored,
            "sample_mean": result.sample_mean,
            "threshold": result.threshold,
            "dark_mean": result.dark_mean,
            "light_mean": result.light_mean,
            "detector_error": result.detector_error,
            "seed": args.seed,
        },
    )
    write_json(
        os.path.join(args.out_dir, "dark_summary.json"),
        {
            "command": "dark",
            "atoms": args.atoms,
            "g": args.g,
            "kappa": config.resolved_kappa,
            "omega": config.omega,
            "t_max": config.resolved_t_max,
            "n_times": config.n_times,
            "dark_absorption_residual": dark_check.absorption_residual,
            "light_absorption_residual": light_check.absorption_residual,
            "dark_is_dark": dark_check.is_dark,
            "light_is_dark": light_check.is_dark,
            "dark_escape_probability": dark_report.escape_probability,
            "light_escape_probability": light_report.escape_probability,
            "dark_mean_emission_time": dark_report.mean_emission_time,
            "light_mean_emission_time": light_report.mean_emission_time,
        },
    )
    if abs(result.z_score) < 3.0:
        print(
            f"inconclusive: |z| = {abs(result.z_score):.3g} < 3 "
            f"with {args.n_trials} trials",
            file=sys.stderr,
        )
        return EXIT_INCONCLUSIVE
    return EXIT_OK


# ---------------------------------------------------------------------------
# resonance
# ---------------------------------------------------------------------------

def cmd_resonance(args) -> int:
    rows = resonance_table(args.n_max, top=args.top)
    tau1, tau2 = rabi_periods(args.g)
    print(f"{'n1':>5} {'n2':>5} {'residual':>24} {'hold_duration':>24}")
    table = []
    for n1, n2, residual in rows:
        duration = 2.0 * n2 * tau2
        print(f"{n1:>5} {n2:>5} {format_float(residual):>24} {format_float(duration):>24}")
        table.append(
            {"n1": n1, "n2": n2, "residual": residual, "hold_duration": duration}
        )
    summary = {
        "command": "resonance",
        "g": args.g,
        "n_max": args.n_max,
        "top": args.top,
        "tau1": tau1,
        "tau2": tau2,
        "rows": table,
    }
    if table:
        summary["best"] = table[0]
    write_json(os.path.join(args.out_dir, "resonance_summary.json"), summary)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tchlab",
        description="Cavity-network experiments: entangling gate, photon walk, dark states.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gate", help="sweep the entangling gate error over pulse amplitude")
    _add_common(p)
    p.add_argument("--g", type=float, default=1e-3, help="atom-cavity coupling")
    p.add_argument("--omega", type=float, default=1.0, help="shared resonance frequency")
    p.add_argument("--sigma", type=float, default=0.5, help="exchange pulse width")
    p.add_argument("--n1", type=int, default=4, help="single-excitation Rabi counter")
    p.add_argument("--n2", type=int, default=6, help="double-excitation Rabi counter")
    p.add_argument(
        "--alpha-scales",
        type=_float_list,
        default=[0.5, 0.75, 1.0, 1.25, 1.5],
        help="comma list of multiples of the pulse-area-rule amplitude",
    )
    p.add_argument(
        "--input",
        choices=("uniform",) + BASIS_LABELS,
        default="uniform",
        help="two-qubit input state",
    )
    p.add_argument(
        "--dt",
        type=float,
        default=None,
        help="integrator step for exchange windows (default: sigma / 50)",
    )
    p.set_defaults(func=cmd_gate)

    p = sub.add_parser("walk", help="single-photon spread on a cavity ring")
    _add_common(p)
    p.add_argument("--n-cavities", type=int, default=128)
    p.add_argument("--mass", type=float, default=1.0)
    p.add_argument("--origin", type=int, default=None, help="start cavity (default: middle)")
    p.add_argument("--t-max", type=float, default=None, help="default: mass / 4, pre-wrap")
    p.add_argument("--n-times", type=int, default=51)
    p.set_defaults(func=cmd_walk)

    p = sub.add_parser("dark", help="dark-state selection by photon arrival times")
    _add_common(p)
    p.add_argument("--atoms", type=int, default=2, help="register size, zero or even")
    p.add_argument("--g", type=float, default=1e-3, help="atom-cavity coupling")
    p.add_argument("--omega", type=float, default=1.0)
    p.add_argument("--kappa", type=float, default=None, help="photon loss rate (default g/10)")
    p.add_argument("--t-max", type=float, default=None, help="observation horizon (default 20/kappa)")
    p.add_argument("--n-times", type=int, default=2001)
    p.add_argument("--n-trials", type=int, default=10000)
    p.add_argument("--detector-error", type=float, default=0.03)
    p.add_argument("--truth", choices=("dark", "light"), default="dark",
                   help="hypothesis the samples are drawn from")
    p.set_defaults(func=cmd_dark)

    p = sub.add_parser("resonance", help="rank Rabi-counter pairs by timing mismatch")
    _add_common(p)
    p.add_argument("--g", type=float, default=1e-3)
    p.add_argument("--n-max", type=int, default=100)
    p.add_argument("--top", type=int, default=3)
    p.set_defaults(func=cmd_resonance)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NumericalDriftError as exc:
        print(f"numerical drift: {exc}", file=sys.stderr)
        return EXIT_DRIFT
    except ValueError as exc:
        print(f"invalid parameters: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
