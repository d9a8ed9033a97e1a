"""Command-line front end.

    pauliscatter constants  [--config PATH]
    pauliscatter fig2       [--config PATH] [--out PATH] [--format csv|json] [--aperture-average]
    pauliscatter fig3       ...                       photons per atom vs probe power
    pauliscatter trajectory ...                       one heating trajectory
    pauliscatter fig4       ...                       inelastic loss vs blue detuning
    pauliscatter sq         ... [--boltzmann D]       beta(q) / S(q) of the homogeneous gas
    pauliscatter fit INPUT  [--delta-min GHZ]         power-law fit of delta_ghz,loss[,loss_err]
    pauliscatter fit --monte-carlo [--seed N]         fitter self-calibration

Exit status: 0 success, 2 configuration or input error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np
from scipy import integrate
from scipy.constants import hbar

from . import config as cfgmod
from . import output
from .errors import ConfigError, DomainError, FitError, NumericalError
from .heating import PulseSimConfig, evolve_heating, initial_suppression, photons_vs_power, \
    two_slope_analysis
from .inelastic import fit_power_law, loss_curve, loss_exponent, monte_carlo_calibration
from .species import (
    momentum_transfer, polarizability_parameter, recoil_energy, recoil_frequency,
    resolve_species, resonant_optical_density,
)
from .structure import beta_homogeneous, beta_zero_temperature, s_q_gaussian
from .thermo import (
    TrapConfig, density_profile, fermi_energy_trapped, fermi_temperature, fermi_wavenumber,
    homogeneous_state_at, mean_density, state_from_phase_space_density, trapped_state_at,
)
from .trap import ProbeBeam, detected_signal_curve

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

TWO_PI = 2.0 * math.pi


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_CONFIG)


# -- assembling physical objects from the config ------------------------------------

def _species(cfg):
    return resolve_species(cfg.species.name)


def _trap(cfg):
    t = cfg.trap
    return TrapConfig.from_hz(t.f_r_hz, t.f_z_hz, t.atom_number)


def _beam(cfg):
    b = cfg.beam
    return ProbeBeam(b.waist_um * 1e-6, b.power_mw * 1e-3, TWO_PI * b.detuning_ghz * 1e9,
                     b.pulse_ms * 1e-3)


def _pulse_config(cfg, power_mw=None):
    species = _species(cfg)
    h = cfg.heating
    beam = replace(_beam(cfg), detuning=TWO_PI * h.detuning_ghz * 1e9, pulse_duration=h.pulse_ms * 1e-3)
    if power_mw is not None:
        beam = replace(beam, power=power_mw * 1e-3)
    return PulseSimConfig(
        trap=_trap(cfg), beam=beam, initial_t_over_tf=h.initial_t_over_tf, species=species,
        heat_per_event=h.heat_per_event_recoils * recoil_energy(species),
        include_overlap=h.include_overlap, angle_average=h.angle_average, blocking=h.blocking,
    )


def _emit(args, text):
    if args.out:
        Path(args.out).write_bytes(text.encode("utf-8"))
    else:
        sys.stdout.write(text)


def _emit_table(args, cfg, columns, report=None):
    if args.format == "json":
        text = output.to_json(columns, args.command, cfgmod.config_hash(cfg), report)
    else:
        text = output.to_csv(columns)
    _emit(args, text)
    if report and args.format == "csv":
        # keep the data stream clean when it goes to stdout
        stream = sys.stdout if args.out else sys.stderr
        stream.write(output.to_report(report))


def _emit_report(args, cfg, report):
    if args.format == "json":
        _emit(args, output.report_json(report, args.command, cfgmod.config_hash(cfg)))
    else:
        _emit(args, output.to_report(report))


# -- commands ---------------------------------------------------------------------

def column_length(state, species):
    """Axial column density through the trap centre divided by the peak density."""
    n0 = state.peak_density
    z_max = math.sqrt(2.0 * (max(state.chemical_potential, 0.0) + 60.0 * state.kT)
                      / (species.mass * state.trap.omega_z ** 2))

    def n_axis(z):
        return float(density_profile(state, [0.0, 0.0, z]))

    column = 2.0 * integrate.quad(n_axis, 0.0, z_max, limit=200)[0]
    return column / n0


def cmd_constants(args, cfg):
    species = _species(cfg)
    trap = _trap(cfg)
    beam = _beam(cfg)
    T_F = fermi_temperature(trap)
    E_F = fermi_energy_trapped(trap)
    k_F = math.sqrt(2.0 * species.mass * E_F) / hbar
    theta = math.radians(cfg.scattering.angle_deg)
    q = momentum_transfer(species, theta)
    state = trapped_state_at(species, trap, cfg.sample.t_over_tf)
    n_peak = state.peak_density
    report = {
        "species": species.name,
        "recoil_kHz": recoil_frequency(species) * 1e-3,
        "t_fermi_uK": T_F * 1e6,
        "e_fermi_over_recoil": E_F / recoil_energy(species),
        "k_fermi_per_um": k_F * 1e-6,
        "q_over_k": q / species.k,
        "q_over_kf": q / k_F,
        "t_over_tf": cfg.sample.t_over_tf,
        "peak_density_cm3": n_peak * 1e-6,
        "mean_density_cm3": mean_density(state) * 1e-6,
        "peak_phase_space_density": n_peak * state.thermal_wavelength ** 3,
        "n_alpha": polarizability_parameter(species, n_peak, beam.detuning),
        "resonant_od": resonant_optical_density(species, n_peak, column_length(state, species)),
    }
    _emit_report(args, cfg, report)


def cmd_fig2(args, cfg):
    species = _species(cfg)
    trap = _trap(cfg)
    q = momentum_transfer(species, math.radians(cfg.scattering.angle_deg))
    aperture = args.aperture_average or cfg.scattering.aperture_average
    curve = detected_signal_curve(species, trap, _beam(cfg), q, cfg.grids.t_over_tf.values(),
                                  aperture_average=aperture)
    _emit_table(args, cfg, curve.columns())


def cmd_fig3(args, cfg):
    pulse = _pulse_config(cfg)
    powers = cfg.grids.power_mw.values() * 1e-3
    sweep = photons_vs_power(pulse, powers)
    fit = two_slope_analysis(sweep.power, sweep.photons_per_atom,
                             cfg.heating.low_fraction, cfg.heating.high_fraction)
    report = {
        "initial_suppression": initial_suppression(pulse),
        "slope_low_per_mW": fit.slope_low * 1e-3,
        "slope_high_per_mW": fit.slope_high * 1e-3,
        "slope_ratio": fit.slope_low / fit.slope_high,
        "intercept_high": fit.intercept_high,
    }
    _emit_table(args, cfg, sweep.columns(), report)


def cmd_trajectory(args, cfg):
    pulse = _pulse_config(cfg, power_mw=cfg.heating.trajectory_power_mw)
    traj = evolve_heating(pulse)
    _emit_table(args, cfg, traj.columns())


def cmd_fig4(args, cfg):
    delta = cfg.grids.delta_ghz.values()
    loss = loss_curve(delta, cfg.inelastic.gamma, cfg.inelastic.amplitude)
    _emit_table(args, cfg, {"delta_ghz": list(delta), "loss": list(loss)},
                {"gamma": cfg.inelastic.gamma, "alpha": loss_exponent(cfg.inelastic.gamma)})


def cmd_sq(args, cfg):
    species = _species(cfg)
    D = args.boltzmann if args.boltzmann is not None else cfg.sq.phase_space_density
    if D is not None:
        if not D > 0:
            raise ConfigError("phase-space density must be positive")
        # beta depends only on D and q Lambda_t; the temperature just sets units
        T = 1e-6
        state = state_from_phase_space_density(species, D, T)
        lam = state.thermal_wavelength
        grid = cfg.grids.q_lambda.values()
        beta = [beta_homogeneous(x / lam, state) for x in grid]
        columns = {
            "q_lambda_t": list(grid),
            "beta": beta,
            "s_gaussian_fermion": list(s_q_gaussian(grid / lam, D, lam, "fermion")),
            "s_gaussian_boson": list(s_q_gaussian(grid / lam, D, lam, "boson")),
        }
    else:
        n = 1e20
        state = homogeneous_state_at(species, n, cfg.sq.t_over_tf)
        k_F = fermi_wavenumber(n)
        grid = cfg.grids.q_over_kf.values()
        columns = {
            "q_over_kf": list(grid),
            "beta": [beta_homogeneous(x * k_F, state) for x in grid],
            "beta_zero_t": list(np.atleast_1d(beta_zero_temperature(grid * k_F, k_F))),
        }
    _emit_table(args, cfg, columns)


def _read_loss_csv(path):
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    if not rows:
        raise ConfigError(f"{path} is empty")
    header = [h.strip() for h in rows[0]]
    if header[:2] != ["delta_ghz", "loss"] or len(header) > 3 or (
            len(header) == 3 and header[2] != "loss_err"):
        raise ConfigError("expected header delta_ghz,loss[,loss_err]", line=1)
    data = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or not "".join(row).strip():
            continue
        if len(row) != len(header):
            raise ConfigError(f"expected {len(header)} fields", line=lineno)
        try:
            data.append([float(v) for v in row])
        except ValueError:
            raise ConfigError(f"non-numeric field in {row!r}", line=lineno) from None
    return np.array(data).reshape(-1, len(header))


def cmd_fit(args, cfg):
    if args.monte_carlo:
        rng_seed = 0 if args.seed is None else args.seed
        mean, coverage = monte_carlo_calibration(rng_seed)
        report = {"seed": rng_seed, "trials": 500, "true_exponent": -2.0,
                  "mean_exponent": mean, "coverage": coverage}
        _emit_report(args, cfg, report)
        return
    if args.input is None:
        raise ConfigError("fit needs an input CSV (or --monte-carlo)")
    data = _read_loss_csv(args.input)
    delta_min = args.delta_min if args.delta_min is not None else cfg.inelastic.delta_min_ghz
    x = np.abs(data[:, 0])
    if delta_min is not None and np.any(x < delta_min):
        raise ConfigError(f"detuning grid dips below delta_min = {delta_min:g} GHz, where "
                          "the loss is not a power law; refusing to fit")
    y_err = data[:, 2] if data.shape[1] == 3 else None
    fit = fit_power_law(x, data[:, 1], y_err)
    report = {"exponent": fit.exponent, "exponent_stderr": fit.exponent_stderr,
              "amplitude": fit.amplitude, "n_points": fit.n_points}
    _emit_report(args, cfg, report)


COMMANDS = {
    "constants": cmd_constants,
    "fig2": cmd_fig2,
    "fig3": cmd_fig3,
    "trajectory": cmd_trajectory,
    "fig4": cmd_fig4,
    "sq": cmd_sq,
    "fit": cmd_fit,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="key=value run configuration")
    common.add_argument("--out", metavar="PATH", help="output file (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--grid", action="append", default=[], metavar="NAME=MIN:MAX:COUNT[:log]",
                        help="override a sweep grid; may be repeated")

    parser = _Parser(prog="pauliscatter", description=__doc__.split("\n")[0] or None,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("constants", parents=[common], help="scalar report for the configured sample")
    p = sub.add_parser("fig2", parents=[common], help="suppression vs T/T_F")
    p.add_argument("--aperture-average", action="store_true",
                   help="average over the detection cone instead of a point aperture")
    sub.add_parser("fig3", parents=[common], help="photons per atom vs probe power")
    sub.add_parser("trajectory", parents=[common], help="heating trajectory at one power")
    sub.add_parser("fig4", parents=[common], help="inelastic loss vs blue detuning")
    p = sub.add_parser("sq", parents=[common], help="homogeneous beta(q) = S(q)")
    p.add_argument("--boltzmann", type=float, metavar="D",
                   help="nondegenerate mode at phase-space density D, grid in q Lambda_t")
    p = sub.add_parser("fit", parents=[common], help="power-law fit of loss vs detuning")
    p.add_argument("input", nargs="?", help="CSV with delta_ghz,loss[,loss_err]")
    p.add_argument("--delta-min", type=float, metavar="GHZ",
                   help="refuse data below this |detuning|")
    p.add_argument("--monte-carlo", action="store_true", help="run the fitter self-calibration")
    p.add_argument("--seed", type=int, help="seed for --monte-carlo")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = cfgmod.load(args.config) if args.config else cfgmod.RunConfig()
        for grid_text in args.grid:
            cfg = cfgmod.override_grid(cfg, grid_text)
        COMMANDS[args.command](args, cfg)
    except (ConfigError, DomainError, FitError) as exc:
        print(f"pauliscatter {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalError, MemoryError) as exc:
        print(f"pauliscatter {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
