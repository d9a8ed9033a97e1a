import math
from dataclasses import replace

import numpy as np
import pytest

from pauliscatter.errors import DomainError, FitError
from pauliscatter.heating import (
    DIPOLE, PulseSimConfig, angle_weights, build_table, evolve_heating, initial_suppression,
    photons_vs_power, total_suppression, two_slope_analysis,
)
from pauliscatter.species import rayleigh_rate, recoil_energy
from pauliscatter.thermo import fermi_temperature, total_energy_trapped, trapped_state_at
from pauliscatter.trap import ProbeBeam

POWERS = np.linspace(0.5e-3, 10e-3, 20)


@pytest.fixture(scope="module")
def config(methods_trap):
    beam = ProbeBeam(110e-6, 5e-3, -2 * math.pi * 112e9, 50e-3)
    return PulseSimConfig(methods_trap, beam, 0.2)


@pytest.fixture(scope="module")
def table(config):
    return build_table(config, powers=[POWERS[-1]])


@pytest.fixture(scope="module")
def sweep(config):
    return photons_vs_power(config, POWERS)


def _at_power(config, power):
    return replace(config, beam=replace(config.beam, power=power))


def test_config_validation(methods_trap, config):
    assert config.heat == pytest.approx(2 * recoil_energy(config.species))
    with pytest.raises(DomainError):
        PulseSimConfig(methods_trap, config.beam, 0.0)
    with pytest.raises(DomainError):
        PulseSimConfig(methods_trap, config.beam, 0.2, heat_per_event=-1.0)
    with pytest.raises(DomainError):
        PulseSimConfig(methods_trap, config.beam, 0.2, angle_average="cardioid")


@pytest.mark.parametrize("kind", ["isotropic", "dipole"])
def test_angle_weights_normalised(li6, kind):
    q, w = angle_weights(li6, kind)
    assert w.sum() == pytest.approx(1.0, rel=1e-12)
    assert np.all((q > 0) & (q < 2 * li6.k))


def test_angle_weights_moments(li6):
    # <cos^2 theta> is 1/3 isotropically and 2/5 for the azimuth-averaged dipole pattern
    for kind, expected in (("isotropic", 1 / 3), (DIPOLE, 2 / 5)):
        q, w = angle_weights(li6, kind)
        c = 1 - q ** 2 / (2 * li6.k ** 2)
        assert np.sum(w * c ** 2) == pytest.approx(expected, rel=1e-12)


def test_total_suppression_bounds(li6, methods_trap):
    T_F = fermi_temperature(methods_trap)
    cold = total_suppression(li6, methods_trap, 0.2 * T_F)
    hot = total_suppression(li6, methods_trap, 3.0 * T_F)
    assert 0 < cold < hot <= 1
    assert total_suppression(li6, methods_trap, 0.2 * T_F, DIPOLE) == pytest.approx(cold, abs=0.05)


def test_zero_power(config, table):
    traj = evolve_heating(_at_power(config, 0.0), table=table)
    assert np.all(traj.photons == 0.0)
    assert np.all(traj.t_over_tf == traj.t_over_tf[0])
    assert traj.t_over_tf[0] == pytest.approx(0.2, rel=1e-12)


def test_unblocked_is_linear(config):
    cfg = replace(config, blocking=False)
    traj = evolve_heating(cfg)
    R0 = cfg.unblocked_rate
    assert traj.photons == pytest.approx(R0 * traj.t, rel=1e-8, abs=1e-12)


def test_linear_response_rate(config):
    # defaults to the unsaturated rate, which is exactly linear in power
    R1 = _at_power(config, 1e-3).unblocked_rate
    R2 = _at_power(config, 2e-3).unblocked_rate
    assert R2 == 2 * R1
    sat = replace(config, include_saturation=True).unblocked_rate
    lin = config.unblocked_rate
    assert sat < lin
    assert sat == pytest.approx(rayleigh_rate(config.species, config.beam.peak_intensity,
                                              config.beam.detuning, saturation=True))


@pytest.mark.parametrize("power", [1e-3, 5e-3, 10e-3])
def test_energy_bookkeeping(config, table, power):
    cfg = _at_power(config, power)
    traj = evolve_heating(cfg, table=table)
    N = cfg.trap.atom_number
    gained = traj.energy - traj.energy[0]
    assert gained[-1] == pytest.approx(N * traj.photons[-1] * cfg.heat, rel=1e-5)
    state = trapped_state_at(cfg.species, cfg.trap, cfg.initial_t_over_tf)
    assert traj.energy[0] == pytest.approx(total_energy_trapped(state), rel=1e-12)


def test_energy_bookkeeping_with_overlap(config, table):
    cfg = replace(config, include_overlap=True)
    traj = evolve_heating(cfg, table=table)
    N = cfg.trap.atom_number
    assert traj.energy[-1] - traj.energy[0] == pytest.approx(N * traj.photons[-1] * cfg.heat,
                                                             rel=1e-5)
    plain = evolve_heating(config, table=table)
    assert traj.photons[-1] < plain.photons[-1]


def test_tolerance_convergence(config, table):
    coarse = evolve_heating(config, table=table)
    fine = evolve_heating(replace(config, rtol=config.rtol / 2), table=table)
    assert abs(fine.photons[-1] / coarse.photons[-1] - 1) < 1e-5


@pytest.mark.parametrize("power", [0.5e-3, 4e-3, 10e-3])
def test_trajectory_monotone(config, table, power):
    traj = evolve_heating(_at_power(config, power), table=table)
    assert traj.photons[0] == 0.0
    assert np.all(np.diff(traj.photons) >= 0)
    assert np.all(np.diff(traj.t_over_tf) >= 0)
    assert traj.t_over_tf[-1] > traj.t_over_tf[0]
    assert np.all(traj.rate > 0)
    cols = traj.columns()
    assert list(cols) == list(traj.COLUMNS)
    assert cols["t_ms"][-1] == pytest.approx(50.0)


def test_sweep_monotone(sweep):
    assert np.all(np.diff(sweep.photons_per_atom) > 0)
    assert np.all(np.diff(sweep.final_t_over_tf) > 0)
    assert list(sweep.columns()) == ["power_mw", "photons_per_atom", "final_t_over_tf"]


def test_sweep_grid_validation(config):
    with pytest.raises(DomainError):
        photons_vs_power(config, [1e-3, 0.5e-3])
    with pytest.raises(DomainError):
        photons_vs_power(config, [0.0, 1e-3])


def test_low_power_slope(config, table):
    # perturbative limit: d Phi / dP -> S0 (dR0/dP) t_pulse
    S0 = initial_suppression(config)
    dR_dP = _at_power(config, 1e-3).unblocked_rate / 1e-3
    expected = S0 * dR_dP * config.beam.pulse_duration
    p1, p2 = 0.02e-3, 0.04e-3
    phi1 = evolve_heating(_at_power(config, p1), table=table, samples=2).photons[-1]
    phi2 = evolve_heating(_at_power(config, p2), table=table, samples=2).photons[-1]
    slope = (phi2 - phi1) / (p2 - p1)
    assert slope == pytest.approx(expected, rel=5e-3)
    assert slope < dR_dP * config.beam.pulse_duration


def test_fig3_two_slopes(config, sweep):
    res = two_slope_analysis(sweep.power, sweep.photons_per_atom)
    assert res.slope_low < res.slope_high
    assert res.slope_low / res.slope_high <= 0.8
    assert res.intercept_high < 0
    S0 = initial_suppression(config)
    R0_max = _at_power(config, POWERS[-1]).unblocked_rate
    assert abs(res.intercept_high) <= (1 - S0) * R0_max * config.beam.pulse_duration


def test_unblocked_control(config):
    sweep = photons_vs_power(replace(config, blocking=False), POWERS)
    res = two_slope_analysis(sweep.power, sweep.photons_per_atom)
    assert res.slope_low == pytest.approx(res.slope_high, rel=1e-8)
    assert abs(res.intercept_high) <= 1e-8


def test_two_slope_synthetic_exact():
    x = np.linspace(1.0, 10.0, 20)
    y = np.where(x < 5, 0.3 * x, 1.2 * x - 4.5)
    res = two_slope_analysis(x, y)
    assert res.slope_low == pytest.approx(0.3, abs=1e-12)
    assert res.intercept_low == pytest.approx(0.0, abs=1e-12)
    assert res.slope_high == pytest.approx(1.2, abs=1e-12)
    assert res.intercept_high == pytest.approx(-4.5, abs=1e-12)


def test_two_slope_errors():
    x = np.linspace(1, 10, 12)
    with pytest.raises(FitError):
        two_slope_analysis(x, x, low_fraction=0.25, high_fraction=0.25)  # 3 points per region
    x = np.linspace(1, 10, 20)
    with pytest.raises(FitError):
        two_slope_analysis(x, np.ones_like(x))


def test_grid_low_power_slope_between_limits(config, sweep):
    # heating already lifts the slope at 0.5-1 mW, but it stays below the unblocked one
    S0 = initial_suppression(config)
    unblocked = _at_power(config, 1e-3).unblocked_rate / 1e-3 * config.beam.pulse_duration
    p, phi = sweep.power, sweep.photons_per_atom
    slope = (phi[1] - phi[0]) / (p[1] - p[0])
    assert S0 * unblocked < slope < unblocked
