import math

import numpy as np
import pytest

from nlcoupler import (ClassicalState, CouplerParams, analytic_shg,
                       initial_state, integrate, kappa_from_physical,
                       power_for_kappa, z_to_zeta, zeta_to_z)
from nlcoupler.classical import derivative, phase_mismatch


def test_initial_state_power_split():
    s = initial_state(1e-18)
    assert s.total_power == pytest.approx(1.0)
    assert abs(s.a_f) == pytest.approx(abs(s.b_f))
    assert abs(s.a_f) ** 2 == pytest.approx(0.5, rel=1e-12)
    s = initial_state(0.25, theta_f0=0.3)
    assert abs(s.a_h) ** 2 == pytest.approx(0.25 * abs(s.a_f) ** 2)
    assert np.angle(s.a_f) == pytest.approx(0.3)
    with pytest.raises(ValueError):
        initial_state(-0.1)


def test_power_conservation_along_coupler():
    traj = integrate(initial_state(1e-18), 1.13, 3.5, step=1e-3, sample_every=10)
    total = traj.powers().sum(axis=1)
    assert np.abs(total - 1.0).max() < 1e-8


def test_uncoupled_run_matches_analytic_shg():
    # with kappa -> 0 each waveguide performs independent depleted SHG
    traj = integrate(initial_state(1e-18), 1e-30, 3.0, step=1e-3, sample_every=10)
    u0 = math.sqrt(0.5)
    uf_ref, uh_ref = analytic_shg(u0, traj.zetas)
    amps = np.abs(traj.amplitudes)
    assert np.abs(amps[:, 0] - uf_ref).max() < 1e-6
    assert np.abs(amps[:, 2] - uh_ref).max() < 1e-6


def test_rk4_fourth_order_convergence():
    s0 = initial_state(1e-18)
    ref = integrate(s0, 1.13, 2.0, step=1e-4).amplitudes[-1]
    e = []
    for step in (4e-2, 2e-2):
        y = integrate(s0, 1.13, 2.0, step=step).amplitudes[-1]
        e.append(np.abs(y - ref).max())
    assert 12.0 < e[0] / e[1] < 20.0


def test_phase_mismatch_jumps_to_half_pi():
    # the harmonic is generated with a pi/2 phase lead as soon as it builds up
    traj = integrate(initial_state(1e-18), 1.13, 0.02, step=1e-3, sample_every=1)
    dth, dph = traj.phase_mismatches()
    assert np.abs(dth[1:] - np.pi / 2).max() < 0.03
    assert np.abs(dph[1:] - np.pi / 2).max() < 0.03


def test_phases_nan_where_amplitude_vanishes():
    traj = integrate(initial_state(0.0), 1.13, 0.01, step=1e-3)
    assert np.isnan(traj.phases()[0, 2])  # harmonic starts exactly at zero
    s = ClassicalState(1.0, 1.0, 0.0, 0.0)
    dth, dph = phase_mismatch(s)
    assert math.isnan(dth) and math.isnan(dph)


def test_derivative_matches_equations_of_motion():
    s = ClassicalState(0.6, 0.3 + 0.1j, 0.2j, 0.05)
    ds = derivative(s, 1.13)
    assert ds.a_f == pytest.approx(1j * 1.13 * s.b_f + 1j * s.a_h * np.conj(s.a_f))
    assert ds.b_f == pytest.approx(1j * 1.13 * s.a_f + 1j * s.b_h * np.conj(s.b_f))
    assert ds.a_h == pytest.approx(1j * s.a_f**2)
    assert ds.b_h == pytest.approx(1j * s.b_f**2)


def test_parameter_round_trips():
    power = power_for_kappa(1.13, 0.08, 0.0025)
    assert kappa_from_physical(0.08, 0.0025, power) == pytest.approx(1.13, rel=1e-14)
    params = CouplerParams.from_kappa(1.13, 0.08, 0.0025)
    again = CouplerParams.from_physical(0.08, 0.0025, params.power)
    assert again.kappa == pytest.approx(1.13, rel=1e-14)
    with pytest.raises(ValueError):
        CouplerParams(kappa=2.0, coupling=0.08, nonlinearity=0.0025, power=power)


def test_unit_conversions():
    power = power_for_kappa(1.13, 0.08, 0.0025)
    z1 = zeta_to_z(1.0, 0.0025, power)
    assert z1 == pytest.approx(14.125, abs=0.2)
    assert z_to_zeta(z1, 0.0025, power) == pytest.approx(1.0, rel=1e-14)
    z1_single = zeta_to_z(1.0, 0.0025, power / 2.0)
    assert z1_single == pytest.approx(20.0, abs=0.5)


def test_integrate_input_validation():
    s0 = initial_state(1e-18)
    with pytest.raises(ValueError):
        integrate(s0, 1.13, 0.0)
    with pytest.raises(ValueError):
        integrate(s0, 1.13, 1.0, step=-1e-3)
