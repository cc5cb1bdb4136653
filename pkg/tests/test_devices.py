import math

import numpy as np
import pytest

from nlcoupler import (Bipartition, CouplerDevice, CouplerParams,
                       TwoModeSqueezerDevice, analytic_shg,
                       assemble_two_waveguides, beat_length, coupler_transfer,
                       log_negativity, pairwise_negativities, run_coupler,
                       run_linear_coupler, run_single_shg,
                       run_two_mode_squeezer, symplecticity_defect, tmsv_cm,
                       vacuum_cm)

COUPLING = 0.08
NONLINEARITY = 0.0025


def test_beat_length_values():
    assert beat_length(COUPLING) == pytest.approx(19.63, abs=0.01)
    assert beat_length(math.pi / 2.0) == pytest.approx(1.0)
    assert beat_length(2.0 * COUPLING) == pytest.approx(beat_length(COUPLING) / 2.0)
    with pytest.raises(ValueError):
        beat_length(0.0)


def test_coupler_transfer_is_symplectic_and_periodic():
    L = beat_length(COUPLING)
    for z in (0.0, 3.7, L, 2.0 * L):
        assert symplecticity_defect(coupler_transfer(COUPLING, z)) < 1e-12
    assert np.abs(coupler_transfer(COUPLING, 4.0 * L) - np.eye(8)).max() < 1e-9
    # a full beat length transfers the fundamentals between waveguides
    S = coupler_transfer(COUPLING, L)
    assert abs(abs(S[0, 3]) - 1.0) < 1e-12 and abs(S[0, 0]) < 1e-12


def test_linear_coupler_keeps_coherent_input_separable():
    # nonlinearity switched off: vacuum fluctuations stay vacuum, E_N = 0
    z = np.linspace(0.0, 4.0 * beat_length(COUPLING), 33)
    cms = run_linear_coupler(vacuum_cm(4), COUPLING, z)
    for V in cms:
        assert np.abs(V - vacuum_cm(4)).max() < 1e-12
        assert all(v < 1e-9 for v in pairwise_negativities(V).values())


def test_linear_coupler_input_shape_checked():
    with pytest.raises(ValueError):
        run_linear_coupler(vacuum_cm(2), COUPLING, [0.0])


def test_single_shg_phase_locked_and_matches_analytic():
    report = run_single_shg(200.0, NONLINEARITY, 1.0, sample_every=20)
    # the first sample still carries the phase of the vacuum-level seed
    assert np.isfinite(report.dtheta[1:]).all()
    assert np.abs(report.dtheta[1:] - np.pi / 2).max() < 1e-6
    amps = np.abs(report.propagation.trajectory.amplitudes)
    uf_ref, uh_ref = analytic_shg(1.0, report.zetas)
    assert np.abs(amps[:, 0] - uf_ref).max() < 1e-6
    assert np.abs(amps[:, 1] - uh_ref).max() < 1e-6
    # zeta = 1 corresponds to roughly 20 mm at half the reference power
    assert report.z_mm()[-1] == pytest.approx(20.0, abs=0.5)


def test_single_shg_output_modes_are_entangled():
    report = run_single_shg(200.0, NONLINEARITY, 0.5, sample_every=50)
    en = log_negativity(report.propagation.covariances[-1],
                        Bipartition((0,), (1,)))
    assert en > 0.01


def test_assemble_two_waveguides_layout():
    V1 = np.arange(16.0).reshape(4, 4)
    V1 = 0.5 * (V1 + V1.T)
    V = assemble_two_waveguides(V1, 2.0 * V1)
    idx_a = [0, 1, 4, 5]
    idx_b = [2, 3, 6, 7]
    assert np.array_equal(V[np.ix_(idx_a, idx_a)], V1)
    assert np.array_equal(V[np.ix_(idx_b, idx_b)], 2.0 * V1)
    assert np.abs(V[np.ix_(idx_a, idx_b)]).max() == 0.0


def test_squeezer_zero_stage_length_gives_no_entanglement():
    device = TwoModeSqueezerDevice(
        stage1_length_mm=0.0, nonlinearity=NONLINEARITY,
        power_per_waveguide_mw=200.0, coupling=COUPLING,
        z_grid_mm=np.linspace(0.0, 40.0, 11))
    report = run_two_mode_squeezer(device)
    assert report.stage1 is None
    for row in report.pair_rows:
        assert all(v < 1e-9 for v in row.values())


def test_squeezer_fundamental_entanglement_profile(squeezer_report):
    report = squeezer_report
    L = beat_length(report.device.coupling)
    en_ff = np.array([r.en_ff for r in report.pair_rows])
    z = report.z_mm
    z_peak = z[int(np.argmax(en_ff))]
    assert z_peak == pytest.approx(L / 2.0, rel=0.02)
    assert en_ff[int(np.argmin(np.abs(z - L)))] < 1e-6
    en_hh = np.array([r.en_hh for r in report.pair_rows])
    assert en_hh.max() < 1e-9


def test_squeezer_two_color_complementarity(squeezer_report):
    report = squeezer_report
    L = beat_length(report.device.coupling)
    z = report.z_mm
    same = np.array([r.en_fh_same for r in report.pair_rows])
    cross = np.array([r.en_fh_cross for r in report.pair_rows])
    i_2L = int(np.argmin(np.abs(z - 2.0 * L)))
    i_L = int(np.argmin(np.abs(z - L)))
    # same-waveguide two-color entanglement is maximal (and equal to its
    # input value) after a full period, the cross-waveguide one vanishes there
    assert same[i_2L] == pytest.approx(same.max(), abs=1e-9)
    assert cross[i_2L] < 1e-9
    assert cross[i_L] == pytest.approx(cross.max(), abs=1e-9)
    assert same[0] > 0.01  # entangled already at the coupler input


def test_squeezer_periodicity(squeezer_report):
    report = squeezer_report
    en_ff = np.array([r.en_ff for r in report.pair_rows])
    assert abs(en_ff[0] - en_ff[-1]) < 1e-9  # period 2 L_ab


def test_squeezer_never_fully_violates_vlf(squeezer_report):
    for row in squeezer_report.vlf_rows:
        assert not row.all_violated()


def test_coupler_report_composition(coupler_report):
    report = coupler_report
    n = len(report.zetas)
    assert len(report.pair_rows) == len(report.vlf_rows) == n
    assert report.propagation.covariances.shape == (n, 8, 8)
    assert report.lossy_pair_rows is not None
    assert report.z_mm()[-1] == pytest.approx(3.5 * 14.125, rel=1e-12)
    row0 = report.pair_rows[0]
    assert all(v == 0.0 for v in row0.values())


def test_run_coupler_without_loss_has_no_lossy_block():
    params = CouplerParams.from_kappa(1.13, COUPLING, NONLINEARITY)
    device = CouplerDevice(params=params, zeta_end=0.2, sample_every=100)
    report = run_coupler(device)
    assert report.lossy_pair_rows is None
    assert report.epr is None  # too short for a harmonic-power minimum
