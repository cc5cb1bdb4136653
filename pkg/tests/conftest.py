import numpy as np
import pytest

from nlcoupler import (CouplerDevice, CouplerParams, LossSpec,
                       TwoModeSqueezerDevice, beat_length, power_for_kappa,
                       run_coupler, run_two_mode_squeezer)

COUPLING = 0.08
NONLINEARITY = 0.0025


@pytest.fixture(scope="session")
def coupler_report():
    """Reference coupler run: kappa = 1.13, vacuum-level harmonic seed,
    reference loss coefficients attached."""
    params = CouplerParams.from_kappa(1.13, COUPLING, NONLINEARITY)
    device = CouplerDevice(params=params, zeta_end=3.5, sample_every=5,
                           loss=LossSpec(0.14, 0.55))
    return run_coupler(device)


@pytest.fixture(scope="session")
def coupler_report_k08():
    """Doubled-power run, kappa = 0.8."""
    params = CouplerParams.from_kappa(0.8, COUPLING, NONLINEARITY)
    device = CouplerDevice(params=params, zeta_end=3.5, sample_every=10)
    return run_coupler(device)


@pytest.fixture(scope="session")
def squeezer_report():
    """Sequential two-mode squeezer: 10 mm SHG stage per waveguide at half
    the coupler power, then the linear coupler swept over two beat lengths."""
    power = power_for_kappa(1.13, COUPLING, NONLINEARITY) / 2.0
    z_max = 2.0 * beat_length(COUPLING)
    device = TwoModeSqueezerDevice(
        stage1_length_mm=10.0, nonlinearity=NONLINEARITY,
        power_per_waveguide_mw=power, coupling=COUPLING,
        z_grid_mm=np.linspace(0.0, z_max, 401))
    return run_two_mode_squeezer(device)
