"""End-to-end device pipelines: the distributed nonlinear directional coupler
and the sequential integrated two-mode squeezer (two independent SHG
waveguides followed by a linear directional coupler).
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import loss as loss_channel
from .classical import CouplerParams, initial_state, zeta_to_z
from .gaussian import vacuum_cm
from .metrics import (DEFAULT_VLF_COMBOS, EprNotFoundError, FA, FB, HA, HB,
                      find_epr, pairwise_negativities, vlf_values)
from .quantum import propagate, propagate_single


def beat_length(coupling):
    """Linear-coupler beat length L_ab = pi / (2 C) in mm."""
    if coupling <= 0:
        raise ValueError("coupling constant must be positive")
    return math.pi / (2.0 * coupling)


@dataclass(frozen=True)
class CouplerDevice:
    """Nonlinear directional coupler run configuration."""

    params: CouplerParams
    power_ratio: float = 1e-18
    theta_f0: float = 0.0
    phi_f0: float = 0.0
    zeta_end: float = 3.5
    step: float = 1e-3
    sample_every: int = 5
    loss: loss_channel.LossSpec | None = None
    loss_convention: str = "db"
    vlf_combos: tuple = DEFAULT_VLF_COMBOS
    method: str = "exponential"


@dataclass(frozen=True)
class CouplerReport:
    device: CouplerDevice
    propagation: object  # PropagationResult
    pair_rows: list
    vlf_rows: list
    epr: object | None
    lossy_covariances: np.ndarray | None = None
    lossy_pair_rows: list | None = None

    @property
    def zetas(self):
        return self.propagation.zetas

    def z_mm(self):
        return np.array([zeta_to_z(z, self.device.params.nonlinearity,
                                   self.device.params.power)
                         for z in self.zetas])


def run_coupler(device):
    """Propagate the coupler and evaluate every entanglement observable at
    each sampled plane, lossless and (if configured) lossy."""
    s0 = initial_state(device.power_ratio, device.theta_f0, device.phi_f0)
    prop = propagate(s0, device.params.kappa, device.zeta_end,
                     step=device.step, sample_every=device.sample_every,
                     method=device.method)
    pair_rows = [pairwise_negativities(V) for V in prop.covariances]
    vlf_rows = [vlf_values(V, device.vlf_combos) for V in prop.covariances]
    try:
        epr = find_epr(prop.trajectory, prop.covariances)
    except EprNotFoundError:
        epr = None

    lossy_cms = None
    lossy_rows = None
    if device.loss is not None:
        z_cm = np.array([zeta_to_z(z, device.params.nonlinearity,
                                   device.params.power) / 10.0
                         for z in prop.zetas])
        lossy_cms = np.array([
            loss_channel.apply_loss(
                V, loss_channel.mode_etas(device.loss, zc, device.loss_convention))
            for V, zc in zip(prop.covariances, z_cm)
        ])
        lossy_rows = [pairwise_negativities(V) for V in lossy_cms]
    return CouplerReport(device, prop, pair_rows, vlf_rows, epr,
                         lossy_cms, lossy_rows)


@dataclass(frozen=True)
class SingleShgReport:
    """Single nonlinear waveguide (kappa = 0) propagation, modes (f, h)."""

    power_mw: float  # power in this one waveguide; sets the zeta scale
    nonlinearity: float
    propagation: object
    dtheta: np.ndarray  # nonlinear phase mismatch per sample

    @property
    def zetas(self):
        return self.propagation.zetas

    def z_mm(self):
        return np.array([zeta_to_z(z, self.nonlinearity, self.power_mw)
                         for z in self.zetas])


def run_single_shg(power_mw, nonlinearity, zeta_end, power_ratio=1e-18,
                   step=1e-3, sample_every=5, method="exponential"):
    """SHG in one uncoupled waveguide; the zeta normalization uses the power
    launched into this single waveguide."""
    if power_mw <= 0 or nonlinearity <= 0 or zeta_end <= 0:
        raise ValueError("power, nonlinearity and zeta_end must be positive")
    uf2 = 1.0 / (1.0 + power_ratio)
    a_f0 = math.sqrt(uf2)
    a_h0 = math.sqrt(power_ratio * uf2)
    prop = propagate_single(a_f0, zeta_end, step=step,
                            sample_every=sample_every, method=method,
                            a_h0=a_h0)
    amps = prop.trajectory.amplitudes
    with np.errstate(invalid="ignore"):
        dtheta = np.where(
            np.abs(amps[:, 1]) > 1e-12,
            np.angle(amps[:, 1]) - 2.0 * np.angle(amps[:, 0]),
            np.nan,
        )
    dtheta = np.mod(dtheta + np.pi, 2.0 * np.pi) - np.pi
    return SingleShgReport(power_mw, nonlinearity, prop, dtheta)


def coupler_transfer(coupling, z_mm, n_modes=4):
    """Closed-form symplectic of the linear directional coupler: the constant
    generator mixes only the fundamental quadratures, so
    S = cos(Cz) I + sin(Cz) K with K^2 = -I on that subspace."""
    S = np.eye(2 * n_modes)
    K = np.zeros((4, 4))
    K[0, 3] = -1.0
    K[1, 2] = 1.0
    K[2, 1] = -1.0
    K[3, 0] = 1.0
    Sf = math.cos(coupling * z_mm) * np.eye(4) + math.sin(coupling * z_mm) * K
    idx = [2 * FA, 2 * FA + 1, 2 * FB, 2 * FB + 1]
    S[np.ix_(idx, idx)] = Sf
    return S


def run_linear_coupler(V0, coupling, z_mm_grid):
    """Evolve a 4-mode covariance matrix through the linear coupler at each
    requested physical length (Equations of motion with the nonlinearity
    switched off; exact, no ODE integration)."""
    V0 = np.asarray(V0, dtype=float)
    if V0.shape != (8, 8):
        raise ValueError("expected the 4-mode covariance matrix of two waveguides")
    out = []
    for z in np.atleast_1d(z_mm_grid):
        S = coupler_transfer(coupling, float(z))
        out.append(S @ V0 @ S.T)
    return np.array(out)


@dataclass(frozen=True)
class TwoModeSqueezerDevice:
    """Sequential device: per-waveguide SHG stage, then a linear coupler.

    The default per-waveguide power is half the nonlinear coupler's total
    so the two devices compare at equal input power.
    """

    stage1_length_mm: float
    nonlinearity: float
    power_per_waveguide_mw: float
    coupling: float
    z_grid_mm: np.ndarray = field(default=None)
    power_ratio: float = 1e-18
    step: float = 1e-3
    sample_every: int = 5
    method: str = "exponential"
    vlf_combos: tuple = DEFAULT_VLF_COMBOS

    def __post_init__(self):
        if self.stage1_length_mm < 0:
            raise ValueError("stage-1 length must be non-negative")
        if self.coupling <= 0:
            raise ValueError("coupling constant must be positive")
        if self.z_grid_mm is None:
            z_max = 2.0 * beat_length(self.coupling)
            object.__setattr__(self, "z_grid_mm", np.linspace(0.0, z_max, 201))


@dataclass(frozen=True)
class TwoModeSqueezerReport:
    device: TwoModeSqueezerDevice
    stage1: SingleShgReport
    v_input: np.ndarray  # assembled 4-mode CM at the coupler input
    z_mm: np.ndarray
    covariances: np.ndarray
    pair_rows: list
    vlf_rows: list


def assemble_two_waveguides(V_a, V_b):
    """Direct sum of two single-waveguide (f, h) covariance matrices,
    reordered into the canonical (f_a, f_b, h_a, h_b) layout."""
    V = np.zeros((8, 8))
    idx_a = [2 * FA, 2 * FA + 1, 2 * HA, 2 * HA + 1]
    idx_b = [2 * FB, 2 * FB + 1, 2 * HB, 2 * HB + 1]
    V[np.ix_(idx_a, idx_a)] = V_a
    V[np.ix_(idx_b, idx_b)] = V_b
    return V


def run_two_mode_squeezer(device):
    """Stage-1 SHG in each waveguide, then the linear coupler sweep."""
    if device.stage1_length_mm == 0:
        v_in = vacuum_cm(4)
        stage1 = None
    else:
        zeta1 = device.stage1_length_mm * math.sqrt(
            2.0 * device.power_per_waveguide_mw) * device.nonlinearity
        stage1 = run_single_shg(device.power_per_waveguide_mw,
                                device.nonlinearity, zeta1,
                                power_ratio=device.power_ratio,
                                step=device.step,
                                sample_every=device.sample_every,
                                method=device.method)
        V_wg = stage1.propagation.covariances[-1]
        v_in = assemble_two_waveguides(V_wg, V_wg)
    cms = run_linear_coupler(v_in, device.coupling, device.z_grid_mm)
    pair_rows = [pairwise_negativities(V) for V in cms]
    vlf_rows = [vlf_values(V, device.vlf_combos) for V in cms]
    return TwoModeSqueezerReport(device, stage1, v_in,
                                 np.asarray(device.z_grid_mm, dtype=float),
                                 cms, pair_rows, vlf_rows)
