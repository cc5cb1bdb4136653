"""Linear propagation loss as a fictitious-beamsplitter Gaussian channel.

Loss is applied to the covariance matrix at the analysis plane:

    V -> D V D + diag((1 - eta_j) / 2),   D = diag(sqrt(eta_j) per quadrature)

which reduces to eta V + (1 - eta)/2 I when all transmittivities are equal.
"""

import math
from dataclasses import dataclass

import numpy as np

# Supported readings of a "gamma dB/cm" attenuation figure.  "db" treats the
# number as true (power) decibels; "exp" plugs the number into e^{-gamma z}
# as a Napierian coefficient; "amplitude_db" is 10^{-gamma z / 20}, the dB
# figure applied to the field amplitude.
ETA_CONVENTIONS = ("db", "exp", "amplitude_db")


@dataclass(frozen=True)
class LossSpec:
    """Propagation losses in dB/cm, identical in both waveguides."""

    gamma_f: float
    gamma_h: float

    def __post_init__(self):
        if self.gamma_f < 0 or self.gamma_h < 0:
            raise ValueError("loss coefficients must be non-negative")


def eta(gamma, z_cm, convention="db"):
    """Power transmittivity after z_cm centimetres at gamma dB/cm."""
    if gamma < 0 or z_cm < 0:
        raise ValueError("gamma and z must be non-negative")
    if convention == "db":
        return 10.0 ** (-gamma * z_cm / 10.0)
    if convention == "exp":
        return math.exp(-gamma * z_cm)
    if convention == "amplitude_db":
        return 10.0 ** (-gamma * z_cm / 20.0)
    raise ValueError(f"unknown eta convention {convention!r}; use one of {ETA_CONVENTIONS}")


def mode_etas(spec, z_cm, convention="db"):
    """Per-mode transmittivities in canonical order (f_a, f_b, h_a, h_b)."""
    ef = eta(spec.gamma_f, z_cm, convention)
    eh = eta(spec.gamma_h, z_cm, convention)
    return np.array([ef, ef, eh, eh])


def apply_loss(V, etas):
    """Mix each mode with vacuum on a beamsplitter of power transmittivity
    eta_j; cross-mode blocks scale by sqrt(eta_j eta_k)."""
    V = np.asarray(V, dtype=float)
    etas = np.asarray(etas, dtype=float)
    n = V.shape[0] // 2
    if etas.shape != (n,):
        raise ValueError(f"need one transmittivity per mode, got {etas.shape} for {n} modes")
    if np.any(etas <= 0) or np.any(etas > 1):
        raise ValueError("transmittivities must lie in (0, 1]")
    d = np.repeat(np.sqrt(etas), 2)
    return V * np.outer(d, d) + np.diag(np.repeat((1.0 - etas) / 2.0, 2))


def scale_mean_fields(amplitudes, etas):
    """Scale classical amplitudes by sqrt(eta) for reporting alongside lossy
    covariance matrices; `amplitudes` columns are (a_f, b_f, a_h, b_h)."""
    etas = np.asarray(etas, dtype=float)
    # classical columns are (f_a, f_b, h_a, h_b) in transmittivity terms
    return np.asarray(amplitudes) * np.sqrt(etas)[None, :]
