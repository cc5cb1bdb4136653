"""Linearized quantum propagation: drift-matrix assembly and the transfer
matrix S(zeta) acting on the quadrature vector.

Mode ordering is canonical throughout the package: (f_a, f_b, h_a, h_b),
i.e. quadratures (X_fa, Y_fa, X_fb, Y_fb, X_ha, Y_ha, X_hb, Y_hb).

Two propagation methods are provided:

* "exponential": S(zeta) = expm(int_0^zeta Drift dzeta'), the accumulated
  generator exponentiated without time ordering.  This is the default.
* "ode": direct RK4 integration of dS/dzeta = Drift(zeta) S, i.e. the
  time-ordered product.  The drift matrices at different zeta do not
  commute, so the two methods agree only for zeta-independent generators.

Both preserve symplecticity (the drift lies in the symplectic Lie algebra),
so V(zeta) = S (1/2) I S^T stays a pure-state covariance matrix.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .classical import (DEFAULT_STEP, ClassicalState, IntegrationError, Trajectory,
                        derivative_array, initial_state)
from .gaussian import symplectic_form, vacuum_cm

SQRT2 = math.sqrt(2.0)

# quadrature indices in the canonical 4-mode ordering
FA, FB, HA, HB = 0, 1, 2, 3

SYMPLECTICITY_ABORT = 1e-6


def _nl_block(D, fi, hi, a_f, a_h):
    """Add the single-waveguide SHG coefficients for fundamental mode index
    fi and harmonic mode index hi, driven by classical amplitudes a_f, a_h."""
    re_h, im_h = a_h.real, a_h.imag
    re_f, im_f = SQRT2 * a_f.real, SQRT2 * a_f.imag
    xf, yf, xh, yh = 2 * fi, 2 * fi + 1, 2 * hi, 2 * hi + 1
    # dX_f = -u_h sin(th_h) X_f + u_h cos(th_h) Y_f + s2 u_f sin(th_f) X_h - s2 u_f cos(th_f) Y_h
    D[xf, xf] += -im_h
    D[xf, yf] += re_h
    D[xf, xh] += im_f
    D[xf, yh] += -re_f
    # dY_f = u_h cos(th_h) X_f + u_h sin(th_h) Y_f + s2 u_f cos(th_f) X_h + s2 u_f sin(th_f) Y_h
    D[yf, xf] += re_h
    D[yf, yf] += im_h
    D[yf, xh] += re_f
    D[yf, yh] += im_f
    # dX_h = -s2 u_f sin(th_f) X_f - s2 u_f cos(th_f) Y_f
    D[xh, xf] += -im_f
    D[xh, yf] += -re_f
    # dY_h = s2 u_f cos(th_f) X_f - s2 u_f sin(th_f) Y_f
    D[yh, xf] += re_f
    D[yh, yf] += -im_f


def assemble_drift(s, kappa):
    """8x8 drift matrix for the coupler at one classical state.

    The linear coupling acts between the fundamental modes only
    (dX_fa <- -kappa Y_fb, dY_fa <- +kappa X_fb, mirrored for waveguide b).
    Coupling a fundamental quadrature to a harmonic one instead would break
    the symplectic algebra.
    """
    D = np.zeros((8, 8))
    _nl_block(D, FA, HA, s.a_f, s.a_h)
    _nl_block(D, FB, HB, s.b_f, s.b_h)
    D[2 * FA, 2 * FB + 1] += -kappa
    D[2 * FA + 1, 2 * FB] += kappa
    D[2 * FB, 2 * FA + 1] += -kappa
    D[2 * FB + 1, 2 * FA] += kappa
    return D


def assemble_drift_single(a_f, a_h):
    """4x4 drift matrix of one uncoupled nonlinear waveguide, modes (f, h)."""
    D = np.zeros((4, 4))
    _nl_block(D, 0, 1, complex(a_f), complex(a_h))
    return D


def symplecticity_defect(S):
    """Max-norm of S Omega S^T - Omega."""
    S = np.asarray(S, dtype=float)
    Om = symplectic_form(S.shape[0] // 2)
    return float(np.abs(S @ Om @ S.T - Om).max())


@dataclass(frozen=True)
class PropagationResult:
    """Classical trajectory plus sampled transfer and covariance matrices."""

    trajectory: Trajectory
    transfer: np.ndarray  # (n, 2N, 2N)
    covariances: np.ndarray  # (n, 2N, 2N)
    method: str

    @property
    def zetas(self):
        return self.trajectory.zetas


def propagate(s0, kappa, zeta_end, step=DEFAULT_STEP, sample_every=1,
              method="exponential", v0=None):
    """Joint integration of the classical state and the transfer matrix.

    The classical amplitudes and the quantum generator advance in a single
    combined RK4 right-hand side so both see the same intermediate stages.
    V(zeta) = S V(0) S^T with V(0) the vacuum unless `v0` is given.
    """
    return _propagate(
        y0=s0.to_array(),
        classical_rhs=lambda y: derivative_array(y, kappa),
        drift_of=lambda y: assemble_drift(ClassicalState.from_array(y), kappa),
        dim=8, zeta_end=zeta_end, step=step, sample_every=sample_every,
        method=method, v0=v0,
    )


def propagate_single(a_f0, zeta_end, step=DEFAULT_STEP, sample_every=1,
                     method="exponential", a_h0=0.0, v0=None):
    """Single-waveguide (kappa = 0) propagation over modes (f, h)."""

    def rhs(y):
        a_f, a_h = y
        return np.array([1j * a_h * np.conj(a_f), 1j * a_f**2])

    return _propagate(
        y0=np.array([a_f0, a_h0], dtype=complex),
        classical_rhs=rhs,
        drift_of=lambda y: assemble_drift_single(y[0], y[1]),
        dim=4, zeta_end=zeta_end, step=step, sample_every=sample_every,
        method=method, v0=v0,
    )


def _propagate(y0, classical_rhs, drift_of, dim, zeta_end, step, sample_every,
               method, v0):
    if method not in ("exponential", "ode"):
        raise ValueError(f"unknown propagation method {method!r}")
    if zeta_end < 0:
        raise ValueError("zeta_end must be non-negative")
    if v0 is None:
        v0 = vacuum_cm(dim // 2)

    n_steps = max(1, int(round(zeta_end / step))) if zeta_end > 0 else 0
    h = zeta_end / n_steps if n_steps else 0.0

    y = y0.copy()
    # G is either the accumulated generator integral (exponential method)
    # or the transfer matrix itself (ode method)
    G = np.zeros((dim, dim)) if method == "exponential" else np.eye(dim)

    zetas = [0.0]
    samples_y = [y.copy()]
    samples_S = [np.eye(dim)]

    for i in range(n_steps):
        k1y = classical_rhs(y)
        D1 = drift_of(y)
        y2 = y + 0.5 * h * k1y
        k2y = classical_rhs(y2)
        D2 = drift_of(y2)
        y3 = y + 0.5 * h * k2y
        k3y = classical_rhs(y3)
        D3 = drift_of(y3)
        y4 = y + h * k3y
        k4y = classical_rhs(y4)
        D4 = drift_of(y4)

        if method == "exponential":
            G = G + (h / 6.0) * (D1 + 2.0 * D2 + 2.0 * D3 + D4)
        else:
            k1 = D1 @ G
            k2 = D2 @ (G + 0.5 * h * k1)
            k3 = D3 @ (G + 0.5 * h * k2)
            k4 = D4 @ (G + h * k3)
            G = G + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        y = y + (h / 6.0) * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)

        if not (np.all(np.isfinite(y)) and np.all(np.isfinite(G))):
            raise IntegrationError(
                f"non-finite propagation state at zeta={(i + 1) * h:.6g}"
            )
        if (i + 1) % sample_every == 0 or i == n_steps - 1:
            zetas.append((i + 1) * h)
            samples_y.append(y.copy())
            S = expm(G) if method == "exponential" else G.copy()
            defect = symplecticity_defect(S)
            if defect > SYMPLECTICITY_ABORT:
                raise IntegrationError(
                    f"transfer matrix symplecticity defect {defect:.3e} at "
                    f"zeta={(i + 1) * h:.6g}: step {h:.3g} too large"
                )
            samples_S.append(S)

    transfer = np.array(samples_S)
    covariances = np.einsum("nij,jk,nlk->nil", transfer, v0, transfer)
    # enforce exact symmetry against roundoff
    covariances = 0.5 * (covariances + np.transpose(covariances, (0, 2, 1)))
    traj = Trajectory(np.array(zetas), np.array(samples_y))
    return PropagationResult(traj, transfer, covariances, method)


def shg_coupler_propagation(kappa, zeta_end, power_ratio=1e-18, theta_f0=0.0,
                            phi_f0=0.0, step=DEFAULT_STEP, sample_every=1,
                            method="exponential"):
    """Convenience wrapper: SHG input conditions, then propagate."""
    s0 = initial_state(power_ratio, theta_f0, phi_f0)
    return propagate(s0, kappa, zeta_end, step=step, sample_every=sample_every,
                     method=method)
