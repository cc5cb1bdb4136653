"""Gaussian-state linear algebra: covariance matrices, symplectic spectra,
partial transposition and scalar figures of merit.

Conventions: quadrature ordering is mode-major (X1, Y1, X2, Y2, ...) and the
vacuum variance is 1/2, so the n-mode vacuum covariance matrix is (1/2) I_2n.
Logarithmic negativity uses base-2 logarithms.
"""

from dataclasses import dataclass

import numpy as np

SYMMETRY_RTOL = 1e-12
# minimal symplectic eigenvalue of a physical state is 1/2; anything below
# 1/2 - VALIDITY_TOL is rejected rather than clamped
VALIDITY_TOL = 1e-7


class InvalidStateError(ValueError):
    """Raised when a matrix is not a physical covariance matrix."""


def n_modes(V):
    """Number of modes of a 2N x 2N covariance matrix."""
    V = np.asarray(V)
    if V.ndim != 2 or V.shape[0] != V.shape[1] or V.shape[0] % 2:
        raise InvalidStateError(f"covariance matrix must be square 2Nx2N, got {V.shape}")
    return V.shape[0] // 2


def symplectic_form(n):
    """Symplectic form Omega: block-diagonal 2x2 blocks [[0, 1], [-1, 0]]."""
    if n < 1:
        raise ValueError("need at least one mode")
    J = np.array([[0.0, 1.0], [-1.0, 0.0]])
    return np.kron(np.eye(n), J)


@dataclass(frozen=True)
class Bipartition:
    """A split of mode indices into two disjoint non-empty parties."""

    party_a: tuple
    party_b: tuple

    def __post_init__(self):
        a, b = set(self.party_a), set(self.party_b)
        if not a or not b:
            raise ValueError("both parties must be non-empty")
        if a & b:
            raise ValueError(f"parties overlap: {sorted(a & b)}")

    def check_modes(self, n):
        modes = set(self.party_a) | set(self.party_b)
        if modes != set(range(n)):
            raise ValueError(f"bipartition {self} does not cover modes 0..{n - 1}")

    def swapped(self):
        return Bipartition(self.party_b, self.party_a)


def vacuum_cm(n):
    """Covariance matrix of the n-mode vacuum, (1/2) I_2n."""
    if n < 1:
        raise ValueError("need at least one mode")
    return 0.5 * np.eye(2 * n)


def tmsv_cm(r, orientation=0.0):
    """Two-mode squeezed vacuum covariance matrix with squeezing parameter r.

    Diagonal blocks are cosh(2r)/2 I2; the off-diagonal block is
    sinh(2r)/2 diag(1, -1), rotated by `orientation` (equal local phase
    rotation of both modes, which leaves the diagonal blocks unchanged).
    """
    if not np.isfinite(r):
        raise ValueError("squeezing parameter must be finite")
    ch = np.cosh(2.0 * r) / 2.0
    sh = np.sinh(2.0 * r) / 2.0
    c2, s2 = np.cos(2.0 * orientation), np.sin(2.0 * orientation)
    off = sh * np.array([[c2, s2], [s2, -c2]])
    V = np.zeros((4, 4))
    V[:2, :2] = ch * np.eye(2)
    V[2:, 2:] = ch * np.eye(2)
    V[:2, 2:] = off
    V[2:, :2] = off.T
    return V


def symplectic_eigenvalues(V):
    """Symplectic spectrum: moduli of the eigenvalues of i Omega V, one per mode.

    Returned ascending. The spectrum of i Omega V comes in +/- pairs, so the
    2N moduli are deduplicated into N values.
    """
    V = np.asarray(V, dtype=float)
    if not np.all(np.isfinite(V)):
        raise InvalidStateError("covariance matrix has non-finite entries")
    n = n_modes(V)
    ev = np.linalg.eigvals(1j * symplectic_form(n) @ V)
    return np.sort(np.abs(ev))[::2]


def validate_cm(V, rtol=SYMMETRY_RTOL, tol=VALIDITY_TOL):
    """Check symmetry and the uncertainty relation; raise InvalidStateError."""
    V = np.asarray(V, dtype=float)
    scale = max(np.abs(V).max(), 1.0)
    if np.abs(V - V.T).max() > rtol * scale:
        raise InvalidStateError("covariance matrix is not symmetric")
    nu_min = symplectic_eigenvalues(V).min()
    if nu_min < 0.5 - tol:
        raise InvalidStateError(
            f"uncertainty relation violated: min symplectic eigenvalue {nu_min:.3e} < 1/2"
        )
    return V


def partial_transpose(V, p):
    """Partial transposition: flip the sign of every Y quadrature of party_b."""
    V = np.asarray(V, dtype=float)
    n = n_modes(V)
    p.check_modes(n)
    Vt = V.copy()
    for m in p.party_b:
        Vt[2 * m + 1, :] *= -1.0
        Vt[:, 2 * m + 1] *= -1.0
    return Vt


def reduce_cm(V, modes):
    """Gaussian partial trace: keep the 2x2 blocks of the selected modes."""
    V = np.asarray(V, dtype=float)
    n = n_modes(V)
    modes = sorted(set(modes))
    if not modes:
        raise ValueError("cannot reduce to an empty mode set")
    if modes[0] < 0 or modes[-1] >= n:
        raise ValueError(f"mode indices {modes} out of range for {n} modes")
    idx = [2 * m + o for m in modes for o in (0, 1)]
    return V[np.ix_(idx, idx)]


def log_negativity(V, p):
    """Logarithmic negativity E_N = sum_k max(0, -log2(2 nu_k)) over the
    symplectic eigenvalues nu_k of the partially transposed state."""
    nu = symplectic_eigenvalues(partial_transpose(V, p))
    return float(np.sum(np.maximum(0.0, -np.log2(2.0 * nu))))


def purity(V):
    """Purity mu = 1 / (2^n sqrt(det V)); equals 1 for pure states."""
    V = np.asarray(V, dtype=float)
    n = n_modes(V)
    det = np.linalg.det(V)
    if det <= 0.0:
        raise InvalidStateError(f"det V = {det:.3e} <= 0: not a valid state")
    return float(1.0 / (2.0**n * np.sqrt(det)))


def fidelity_to_tmsv(V, r, orientation=0.0):
    """Approximate fidelity F = 1 / sqrt(det(V + V_tmsv(r))) of a zero-mean
    two-mode state to a two-mode squeezed vacuum.

    This is the overlap approximation, not the exact mixed-state Gaussian
    fidelity; it is exact when V itself is pure.
    """
    V = np.asarray(V, dtype=float)
    if n_modes(V) != 2:
        raise ValueError("fidelity_to_tmsv expects a two-mode covariance matrix")
    return float(1.0 / np.sqrt(np.linalg.det(V + tmsv_cm(r, orientation))))
