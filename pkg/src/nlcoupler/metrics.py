"""Entanglement observables along a covariance-matrix trajectory: pairwise
and two-versus-two logarithmic negativities, optimized van Loock-Furusawa
(VLF) inequalities, and identification of the harmonic EPR state.

Canonical mode order: 0 = f_a, 1 = f_b, 2 = h_a, 3 = h_b.
"""

import math
from dataclasses import dataclass

import numpy as np

from .gaussian import (Bipartition, fidelity_to_tmsv, log_negativity, purity,
                       reduce_cm)

FA, FB, HA, HB = 0, 1, 2, 3
MODE_NAMES = ("fa", "fb", "ha", "hb")

VLF_THRESHOLD = 2.0
EPR_MEAN_POWER_EPS = 1e-4  # harmonic dimensionless power counted as "zero"


class EprNotFoundError(RuntimeError):
    """Raised when no harmonic-power minimum exists inside the scanned range."""


def _pair_en(V, m1, m2):
    return log_negativity(reduce_cm(V, (m1, m2)), Bipartition((0,), (1,)))


@dataclass(frozen=True)
class PairRow:
    """Negativities of the four mode pairs and the three 2|2 bipartitions."""

    en_ff: float  # (f_a, f_b)
    en_hh: float  # (h_a, h_b)
    en_fh_same: float  # (f_a, h_a)
    en_fh_cross: float  # (f_a, h_b)
    en_ff_hh: float  # (f_a f_b | h_a h_b)
    en_wg: float  # (f_a h_a | f_b h_b)
    en_swap: float  # (f_a h_b | f_b h_a)

    FIELDS = ("en_ff", "en_hh", "en_fh_same", "en_fh_cross",
              "en_ff_hh", "en_wg", "en_swap")

    def values(self):
        return tuple(getattr(self, name) for name in self.FIELDS)


def pairwise_negativities(V):
    """PairRow for a 4-mode covariance matrix in canonical order."""
    return PairRow(
        en_ff=_pair_en(V, FA, FB),
        en_hh=_pair_en(V, HA, HB),
        en_fh_same=_pair_en(V, FA, HA),
        en_fh_cross=_pair_en(V, FA, HB),
        en_ff_hh=log_negativity(V, Bipartition((FA, FB), (HA, HB))),
        en_wg=log_negativity(V, Bipartition((FA, HA), (FB, HB))),
        en_swap=log_negativity(V, Bipartition((FA, HB), (FB, HA))),
    )


@dataclass(frozen=True)
class VlfCombination:
    """One inequality: V(X_j - X_k) + V(Y_j + Y_k + sum_l g_l Y_l) with the
    gains g_l on `gain_modes` chosen to minimize the value."""

    pair: tuple
    gain_modes: tuple


# Calibrated so that the first and third inequalities are exact mirror images
# under the a<->b waveguide exchange (the reported degeneracy) while the pair
# graph h_a - f_a - f_b - h_b stays connected, as full inseparability needs.
DEFAULT_VLF_COMBOS = (
    VlfCombination((FA, HA), (FB, HB)),
    VlfCombination((FA, FB), (HA, HB)),
    VlfCombination((FB, HB), (FA, HA)),
)


@dataclass(frozen=True)
class VlfRow:
    values: tuple  # one value per inequality
    gains: tuple  # per inequality, the optimal gains on its gain_modes
    used_pseudo_inverse: bool = False

    def all_violated(self, threshold=VLF_THRESHOLD):
        return all(v < threshold for v in self.values)


def vlf_value(V, combo):
    """Minimized inequality value and the optimal gain vector.

    The minimization is the exactly solvable quadratic problem on the
    Y-covariance submatrix (normal equations); a singular system falls back
    to the pseudo-inverse solution.
    """
    V = np.asarray(V, dtype=float)
    X = V[::2, ::2]
    Y = V[1::2, 1::2]
    j, k = combo.pair
    var_x = X[j, j] + X[k, k] - 2.0 * X[j, k]
    free = list(combo.gain_modes)
    A = Y[np.ix_(free, free)]
    b = -(Y[free, j] + Y[free, k])
    fallback = False
    try:
        g = np.linalg.solve(A, b)
    except np.linalg.LinAlgError:
        g = np.linalg.lstsq(A, b, rcond=None)[0]
        fallback = True
    w = np.zeros(Y.shape[0])
    w[j] = w[k] = 1.0
    w[free] = g
    var_y = float(w @ Y @ w)
    return var_x + var_y, tuple(float(v) for v in g), fallback


def vlf_values(V, combos=DEFAULT_VLF_COMBOS):
    """VlfRow with all inequalities evaluated at their optimal gains."""
    vals, gains, fallback = [], [], False
    for combo in combos:
        v, g, fb = vlf_value(V, combo)
        vals.append(v)
        gains.append(g)
        fallback = fallback or fb
    return VlfRow(tuple(vals), tuple(gains), fallback)


def squeezing_variances(V):
    """Per-mode (min, max) eigenvalues of the diagonal 2x2 quadrature blocks;
    values below 1/2 indicate squeezing."""
    V = np.asarray(V, dtype=float)
    n = V.shape[0] // 2
    out = []
    for m in range(n):
        block = V[2 * m:2 * m + 2, 2 * m:2 * m + 2]
        lo, hi = np.linalg.eigvalsh(block)
        out.append((float(lo), float(hi)))
    return out


@dataclass(frozen=True)
class EprFinding:
    """Harmonic two-mode squeezed vacuum identified at the zero-mean plane.

    r_star/phi_star are the squeezing parameter and quadrature orientation of
    the closest TMSV (fidelity maximized over both); f_star is the fidelity
    at r_star in the reference orientation, f_star_oriented the maximum.
    squeezed_variance is the smallest variance over all normalized joint
    quadrature combinations of the pair (an EPR-type two-mode squeezing
    witness; below 1/2 means squeezing).
    """

    zeta0: float
    harmonic_power: float
    mu_h: float
    en_hh: float
    r_star: float
    phi_star: float
    f_star: float
    f_star_oriented: float
    squeezed_variance: float


def golden_section_min(f, a, b, tol=1e-6):
    """Plain golden-section minimization of a unimodal function on [a, b]."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def fit_tmsv(V_h, r_max=2.0):
    """Best-fit (r, phi) of a TMSV to a two-mode covariance matrix, maximizing
    the approximate fidelity over the squeezing parameter and the common
    quadrature orientation of the squeezing axes."""

    def neg_f_at(r, phi):
        return -fidelity_to_tmsv(V_h, r, phi)

    def best_phi(r):
        # coarse scan then golden refinement; the orientation enters through
        # 2*phi so [-pi/2, pi/2) covers everything
        grid = np.linspace(-np.pi / 2, np.pi / 2, 73)
        vals = [neg_f_at(r, p) for p in grid]
        i = int(np.argmin(vals))
        lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
        phi, fneg = golden_section_min(lambda p: neg_f_at(r, p), lo, hi, tol=1e-8)
        return phi, fneg

    r_star, _ = golden_section_min(lambda r: best_phi(r)[1], 0.0, r_max, tol=1e-6)
    phi_star, fneg = best_phi(r_star)
    return r_star, phi_star, -fneg


def find_epr(traj, covariances, r_max=2.0):
    """Locate the harmonic zero-mean plane and characterize the state there.

    zeta0 is the interior local minimum of the harmonic dimensionless power
    u_h^2 + v_h^2 after its first rise, refined by a local quadratic fit.
    Reported covariance-based quantities use the sample nearest to zeta0.
    """
    zetas = traj.zetas
    ph = traj.harmonic_power()
    if ph.max() < EPR_MEAN_POWER_EPS:
        raise EprNotFoundError(
            f"harmonic power stays below {EPR_MEAN_POWER_EPS:g} over "
            f"zeta in [{zetas[0]:g}, {zetas[-1]:g}]: no EPR plane"
        )
    interior = np.arange(1, len(ph) - 1)
    maxima = interior[(ph[1:-1] >= ph[:-2]) & (ph[1:-1] > ph[2:])]
    minima = interior[(ph[1:-1] < ph[:-2]) & (ph[1:-1] <= ph[2:])]
    if maxima.size == 0 or not np.any(minima > maxima[0]):
        raise EprNotFoundError(
            f"no interior harmonic-power minimum in zeta range "
            f"[{zetas[0]:g}, {zetas[-1]:g}]"
        )
    i_min = int(minima[minima > maxima[0]][0])
    zeta0 = _quadratic_refine(zetas, ph, i_min)

    V_h = reduce_cm(covariances[i_min], (HA, HB))
    en = log_negativity(V_h, Bipartition((0,), (1,)))
    r_star, phi_star, f_oriented = fit_tmsv(V_h, r_max=r_max)
    return EprFinding(
        zeta0=float(zeta0),
        harmonic_power=float(ph[i_min]),
        mu_h=purity(V_h),
        en_hh=en,
        r_star=r_star,
        phi_star=phi_star,
        f_star=fidelity_to_tmsv(V_h, r_star),
        f_star_oriented=f_oriented,
        squeezed_variance=float(np.linalg.eigvalsh(V_h).min()),
    )


def _quadratic_refine(x, y, i):
    if 0 < i < len(x) - 1:
        x0, x1, x2 = x[i - 1], x[i], x[i + 1]
        y0, y1, y2 = y[i - 1], y[i], y[i + 1]
        denom = (x0 - x1) * (x0 - x2) * (x1 - x2)
        a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / denom
        b = (x2**2 * (y0 - y1) + x1**2 * (y2 - y0) + x0**2 * (y1 - y2)) / denom
        if a > 0:
            return -b / (2.0 * a)
    return x[i]
