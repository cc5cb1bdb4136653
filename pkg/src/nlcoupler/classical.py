"""Classical coupled-mode dynamics of depleted SHG in the nonlinear coupler.

The dimensionless equations are integrated in Cartesian complex amplitudes

    da_f/dz = i k b_f + i a_h conj(a_f)      da_h/dz = i a_f^2
    db_f/dz = i k a_f + i b_h conj(b_f)      db_h/dz = i b_f^2

(z here is the normalized coordinate zeta). This is an exact change of
variables of the polar amplitude/phase equations and stays regular where the
harmonic amplitude vanishes, which the polar form does not.
"""

import math
from dataclasses import dataclass

import numpy as np

DEFAULT_STEP = 1e-3
PHASE_EPS = 1e-12  # amplitudes below this leave the phase undefined


class IntegrationError(RuntimeError):
    """Raised when the integrator produces non-finite values."""


@dataclass(frozen=True)
class ClassicalState:
    """Complex dimensionless field amplitudes at one propagation plane.

    a/b label the two waveguides, f/h the fundamental and harmonic, so
    a_f = u_f exp(i theta_f), b_f = v_f exp(i phi_f), and so on.
    """

    a_f: complex
    b_f: complex
    a_h: complex
    b_h: complex

    def to_array(self):
        return np.array([self.a_f, self.b_f, self.a_h, self.b_h], dtype=complex)

    @classmethod
    def from_array(cls, y):
        return cls(*(complex(v) for v in y))

    @property
    def total_power(self):
        return float(np.sum(np.abs(self.to_array()) ** 2))


@dataclass(frozen=True)
class CouplerParams:
    """Physical coupler parameters and the derived effective coupling.

    kappa = C / (sqrt(2 P) g) with C in mm^-1, g in mm^-1 mW^-1/2, P in mW.
    """

    kappa: float
    coupling: float  # C, mm^-1
    nonlinearity: float  # g, mm^-1 mW^-1/2
    power: float  # P, mW

    def __post_init__(self):
        if min(self.kappa, self.coupling, self.nonlinearity, self.power) <= 0:
            raise ValueError("all coupler parameters must be positive")
        expected = kappa_from_physical(self.coupling, self.nonlinearity, self.power)
        if abs(self.kappa - expected) > 1e-12 * expected:
            raise ValueError(
                f"inconsistent parameters: kappa={self.kappa} but C/(sqrt(2P) g)={expected}"
            )

    @classmethod
    def from_physical(cls, coupling, nonlinearity, power):
        return cls(kappa_from_physical(coupling, nonlinearity, power),
                   coupling, nonlinearity, power)

    @classmethod
    def from_kappa(cls, kappa, coupling, nonlinearity):
        return cls(kappa, coupling, nonlinearity,
                   power_for_kappa(kappa, coupling, nonlinearity))


@dataclass(frozen=True)
class Trajectory:
    """Sampled classical trajectory: zetas strictly increasing from 0."""

    zetas: np.ndarray  # (n,)
    amplitudes: np.ndarray  # (n, 4) complex, columns a_f, b_f, a_h, b_h

    def state(self, i):
        return ClassicalState.from_array(self.amplitudes[i])

    def powers(self):
        """Columns u_f^2, v_f^2, u_h^2, v_h^2."""
        return np.abs(self.amplitudes) ** 2

    def harmonic_power(self):
        p = self.powers()
        return p[:, 2] + p[:, 3]

    def phases(self):
        """Columns theta_f, phi_f, theta_h, phi_h; NaN where undefined."""
        ph = np.angle(self.amplitudes)
        ph[np.abs(self.amplitudes) < PHASE_EPS] = np.nan
        return ph

    def phase_mismatches(self, unwrap=False):
        """Delta theta = theta_h - 2 theta_f and Delta phi, wrapped to (-pi, pi].

        With unwrap=True a continuity-based unwrapped version is returned
        instead (NaN samples are left in place).
        """
        ph = self.phases()
        dth = _wrap_angle(ph[:, 2] - 2.0 * ph[:, 0])
        dph = _wrap_angle(ph[:, 3] - 2.0 * ph[:, 1])
        if unwrap:
            dth = _unwrap_with_nans(dth)
            dph = _unwrap_with_nans(dph)
        return dth, dph


def kappa_from_physical(coupling, nonlinearity, power):
    """Effective coupling kappa = C / (sqrt(2 P) g)."""
    if min(coupling, nonlinearity, power) <= 0:
        raise ValueError("C, g and P must all be positive")
    return coupling / (math.sqrt(2.0 * power) * nonlinearity)


def power_for_kappa(kappa, coupling, nonlinearity):
    """Total input power P (mW) giving the requested effective coupling."""
    if min(kappa, coupling, nonlinearity) <= 0:
        raise ValueError("kappa, C and g must all be positive")
    return (coupling / (kappa * nonlinearity)) ** 2 / 2.0


def zeta_to_z(zeta, nonlinearity, power):
    """Physical length z (mm) for a normalized coordinate zeta = sqrt(2P) g z."""
    if min(nonlinearity, power) <= 0:
        raise ValueError("g and P must be positive")
    return zeta / (math.sqrt(2.0 * power) * nonlinearity)


def z_to_zeta(z_mm, nonlinearity, power):
    if min(nonlinearity, power) <= 0:
        raise ValueError("g and P must be positive")
    return z_mm * math.sqrt(2.0 * power) * nonlinearity


def initial_state(power_ratio, theta_f0=0.0, phi_f0=0.0):
    """Input state with equal per-waveguide fundamental powers and a harmonic
    seed of relative power `power_ratio` (harmonic phases equal the
    fundamental ones). Total dimensionless power is 1."""
    if power_ratio < 0:
        raise ValueError("power ratio must be non-negative")
    uf2 = 1.0 / (2.0 * (1.0 + power_ratio))
    uh2 = power_ratio * uf2
    uf, uh = math.sqrt(uf2), math.sqrt(uh2)
    return ClassicalState(
        a_f=uf * np.exp(1j * theta_f0),
        b_f=uf * np.exp(1j * phi_f0),
        a_h=uh * np.exp(1j * theta_f0),
        b_h=uh * np.exp(1j * phi_f0),
    )


def derivative_array(y, kappa):
    """Right-hand side in Cartesian complex form; y = (a_f, b_f, a_h, b_h)."""
    a_f, b_f, a_h, b_h = y
    return np.array([
        1j * kappa * b_f + 1j * a_h * np.conj(a_f),
        1j * kappa * a_f + 1j * b_h * np.conj(b_f),
        1j * a_f**2,
        1j * b_f**2,
    ])


def derivative(s, kappa):
    """Rate of change of a ClassicalState."""
    return ClassicalState.from_array(derivative_array(s.to_array(), kappa))


def phase_mismatch(s):
    """(Delta theta, Delta phi) wrapped to (-pi, pi]; NaN where an amplitude
    is below the phase threshold."""

    def mismatch(h, f):
        if abs(h) < PHASE_EPS or abs(f) < PHASE_EPS:
            return math.nan
        return _wrap_angle(np.angle(h) - 2.0 * np.angle(f))

    return mismatch(s.a_h, s.a_f), mismatch(s.b_h, s.b_f)


def rk4_step(f, y, h):
    k1 = f(y)
    k2 = f(y + 0.5 * h * k1)
    k3 = f(y + 0.5 * h * k2)
    k4 = f(y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def integrate(s0, kappa, zeta_end, step=DEFAULT_STEP, sample_every=1):
    """Fixed-step RK4 trajectory from zeta = 0 to zeta_end.

    Samples are kept every `sample_every` steps (plus the initial point and
    the endpoint). Raises IntegrationError naming the zeta reached if the
    state becomes non-finite.
    """
    if zeta_end <= 0:
        raise ValueError("zeta_end must be positive")
    if step <= 0:
        raise ValueError("step must be positive")
    n_steps = max(1, int(round(zeta_end / step)))
    h = zeta_end / n_steps
    y = s0.to_array()
    zetas = [0.0]
    samples = [y.copy()]
    f = lambda y: derivative_array(y, kappa)
    for i in range(n_steps):
        y = rk4_step(f, y, h)
        if not np.all(np.isfinite(y)):
            raise IntegrationError(
                f"non-finite classical state at zeta={(i + 1) * h:.6g} (step {h:.3g} too large?)"
            )
        if (i + 1) % sample_every == 0 or i == n_steps - 1:
            zetas.append((i + 1) * h)
            samples.append(y.copy())
    return Trajectory(np.array(zetas), np.array(samples))


def analytic_shg(u_f0, zetas):
    """Phase-matched single-waveguide depleted SHG solution: returns
    (|a_f|, |a_h|) = (u0 sech(u0 z), u0 tanh(u0 z))."""
    zetas = np.asarray(zetas, dtype=float)
    return u_f0 / np.cosh(u_f0 * zetas), u_f0 * np.tanh(u_f0 * zetas)


def _wrap_angle(x):
    """Wrap to (-pi, pi]."""
    w = np.mod(np.asarray(x) + np.pi, 2.0 * np.pi) - np.pi
    w = np.where(w == -np.pi, np.pi, w)
    return float(w) if np.ndim(x) == 0 else w


def _unwrap_with_nans(x):
    out = np.array(x, dtype=float)
    ok = np.isfinite(out)
    if ok.sum() > 1:
        out[ok] = np.unwrap(out[ok])
    return out
