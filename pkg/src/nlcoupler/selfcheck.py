"""Runtime invariant suite behind the `selfcheck` command.

Each check returns (name, passed, detail). The randomized checks draw their
covariance matrices from a seeded generator so a failing seed is
reproducible from the command line.
"""

import numpy as np
from scipy.linalg import expm

from . import loss as loss_channel
from .classical import analytic_shg, initial_state, integrate
from .gaussian import (Bipartition, log_negativity, partial_transpose,
                       symplectic_form, symplectic_eigenvalues, vacuum_cm)
from .quantum import propagate, propagate_single, symplecticity_defect


def random_cm(rng, n_modes=4, strength=0.3):
    """Random pure-state covariance matrix S (1/2 I) S^T with S = expm(Omega A)
    for a random symmetric A, which is symplectic by construction."""
    d = 2 * n_modes
    A = rng.normal(scale=strength, size=(d, d))
    A = 0.5 * (A + A.T)
    S = expm(symplectic_form(n_modes) @ A)
    return S @ vacuum_cm(n_modes) @ S.T


def check_symplecticity():
    prop = propagate(initial_state(1e-18), 1.13, 1.0, step=1e-3, sample_every=100)
    defect = max(symplecticity_defect(S) for S in prop.transfer)
    nu_err = max(float(np.abs(symplectic_eigenvalues(V) - 0.5).max())
                 for V in prop.covariances)
    ok = defect < 1e-8 and nu_err < 1e-6
    return "symplecticity", ok, f"defect={defect:.2e} nu_err={nu_err:.2e}"


def check_power_conservation():
    traj = integrate(initial_state(1e-18), 1.13, 3.5, step=1e-3, sample_every=100)
    err = float(np.abs(traj.powers().sum(axis=1) - 1.0).max())
    return "power conservation", err < 1e-8, f"max |P-1|={err:.2e}"


def check_analytic_shg():
    prop = propagate_single(1.0, 3.0, step=1e-3, sample_every=10)
    amps = prop.trajectory.amplitudes
    uf_ref, uh_ref = analytic_shg(1.0, prop.zetas)
    err = float(max(np.abs(np.abs(amps[:, 0]) - uf_ref).max(),
                    np.abs(np.abs(amps[:, 1]) - uh_ref).max()))
    return "analytic SHG oracle", err < 1e-6, f"max err={err:.2e}"


def check_pt_involution(rng):
    err = 0.0
    p = Bipartition((0, 1), (2, 3))
    for _ in range(5):
        V = random_cm(rng)
        err = max(err, float(np.abs(partial_transpose(partial_transpose(V, p), p) - V).max()))
    return "partial-transpose involution", err == 0.0, f"max err={err:.2e}"


def check_channel_composition(rng):
    err = 0.0
    for _ in range(5):
        V = random_cm(rng)
        e1 = rng.uniform(0.3, 1.0, size=4)
        e2 = rng.uniform(0.3, 1.0, size=4)
        lhs = loss_channel.apply_loss(loss_channel.apply_loss(V, e1), e2)
        rhs = loss_channel.apply_loss(V, e1 * e2)
        err = max(err, float(np.abs(lhs - rhs).max()))
    return "loss channel composition", err < 1e-12, f"max err={err:.2e}"


def check_en_monotone(rng):
    p = Bipartition((0, 1), (2, 3))
    worst = 0.0
    for _ in range(5):
        V = random_cm(rng)
        e = rng.uniform(0.3, 1.0, size=4)
        worst = max(worst, log_negativity(loss_channel.apply_loss(V, e), p)
                    - log_negativity(V, p))
    return "negativity monotone under loss", worst <= 1e-12, f"max increase={worst:.2e}"


def check_rk4_order():
    """Richardson estimate of the classical integrator's convergence order
    between steps h and h/2; fourth order gives an error ratio near 16."""
    s0 = initial_state(1e-18)
    ref = integrate(s0, 1.13, 2.0, step=1e-4).amplitudes[-1]
    h = integrate(s0, 1.13, 2.0, step=4e-2).amplitudes[-1]
    h2 = integrate(s0, 1.13, 2.0, step=2e-2).amplitudes[-1]
    e_h = float(np.abs(h - ref).max())
    e_h2 = float(np.abs(h2 - ref).max())
    ratio = e_h / e_h2
    return "RK4 order-4 convergence", 12.0 < ratio < 20.0, f"error ratio={ratio:.2f}"


def run_all(seed=0):
    rng = np.random.default_rng(seed)
    return [
        check_symplecticity(),
        check_power_conservation(),
        check_analytic_shg(),
        check_pt_involution(rng),
        check_channel_composition(rng),
        check_en_monotone(rng),
        check_rk4_order(),
    ]
