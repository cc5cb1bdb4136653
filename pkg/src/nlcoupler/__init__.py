"""Gaussian-state simulation of chi^(2) nonlinear directional couplers.

Classical depleted-SHG dynamics, linearized quantum propagation of
covariance matrices, continuous-variable entanglement measures, loss
channels, and the end-to-end device pipelines behind the `nlcoupler` CLI.
"""

from .classical import (ClassicalState, CouplerParams, IntegrationError,
                        Trajectory, analytic_shg, initial_state, integrate,
                        kappa_from_physical, power_for_kappa, z_to_zeta,
                        zeta_to_z)
from .devices import (CouplerDevice, CouplerReport, SingleShgReport,
                      TwoModeSqueezerDevice, TwoModeSqueezerReport,
                      assemble_two_waveguides, beat_length, coupler_transfer,
                      run_coupler, run_linear_coupler, run_single_shg,
                      run_two_mode_squeezer)
from .gaussian import (Bipartition, InvalidStateError, fidelity_to_tmsv,
                       log_negativity, n_modes, partial_transpose, purity,
                       reduce_cm, symplectic_eigenvalues, symplectic_form,
                       tmsv_cm, vacuum_cm, validate_cm)
from .loss import ETA_CONVENTIONS, LossSpec, apply_loss, eta, mode_etas
from .metrics import (DEFAULT_VLF_COMBOS, VLF_THRESHOLD, EprFinding,
                      EprNotFoundError, PairRow, VlfCombination, VlfRow,
                      find_epr, fit_tmsv, pairwise_negativities,
                      squeezing_variances, vlf_value, vlf_values)
from .quantum import (PropagationResult, assemble_drift,
                      assemble_drift_single, propagate, propagate_single,
                      shg_coupler_propagation, symplecticity_defect)

__version__ = "1.0.0"
