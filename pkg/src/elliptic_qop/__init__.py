"""Baxter Q-operators for XYZ-type spin chains in infinite-dimensional
difference-operator representations, with verification suites for every
operator identity the construction rests on.
"""

from .context import ModuliContext
from .shifts import SV_ETA, SV_ONE, SV_TAU, ShiftVector, sv
from .combs import Comb, MultiComb, comb_lincomb, comb_residual, \
    multicomb_lincomb, multicomb_residual
from .operators import (DiffOp, MultiDiffOp, compose, compose_all,
                        matrix_operator_distance, operator_distance,
                        proportionality_constant, promote, transpose)
from .special import (basic_2phi1, dedekind_eta, egamma, elliptic_gamma,
                      elliptic_gamma_inv, gamma_residue, gamma_shift_ratio,
                      phi_ell, q_gamma, theta, theta_bar, theta_space_element)
from .series import (WSeriesSpec, bailey_partner, bailey_residual, ell_bracket,
                     ell_binomial, ell_factorial, ell_pochhammer, is_balanced,
                     w_series)
from .sklyanin import (LOperator, SpinParams, elliptic_r_matrix, l_operator,
                       l_operator_factorized, m_matrix, m_matrix_display,
                       rll_sides, sklyanin_generator, spin_gens,
                       theta3_identity_check, varphi, w_ell)
from .vacua import (ChainConfig, EdgeVector, VacuumComb, edge_pairing,
                    gauge_matrix, global_vacuum, k_operator, pre_q,
                    pair_propagation_residual, transfer_matrix,
                    transfer_matrix_direct, vacuum_comb, x_meromorphic,
                    xl_comb, xr_comb)
from .qop import (QOperator, a_operator, chain_symmetry_residual, local_f_factor,
                  local_f_convolution, n1_q_display, n1_q_explicit, q_operator,
                  q_commutativity_residual, q_kernel_operator,
                  q_special_value_residual, q_zero_residual, series_cut_for,
                  tq_coefficients, tq_residual, wronskian_pair,
                  wronskian_residual, xk_coeff)
from .xxz import (XXZParams, elliptic_to_xxz_drift, uq_sl2_residual,
                  xxz_context, xxz_l_operator, xxz_q_operator,
                  xxz_tq_coefficients, xxz_transfer_matrix)
from .harness import (SUITE_IDS, CheckRecord, SuiteConfig, VerificationReport,
                      eval_expr, load_config, run_suite, write_report)

__version__ = "0.1.0"
