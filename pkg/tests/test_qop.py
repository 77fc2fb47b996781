"""Normalized Q-operators: duality, T-Q, commutativity, special values,
the factorized integral of motion and the Wronskian."""

import cmath
import random

import pytest

from elliptic_qop import (ChainConfig, MultiDiffOp, SpinParams,
                          operator_distance, proportionality_constant,
                          q_commutativity_residual, q_kernel_operator,
                          q_operator, q_special_value_residual,
                          q_zero_residual, series_cut_for, sv, theta,
                          tq_residual, transfer_matrix, xk_coeff)
from elliptic_qop.errors import NormalizationSingular
from elliptic_qop.qop import (a_operator, local_f_convolution, local_f_factor,
                              local_f_symmetric_core, chain_symmetry_residual,
                              n1_q_display, n1_q_explicit, w10_9_alphas,
                              wronskian_pair, wronskian_residual, _log_vwp_term,
                              _w5_params, log_xk_coeff)
from elliptic_qop.series import WSeriesSpec, bailey_partner, is_balanced
from elliptic_qop.shifts import SV_ETA
from elliptic_qop.sklyanin import sklyanin_generator, spin_gens

LSV, MSV = sv("lam"), sv("mu")


def test_xk_basics(ctx, spin, gens):
    zeta, xi, lam = gens["zeta1"], gens["zeta2"], gens["lam"]
    assert xk_coeff(0, zeta, xi, lam, spin, ctx) == 1.0
    # x_k vanishes for k >= 1 at lam = -l eta (series terminates at k = 0)
    lam_star = -spin.ell * ctx.eta
    for k in (1, 2):
        assert abs(xk_coeff(k, zeta, xi, lam_star, spin, ctx)) < 1e-12
    # the ratio x_{k+1}/x_k matches the series term ratio
    for k in (0, 1, 2):
        r_kernel = cmath.exp(log_xk_coeff(k + 1, zeta, xi, lam, spin, ctx)
                             - log_xk_coeff(k, zeta, xi, lam, spin, ctx))
        a1, uppers = _w5_params(zeta, xi, lam, spin, ctx)
        r_series = cmath.exp(_log_vwp_term(k + 1, a1, uppers, ctx)
                             - _log_vwp_term(k, a1, uppers, ctx))
        assert abs(r_kernel - r_series) / abs(r_series) < 1e-10


@pytest.mark.parametrize("sign", ["+", "-"])
def test_kernel_operator_duality(ctx, spin, gens, sign):
    chain = ChainConfig(N=2, spin=spin, ctx=ctx)
    q1 = q_operator(sign, LSV, chain, gens, series_cut=7)
    q2 = q_kernel_operator(sign, LSV, chain, gens, series_cut=7)
    assert operator_distance(q1.op, q2, ctx, gens, window=(3, 1), probes=2,
                             check_reach=False) < 1e-9


def test_series_window_exactness(ctx, spin, gens):
    chain = ChainConfig(N=1, spin=spin, ctx=ctx)
    q1 = q_operator("+", LSV, chain, gens, series_cut=7)
    q2 = q_operator("+", LSV, chain, gens, series_cut=9)
    assert operator_distance(q1.op, q2.op, ctx, gens, window=(3, 1), probes=2,
                             check_reach=False) < 1e-13


@pytest.mark.parametrize("boundary", ["periodic", "twisted_sigma1"])
def test_tq_relation(ctx, spin, gens, boundary):
    for n in (1, 2):
        chain = ChainConfig(N=n, spin=spin, ctx=ctx, boundary=boundary)
        for sign in ("+", "-"):
            assert tq_residual(sign, LSV, chain, gens, window=(3, 1),
                               probes=2) < 1e-7


def test_commutativity(ctx, spin, gens):
    chain = ChainConfig(N=2, spin=spin, ctx=ctx)
    for sa, sb in (("+", "+"), ("+", "-"), ("+", "T")):
        assert q_commutativity_residual(sa, LSV, sb, MSV, chain, gens,
                                        window=(2, 1), probes=2) < 1e-7


def test_special_values_and_zeros(ctx, spin, gens):
    chain = ChainConfig(N=2, spin=spin, ctx=ctx)
    assert q_special_value_residual("+", chain, gens, window=(4, 2),
                                    probes=2) < 1e-9
    assert q_special_value_residual("-", chain, gens, window=(4, 2),
                                    probes=2) < 1e-9
    for m in (1, 2):
        assert q_zero_residual("+", m, chain, gens, window=(4, 2)) < 1e-9
        assert q_zero_residual("-", m, chain, gens, window=(4, 2)) < 1e-9
    # evaluation at the normalization pole raises for half-integer spin
    spin1 = SpinParams(1.0)
    gens1 = spin_gens(spin1, ctx)
    chain1 = ChainConfig(N=2, spin=spin1, ctx=ctx)
    with pytest.raises(NormalizationSingular):
        q_operator("+", -1 * spin1.leta_sv, chain1, gens1, 4)


def test_a_operator(ctx, gens):
    spin1 = SpinParams(1.0)
    g1 = spin_gens(spin1, ctx)
    chain = ChainConfig(N=2, spin=spin1, ctx=ctx)
    a_op = a_operator(chain, g1)
    q_at = q_operator("+", spin1.leta_sv + SV_ETA, chain, g1, 6)
    c = proportionality_constant(q_at.op, a_op, ctx, g1, window=(4, 2))
    assert operator_distance(q_at.op, a_op.scaled(c), ctx, g1, window=(4, 2),
                             probes=2, check_reach=False) < 1e-8
    t_op = transfer_matrix(0.19 + 0.05j, chain)
    assert operator_distance(a_op.compose(t_op, g1), t_op.compose(a_op, g1),
                             ctx, g1, window=(6, 4), probes=2,
                             check_reach=False) < 1e-8


def test_wronskian(ctx, spin, gens):
    chain1 = ChainConfig(N=1, spin=spin, ctx=ctx)
    assert wronskian_residual(LSV, chain1, gens, window=(3, 1), probes=2) < 1e-7
    cut = series_cut_for((3, 1))
    w_op = wronskian_pair(spin.leta_sv, chain1, gens, cut)
    a_op = a_operator(chain1, gens, series_cut=cut)
    ac = a_op.compose(MultiDiffOp.cyclic(1), gens)
    c = proportionality_constant(w_op, ac, ctx, gens, window=(3, 1))
    assert operator_distance(w_op, ac.scaled(c), ctx, gens, window=(3, 1),
                             probes=2, check_reach=False) < 1e-7


def test_n1_forms(ctx, gens):
    spin1 = SpinParams(1.0)
    g1 = spin_gens(spin1, ctx)
    g1["lam"] = gens["lam"]
    qd = n1_q_display(LSV, spin1, ctx, g1, series_cut=8)
    qe = n1_q_explicit(LSV, spin1, ctx, g1)
    assert len(qe.terms) == 2  # l + 1 terms at l = 1
    c = proportionality_constant(qe, qd, ctx, g1, window=(6, 2))
    assert operator_distance(qe, qd.scaled(c), ctx, g1, window=(6, 2),
                             probes=2, check_reach=False) < 1e-9
    lame = sklyanin_generator(0, spin1, ctx).scaled(
        theta(1, 2 * (0.11 - 0.07j), ctx.tau, ctx))
    assert operator_distance(qe.compose(lame, g1), lame.compose(qe, g1),
                             ctx, g1, window=(7, 3), probes=2) < 1e-8


def test_local_f_decomposition(ctx, spin, gens):
    zsv, xsv, zpsv = sv("zeta1"), sv("zeta2"), sv("zetap")
    ff = local_f_factor(4, zsv, xsv, zpsv, LSV, MSV, spin, ctx, gens)
    conv = local_f_convolution(4, zsv, xsv, zpsv, LSV, MSV, spin, ctx, gens)
    for n in range(5):
        a, b = ff.coeffs[n], conv[n]
        assert abs(a - b) / max(abs(a), abs(b)) < 1e-8
    # delta supports march down the 2 eta lattice from the constrained point
    for n in range(4):
        step = ff.supports[n] - ff.supports[n + 1]
        assert step.even_eta_steps() == 1


def test_bailey_mechanism_parameters(ctx, spin, gens):
    for n in (1, 3):
        a1, alphas = w10_9_alphas(n, gens["zeta1"], gens["zeta2"],
                                  gens["zetap"], gens["lam"], gens["mu"],
                                  spin, ctx)
        assert is_balanced(WSeriesSpec(9, a1, alphas, 1.0, ctx, termination=n))
        b1, betas = bailey_partner(a1, alphas)
        a1s, alphas_s = w10_9_alphas(n, gens["zeta1"], gens["zeta2"],
                                     gens["zetap"], gens["mu"], gens["lam"],
                                     spin, ctx)
        assert abs(b1 - a1s) < 1e-12
        assert max(abs(x - y) for x, y in zip(betas, alphas_s)) < 1e-12


def test_symmetric_core_and_chain_symmetry(ctx, spin, gens):
    zsv, xsv, zpsv = sv("zeta1"), sv("zeta2"), sv("zetap")
    c1 = local_f_symmetric_core(3, zsv, xsv, zpsv, LSV, MSV, spin, ctx, gens)
    c2 = local_f_symmetric_core(3, zsv, xsv, zpsv, MSV, LSV, spin, ctx, gens)
    for a, b in zip(c1, c2):
        assert abs(a - b) / max(abs(a), abs(b)) < 1e-8
    rng = random.Random(3)
    chain = ChainConfig(N=2, spin=spin, ctx=ctx)
    gens2 = chain.edge_gens({"lam": gens["lam"], "mu": gens["mu"]}, rng)
    for mode in ("q1", "q1a"):
        for nvec in ((0, 1), (2, 3)):
            assert chain_symmetry_residual(mode, nvec, chain, LSV, MSV,
                                           gens2) < 1e-7
