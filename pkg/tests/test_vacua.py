"""Vacuum vectors, transfer matrices, global vacua and pre-Q operators."""

import cmath
import math
import random

import numpy as np
import pytest

from elliptic_qop import (ChainConfig, EdgeVector, comb_residual,
                          edge_pairing, k_operator, multicomb_lincomb,
                          multicomb_residual, operator_distance,
                          pair_propagation_residual, pre_q, sv, theta,
                          transfer_matrix, transfer_matrix_direct,
                          x_meromorphic, xl_comb, xr_comb, global_vacuum)
from elliptic_qop.qop import series_cut_for
from elliptic_qop.shifts import SV_ETA
from elliptic_qop.sklyanin import sklyanin_generator
from elliptic_qop.vacua import (annihilation_residual, gauge_matrix,
                                gauge_matrix_inv, gauged_l_entries, k_from_l,
                                rho_coeff)
from elliptic_qop.special import theta_bar

PI = math.pi
ZSV, XSV, LSV = sv("zeta1"), sv("zeta2"), sv("lam")


def test_edge_vector_laws(ctx, rng):
    for _ in range(20):
        zeta = complex(rng.uniform(-0.4, 0.4), rng.uniform(-0.15, 0.15))
        xi = complex(rng.uniform(-0.4, 0.4), rng.uniform(-0.15, 0.15))
        lhs = EdgeVector(xi, ctx).bra() @ EdgeVector(zeta, ctx).perp()
        assert abs(lhs - edge_pairing(xi, zeta, ctx)) / abs(lhs) < 1e-10
        assert abs(EdgeVector(zeta, ctx).bra() @ EdgeVector(zeta, ctx).perp()) \
            / abs(lhs) < 1e-12
        l2 = EdgeVector(zeta + 0.5 * (1 + ctx.tau), ctx).ket()
        r2 = cmath.exp(-1j * PI * ctx.tau / 2 - 2j * PI * zeta) \
            * EdgeVector(zeta, ctx).perp()
        assert np.max(np.abs(l2 - r2)) / np.max(np.abs(r2)) < 1e-10


def test_k_operator_and_annihilation(ctx, spin, gens):
    zeta, xi, lam = gens["zeta1"], gens["zeta2"], gens["lam"]
    k_closed = k_operator(zeta, xi, lam, spin, ctx)
    k_asm = k_from_l(zeta, xi, lam, spin, ctx)
    # the bra-L-perp assembly equals -2 times the closed-form kernel
    assert operator_distance(k_asm.scaled(-0.5), k_closed, ctx, gens,
                             window=(8, 2), probes=2) < 1e-9
    xr = xr_comb("+", ZSV, XSV, LSV, spin, ctx, gens, 14)
    assert annihilation_residual(k_closed, xr.comb, gens) < 1e-9
    xl = xl_comb("+", LSV, ZSV, XSV, spin, ctx, gens, 14)
    assert annihilation_residual(k_closed, xl.comb, gens, from_right=True) < 1e-9


def test_meromorphic_solutions(ctx, spin, gens, rng):
    zeta, xi, lam = gens["zeta1"], gens["zeta2"], gens["lam"]
    eta = ctx.eta
    for _ in range(10):
        z = complex(rng.uniform(-0.4, 0.4), rng.uniform(-0.15, 0.15))
        t1 = rho_coeff(z, zeta, xi, lam, spin, ctx) \
            * x_meromorphic("R", z + eta, zeta, xi, lam, spin, ctx)
        t2 = rho_coeff(-z, zeta, xi, lam, spin, ctx) \
            * x_meromorphic("R", z - eta, zeta, xi, lam, spin, ctx)
        assert abs(t1 + t2) / max(abs(t1), abs(t2)) < 1e-9
        t3 = rho_coeff(-z - eta, zeta, xi, lam, spin, ctx) \
            * x_meromorphic("L", z + eta, zeta, xi, lam, spin, ctx)
        t4 = rho_coeff(z - eta, zeta, xi, lam, spin, ctx) \
            * x_meromorphic("L", z - eta, zeta, xi, lam, spin, ctx)
        assert abs(t3 + t4) / max(abs(t3), abs(t4)) < 1e-9
    # parameter swap changes the solution by a z-independent factor only
    ratios = []
    for _ in range(5):
        z = complex(rng.uniform(-0.3, 0.3), rng.uniform(-0.1, 0.1))
        ratios.append(x_meromorphic("R", z, zeta, xi, lam, spin, ctx)
                      / x_meromorphic("R", z, xi, zeta, -lam, spin, ctx))
    assert max(abs(r - ratios[0]) for r in ratios) / abs(ratios[0]) < 1e-9


def test_vacuum_comb_construction(ctx, spin, gens):
    zeta, xi, lam = gens["zeta1"], gens["zeta2"], gens["lam"]
    eta = ctx.eta
    xr = xr_comb("+", ZSV, XSV, LSV, spin, ctx, gens, 12)
    scale = xr.comb.max_abs()
    # the function vanishes on the truncation side of the lattice
    lm = lam - spin.ell * eta
    for k in (0, 1):
        z0 = xi - lm - eta - 2 * k * eta
        v = x_meromorphic("R", z0, zeta, xi, lam, spin, ctx, guard=0.0)
        assert abs(v) / scale < 1e-10
    # swap laws are exact coefficient identities
    xrm = xr_comb("-", ZSV, XSV, LSV, spin, ctx, gens, 10)
    xrs = xr_comb("+", XSV, ZSV, -1 * LSV, spin, ctx, gens, 10)
    assert comb_residual(xrm.comb, xrs.comb) < 1e-12
    xlm = xl_comb("-", LSV, ZSV, XSV, spin, ctx, gens, 10)
    xls = xl_comb("+", -1 * LSV, XSV, ZSV, spin, ctx, gens, 10)
    assert comb_residual(xlm.comb, xls.comb) < 1e-12
    # consecutive-coefficient ratios follow the defining recursion
    xl = xl_comb("+", LSV, ZSV, XSV, spin, ctx, gens, 6)
    lp = lam + spin.ell * eta
    for k in range(2):
        zk = zeta + lp - 2 * k * eta - eta
        lhs = rho_coeff(-zk - eta, zeta, xi, lam, spin, ctx) * xl.comb.coeffs[k]
        rhs = -rho_coeff(zk - eta, zeta, xi, lam, spin, ctx) * xl.comb.coeffs[k + 1]
        assert abs(lhs - rhs) / max(abs(lhs), abs(rhs)) < 1e-9


def test_pair_propagation(ctx, spin, gens):
    worst = 0.0
    for rel in ("R4", "L4", "R5", "L5"):
        for sign in ("+", "-"):
            worst = max(worst, pair_propagation_residual(
                rel, sign, ZSV, XSV, LSV, spin, ctx, gens, window=12))
    assert worst < 1e-8


def test_transfer_matrix_paths(ctx, spin, gens):
    lam = gens["lam"]
    worst = 0.0
    for n in (1, 2, 3):
        chain = ChainConfig(N=n, spin=spin, ctx=ctx)
        t4 = transfer_matrix(lam, chain)
        t3 = transfer_matrix_direct(lam, chain)
        worst = max(worst, operator_distance(t4, t3, ctx, gens, window=(7, 2),
                                             probes=2, n_points=4, seed=n))
    assert worst < 1e-9
    # N=1: the trace is theta1(2 lam) s0
    chain1 = ChainConfig(N=1, spin=spin, ctx=ctx)
    t1 = transfer_matrix(lam, chain1)
    s0 = sklyanin_generator(0, spin, ctx).promote(0, 1) \
        .scaled(theta(1, 2 * lam, ctx.tau, ctx))
    assert operator_distance(t1, s0, ctx, gens, window=(7, 2), probes=2) < 1e-10
    # commuting transfer matrices
    chain2 = ChainConfig(N=2, spin=spin, ctx=ctx)
    ta = transfer_matrix(lam, chain2)
    tb = transfer_matrix(gens["mu"], chain2)
    assert operator_distance(ta.compose(tb, gens), tb.compose(ta, gens),
                             ctx, gens, window=(6, 3), probes=2,
                             n_points=4) < 1e-8


def test_gauge_triangularity(ctx, spin, gens):
    zeta, xi, lam = gens["zeta1"], gens["zeta2"], gens["lam"]
    lp, lm = lam + spin.ell * ctx.eta, lam - spin.ell * ctx.eta
    ops = gauged_l_entries(zeta, xi, lam, spin, ctx)
    xr = xr_comb("+", ZSV, XSV, LSV, spin, ctx, gens, 14).comb
    assert annihilation_residual(ops[0][1], xr, gens) < 1e-8
    edge_phase = cmath.exp(-2j * PI * (zeta - xi))
    xrp = xr_comb("+", ZSV, XSV, LSV + SV_ETA, spin, ctx, gens, 14).comb
    out11 = ops[0][0].apply(xr, gens)
    assert comb_residual(out11, xrp.scaled(
        edge_phase * theta(1, 2 * lm, ctx.tau, ctx))) < 1e-8
    xrm = xr_comb("+", ZSV, XSV, LSV - SV_ETA, spin, ctx, gens, 14).comb
    out22 = ops[1][1].apply(xr, gens)
    fac = theta_bar(4, zeta, ctx) / theta_bar(4, xi, ctx) \
        * theta(1, 2 * lp, ctx.tau, ctx) / edge_phase
    assert comb_residual(out22, xrm.scaled(fac)) < 1e-8
    # twisted sigma1 conjugate is lower triangular
    sig1p = gauge_matrix(zeta + 0.5, ctx) @ np.array([[0., 1.], [1., 0.]]) \
        @ gauge_matrix_inv(zeta, ctx)
    assert abs(sig1p[0, 1]) / np.max(np.abs(sig1p)) < 1e-10


@pytest.mark.parametrize("boundary,signs", [("periodic", (1.0, 1.0)),
                                            ("twisted_sigma1", (-1.0, 1.0))])
def test_global_vacuum_relations(ctx, spin, boundary, signs):
    rng = random.Random(31)
    chain = ChainConfig(N=2, spin=spin, ctx=ctx, boundary=boundary)
    gens = chain.edge_gens({"lam": 0.19 + 0.05j}, rng)
    lam = gens["lam"]
    thm = theta(1, 2 * lam - 2 * spin.ell * ctx.eta, ctx.tau, ctx) ** 2
    thp = theta(1, 2 * lam + 2 * spin.ell * ctx.eta, ctx.tau, ctx) ** 2
    t_op = transfer_matrix_direct(lam, chain)
    for side in ("R", "L"):
        x0 = global_vacuum(side, "+", LSV, chain, gens, 11)
        xp = global_vacuum(side, "+", LSV + SV_ETA, chain, gens, 11)
        xm = global_vacuum(side, "+", LSV - SV_ETA, chain, gens, 11)
        tx = (t_op if side == "R" else t_op.transpose(gens)).apply(x0, gens)
        rhs = multicomb_lincomb([(signs[0] * thm, xp), (signs[1] * thp, xm)])
        assert multicomb_residual(tx, rhs) < 1e-8


def test_pre_q_relations(ctx, spin):
    rng = random.Random(7)
    chain = ChainConfig(N=2, spin=spin, ctx=ctx)
    gens = chain.edge_gens({"lam": 0.19 + 0.05j, "mu": -0.13 + 0.08j}, rng)
    lam = gens["lam"]
    w, b = 3, 1
    cut = series_cut_for((w, b))
    t_op = transfer_matrix(lam, chain)
    thm = theta(1, 2 * lam - 2 * spin.ell * ctx.eta, ctx.tau, ctx) ** 2
    thp = theta(1, 2 * lam + 2 * spin.ell * ctx.eta, ctx.tau, ctx) ** 2
    lsv, msv = sv("lam"), sv("mu")
    for side in ("R", "L"):
        q0 = pre_q(side, "+", lsv, chain, gens, cut)
        qp = pre_q(side, "+", lsv + SV_ETA, chain, gens, cut)
        qm = pre_q(side, "+", lsv - SV_ETA, chain, gens, cut)
        lhs = t_op.compose(q0, gens) if side == "R" else q0.compose(t_op, gens)
        rhs = qp.scaled(thm) + qm.scaled(thp)
        assert operator_distance(lhs, rhs, ctx, gens, window=(w, b), probes=2,
                                 check_reach=False) < 1e-8
    # basic and mixed exchange
    ql_l = pre_q("L", "+", lsv, chain, gens, cut)
    ql_m = pre_q("L", "+", msv, chain, gens, cut)
    qr_l = pre_q("R", "+", lsv, chain, gens, cut)
    qr_m = pre_q("R", "+", msv, chain, gens, cut)
    assert operator_distance(ql_l.compose(qr_m, gens), ql_m.compose(qr_l, gens),
                             ctx, gens, window=(w, b), probes=2,
                             check_reach=False) < 1e-7
    qrm_m = pre_q("R", "-", msv, chain, gens, cut)
    qlm_m = pre_q("L", "-", msv, chain, gens, cut)
    assert operator_distance(ql_l.compose(qrm_m, gens), qlm_m.compose(qr_l, gens),
                             ctx, gens, window=(w, b), probes=2,
                             check_reach=False) < 1e-7
