"""Normalized Baxter Q-operators, the T-Q relation, commutativity
machinery (including the local Bailey-symmetry decomposition), special
values, the factorized integral of motion and the Wronskian relation.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .context import ModuliContext
from .errors import (ConstraintInfeasible, NormalizationSingular,
                     PoleProximity, SpinNotInteger)
from .operators import DiffOp, MultiDiffOp, Term1, TermN, operator_distance
from .series import ell_binomial, ell_factorial, w10_9
from .shifts import SV_ETA, ShiftVector, sv
from .sklyanin import SpinParams
from .special import (log_egamma, log_gamma_shift_ratio, log_theta,
                      log_theta1_structural, safe_exp, theta)
from .vacua import (ChainConfig, log_omega, log_x_left, log_x_right,
                    transfer_matrix, vacuum_comb, _kvecs)

PI = math.pi


# ---------------------------------------------------------------------------
# Local series data
# ---------------------------------------------------------------------------

def log_xk_coeff(k: int, zeta: complex, xi: complex, lam: complex,
                 spin: SpinParams, ctx: ModuliContext) -> complex:
    """log x_k, the k-th kernel coefficient of the left vacuum expansion.

    Exact lattice zeros in the numerator terminate the series (-inf log);
    denominator zeros before termination flag a non-generic draw.
    """
    if k < 0:
        raise ValueError("xk_coeff requires k >= 0")
    eta = ctx.eta
    lp = lam + spin.ell * ctx.eta
    tle = 2 * spin.ell * eta
    nums = [2 * zeta + 2 * lp - 4 * k * eta]
    dens = [2 * zeta + 2 * lp]
    for j in range(k):
        je = 2 * j * eta
        je1 = 2 * (j + 1) * eta
        nums += [-2 * lp + je, -2 * lp - 2 * zeta + je,
                 xi - zeta - tle + je, -xi - zeta - tle + je]
        dens += [je1, -2 * zeta + je1,
                 xi - zeta - 2 * lam + je1, -xi - zeta - 2 * lam + je1]
    return _log_theta_quotient(nums, dens, ctx)


def xk_coeff(k: int, zeta: complex, xi: complex, lam: complex,
             spin: SpinParams, ctx: ModuliContext) -> complex:
    return cmath.exp(log_xk_coeff(k, zeta, xi, lam, spin, ctx))


def _log_theta_quotient(nums: Sequence[complex], dens: Sequence[complex],
                        ctx: ModuliContext) -> complex:
    """log of prod theta1(nums) / prod theta1(dens) with exact-zero algebra.

    Structural lattice zeros shared between a numerator and a denominator
    argument (identical complex values) cancel exactly; an uncancelled
    denominator zero raises, an uncancelled numerator zero gives -inf.
    At special spectral points entire bracket families coincide this way
    (the series degenerating to the finite intertwiner).
    """
    tau = ctx.tau
    num_logs = [log_theta1_structural(x, tau, ctx) for x in nums]
    den_logs = [log_theta1_structural(x, tau, ctx) for x in dens]
    if any(l.real == -math.inf for l in den_logs):
        nums_left = list(zip(nums, num_logs))
        lg = 0.0 + 0.0j
        zero_count = 0
        for x_d, l_d in zip(dens, den_logs):
            if l_d.real != -math.inf:
                lg -= l_d
                continue
            for idx, (x_n, l_n) in enumerate(nums_left):
                if l_n.real == -math.inf and abs(x_n - x_d) < 1e-11:
                    nums_left.pop(idx)      # exact 0/0 pair cancels to 1
                    break
            else:
                raise PoleProximity(f"uncancelled bracket zero at {x_d}")
        for _, l_n in nums_left:
            if l_n.real == -math.inf:
                zero_count += 1
            else:
                lg += l_n
        return complex(-math.inf, 0.0) if zero_count else lg
    if any(l.real == -math.inf for l in num_logs):
        return complex(-math.inf, 0.0)
    return sum(num_logs, 0.0 + 0.0j) - sum(den_logs, 0.0 + 0.0j)


def _log_vwp_term(k: int, a1: complex, uppers: Sequence[complex],
                  ctx: ModuliContext) -> complex:
    """log of the k-th very-well-poised series coefficient.

    All parameters enter as theta1 arguments (2*eta times the alpha's):
    term_k = [a1+2k][a1]_k / ([a1][1]_k) prod_m [a_m]_k / [a1-a_m+1]_k.
    """
    eta = ctx.eta
    nums = [a1 + 4 * k * eta]
    dens = [a1]
    for j in range(k):
        je = 2 * j * eta
        je1 = 2 * (j + 1) * eta
        nums.append(a1 + je)
        dens.append(je1)
        for am in uppers:
            nums.append(am + je)
            dens.append(a1 - am + je1)
    return _log_theta_quotient(nums, dens, ctx)


def _w5_params(z_here: complex, z_next: complex, lam_eff: complex,
               spin: SpinParams, ctx: ModuliContext):
    """2*eta-scaled 6W5 parameters of a Q site factor.

    z_next is the forward neighbour for Q^+ and the backward one for Q^-;
    the parameter structure is the same in both cases (the sign flip of
    the spectral parameter is already in lam_eff).
    """
    eta = ctx.eta
    tle = 2 * spin.ell * eta
    a1 = -2 * z_here - 2 * lam_eff - tle
    a4 = -2 * lam_eff - tle
    a5 = -z_here - z_next - tle
    a6 = (z_next - z_here) - tle
    return a1, (a4, a5, a6)



def _make_log_prefactor(chain: ChainConfig, sign: str, lam_eff: complex,
                        lam_eff_sv: ShiftVector):
    """Per-site gamma prefactor of the Q-operators, pole-cancellation safe.

    When lam_+ is an exact eta multiple the numerator and denominator
    gammas sit on shifted copies of the same lattice; pairing them through
    the closed shift-ratio law keeps every evaluation finite.
    """
    N, ctx, spin = chain.N, chain.ctx, chain.spin
    eta = ctx.eta
    tle = 2 * spin.ell * eta
    steps = (lam_eff_sv + spin.leta_sv).eta_steps()
    k_special = None
    if steps is not None and steps.denominator == 1:
        k_special = int(steps)

    def generic(zvec) -> complex:
        lg = 0.0 + 0.0j
        for i in range(N):
            zi, zn = _site_args(chain, zvec, i, sign)
            lg += log_egamma(2 * zi, ctx)
            lg += log_egamma(zi - zn + 2 * lam_eff, ctx)
            lg += log_egamma(zi + zn + 2 * lam_eff, ctx)
            lg -= log_egamma(2 * zi + 2 * lam_eff + tle, ctx)
            lg -= log_egamma(zi - zn - tle, ctx)
            lg -= log_egamma(zi + zn - tle, ctx)
        return lg

    def paired(zvec) -> complex:
        lg = 0.0 + 0.0j
        for i in range(N):
            zi, zn = _site_args(chain, zvec, i, sign)
            lg += log_gamma_shift_ratio(zi - zn - tle, k_special, ctx)
            lg += log_gamma_shift_ratio(zi + zn - tle, k_special, ctx)
            lg -= log_gamma_shift_ratio(2 * zi, k_special, ctx)
        return lg

    return generic if k_special is None else paired


@dataclass(frozen=True)
class QOperator:
    """Window-truncated normalized Q-operator with its scalar prefactor
    record (the inverse elliptic gamma power) kept separately inspectable."""

    sign: str
    lam: ShiftVector
    chain: ChainConfig
    op: MultiDiffOp
    series_cut: int
    norm_log: complex          # log of Gamma^{-N}(+-2 lam - 2 l eta)
    unnormalized: MultiDiffOp


def _site_args(chain: ChainConfig, zvec, j: int, sign: str):
    """(z_here, z_neighbour) for the site-j factor of Q^{sign}.

    The twisted closure z_{N+1} = z_1 + 1/2 lands on the forward neighbour
    for Q^+ and on the wrap-around first slot for Q^- (which reads its
    edges through the cyclic shift).
    """
    n = chain.N
    if sign == "+":
        zh = zvec[j]
        zn = zvec[(j + 1) % n]
        if chain.twisted and j == n - 1:
            zn = zn + 0.5
    else:
        zh = zvec[j]
        if chain.twisted and j == 0:
            zh = zh + 0.5
        zn = zvec[(j - 1) % n]
    return zh, zn


def q_operator(sign: str, lam_sv: ShiftVector, chain: ChainConfig,
               gens: Mapping[str, complex], series_cut: int) -> QOperator:
    """Q^+ or Q^- through the normal-ordered operator form.

    The per-site series in e^{-2 eta d} is cut at `series_cut`; every extra
    term only shifts support further out, so interior probe windows sized
    against the cut see the exact operator.
    """
    N, ctx, spin = chain.N, chain.ctx, chain.spin
    eta, tau = ctx.eta, ctx.tau
    if sign not in ("+", "-"):
        raise ValueError(f"sign must be '+' or '-', got {sign!r}")
    lam = lam_sv.value(gens)
    lam_eff = lam if sign == "+" else -lam
    lam_eff_sv = lam_sv if sign == "+" else -1 * lam_sv
    norm_arg = 2 * lam_eff - 2 * spin.ell * eta
    if spin.finite_dim_flag:
        # poles of the normalized operator at lam = -+ l eta
        probe = norm_arg + 2 * (2 * spin.ell) * eta
        if abs(probe - round(probe.real)) < ctx.generic_guard:
            raise NormalizationSingular(
                f"Q{sign} normalization pole at lam = {lam}")
    norm_log = -N * log_egamma(norm_arg, ctx, guard=0.0)
    log_prefactor = _make_log_prefactor(chain, sign, lam_eff, lam_eff_sv)

    pref_cache: dict = {}
    terms = []
    for code in _kvecs(N, series_cut + 1):
        def coeff(zvec, kvec=code):
            zvec = tuple(zvec)
            lg = pref_cache.get(zvec)
            if lg is None:
                lg = log_prefactor(zvec)
                pref_cache[zvec] = lg
            for j in range(N):
                zh, zn = _site_args(chain, zvec, j, sign)
                a1, uppers = _w5_params(zh, zn, lam_eff, spin, ctx)
                lg += _log_vwp_term(kvec[j], a1, uppers, ctx)
            return safe_exp(lg)

        shifts = tuple(lam_eff_sv + spin.leta_sv - 2 * k * SV_ETA for k in code)
        terms.append(TermN(shifts, coeff, tuple(range(N)), f"Q{sign}{code}"))
    core = MultiDiffOp(N, tuple(terms), truncated=True)
    if sign == "-":
        half = N - 1 if chain.twisted else None
        core = core.compose(MultiDiffOp.cyclic(N, half_shift_site=half), gens)
    unnorm = core
    op = core.scaled(cmath.exp(norm_log))
    return QOperator(sign, lam_sv, chain, op, series_cut, norm_log, unnorm)


def q_kernel_operator(sign: str, lam_sv: ShiftVector, chain: ChainConfig,
                      gens: Mapping[str, complex], series_cut: int) -> MultiDiffOp:
    """The same operator assembled from the kernel coefficients x_k."""
    N, ctx, spin = chain.N, chain.ctx, chain.spin
    eta = ctx.eta
    lam = lam_sv.value(gens)
    lam_eff = lam if sign == "+" else -lam
    lam_eff_sv = lam_sv if sign == "+" else -1 * lam_sv
    norm_log = -N * log_egamma(2 * lam_eff - 2 * spin.ell * eta, ctx, guard=0.0)
    log_prefactor = _make_log_prefactor(chain, sign, lam_eff, lam_eff_sv)

    terms = []
    for code in _kvecs(N, series_cut + 1):
        def coeff(zvec, kvec=code):
            zvec = tuple(zvec)
            lg = norm_log + log_prefactor(zvec)
            for j in range(N):
                zh, zn = _site_args(chain, zvec, j, sign)
                lg += log_xk_coeff(kvec[j], zh, zn, lam_eff, spin, ctx)
            return safe_exp(lg)

        shifts = tuple(lam_eff_sv + spin.leta_sv - 2 * k * SV_ETA for k in code)
        terms.append(TermN(shifts, coeff, tuple(range(N)), f"Qk{sign}{code}"))
    core = MultiDiffOp(N, tuple(terms), truncated=True)
    if sign == "-":
        half = N - 1 if chain.twisted else None
        core = core.compose(MultiDiffOp.cyclic(N, half_shift_site=half), gens)
    return core


def series_cut_for(window: tuple[int, int], slack: int = 2) -> int:
    """Series cut that keeps the interior window exact: 2W - B + slack."""
    W, B = window
    return 2 * W - B + slack


# ---------------------------------------------------------------------------
# T-Q relation and commutativity
# ---------------------------------------------------------------------------

def tq_coefficients(lam: complex, chain: ChainConfig) -> tuple[complex, complex]:
    """Coefficients (a, b) in T(lam) Q(lam) = a Q(lam+eta) + b Q(lam-eta).

    Periodic chains follow the displayed T-Q relation.  Twisted chains keep
    the relative minus sign but flip both terms: the half-period edge
    closure telescopes the per-site phase e^{-2 pi i (zeta_i - zeta_{i+1})}
    of the omega-normalized vacua to e^{pi i} = -1.
    """
    ctx, spin = chain.ctx, chain.spin
    thm = theta(1, 2 * lam - 2 * spin.ell * ctx.eta, ctx.tau, ctx) ** chain.N
    thp = theta(1, 2 * lam + 2 * spin.ell * ctx.eta, ctx.tau, ctx) ** chain.N
    if chain.twisted:
        return -thm, thp
    return thm, thp


def tq_residual(sign: str, lam_sv: ShiftVector, chain: ChainConfig,
                gens: Mapping[str, complex], window: tuple[int, int] = (5, 2),
                probes: int = 3, seed: int = 0) -> float:
    """Probe distance between T(lam) Q(lam) and the two-term right side."""
    ctx = chain.ctx
    cut = series_cut_for(window)
    lam = lam_sv.value(gens)
    t_op = transfer_matrix(lam, chain)
    q0 = q_operator(sign, lam_sv, chain, gens, cut)
    qp = q_operator(sign, lam_sv + SV_ETA, chain, gens, cut)
    qm = q_operator(sign, lam_sv - SV_ETA, chain, gens, cut)
    a, b = tq_coefficients(lam, chain)
    lhs = t_op.compose(q0.op, gens)
    rhs = qp.op.scaled(a) + qm.op.scaled(b)
    return operator_distance(lhs, rhs, ctx, gens, window=window, probes=probes,
                             seed=seed, check_reach=False)


def q_commutativity_residual(sign_a: str, lam_a: ShiftVector, sign_b: str,
                             lam_b: ShiftVector, chain: ChainConfig,
                             gens: Mapping[str, complex],
                             window: tuple[int, int] = (4, 2),
                             probes: int = 3, seed: int = 0) -> float:
    """Probe distance between the two composition orders of {Q, Q} or {Q, T}."""
    ctx = chain.ctx
    cut = series_cut_for(window)

    def build(sign, lam_sv):
        if sign == "T":
            return transfer_matrix(lam_sv.value(gens), chain)
        return q_operator(sign, lam_sv, chain, gens, cut).op

    a = build(sign_a, lam_a)
    b = build(sign_b, lam_b)
    ab = a.compose(b, gens)
    ba = b.compose(a, gens)
    return operator_distance(ab, ba, ctx, gens, window=window, probes=probes,
                             seed=seed, check_reach=False)


# ---------------------------------------------------------------------------
# Special values and the factorized integral of motion
# ---------------------------------------------------------------------------

def q_special_value_residual(sign: str, chain: ChainConfig,
                             gens: Mapping[str, complex],
                             window: tuple[int, int] = (5, 2),
                             probes: int = 3, seed: int = 0) -> float:
    """Distance of Q^+(-l eta) to the scaled identity (resp. Q^-(l eta) to
    the scaled cyclic shift)."""
    ctx, spin, N = chain.ctx, chain.spin, chain.N
    lam_sv = (-1 if sign == "+" else 1) * spin.leta_sv
    cut = series_cut_for(window)
    q = q_operator(sign, lam_sv, chain, gens, cut)
    scale = cmath.exp(-N * log_egamma(-4 * spin.ell * ctx.eta, ctx, guard=0.0))
    if sign == "+":
        ref = MultiDiffOp.identity(N).scaled(scale)
    else:
        half = N - 1 if chain.twisted else None
        ref = MultiDiffOp.cyclic(N, half_shift_site=half).scaled(scale)
    return operator_distance(q.op, ref, ctx, gens, window=window, probes=probes,
                             seed=seed, check_reach=False)


def q_zero_residual(sign: str, m: int, chain: ChainConfig,
                    gens: Mapping[str, complex],
                    window: tuple[int, int] = (5, 2), seed: int = 0) -> float:
    """Max interior coefficient of Q^{sign}(+-l eta -+ m eta) relative to
    the same operator without its vanishing scalar normalization."""
    import random as _random

    ctx, spin, N = chain.ctx, chain.spin, chain.N
    s = 1 if sign == "+" else -1
    lam_sv = s * spin.leta_sv - s * m * SV_ETA
    cut = series_cut_for(window)
    q = q_operator(sign, lam_sv, chain, gens, cut)
    rng = _random.Random(seed)
    W, _ = window
    worst = 0.0
    for _ in range(3):
        from .operators import _probe_comb, _probe_gens
        gp = dict(gens)
        gp.update(_probe_gens(N, rng))
        f = _probe_comb(N, W, rng, 4)
        out_n = q.op.apply(f, gp)
        out_u = q.unnormalized.apply(f, gp)
        scale = out_u.max_abs()
        if scale > 0:
            worst = max(worst, out_n.max_abs() / scale)
    return worst


def a_operator(chain: ChainConfig, gens: Mapping[str, complex],
               series_cut: int | None = None) -> MultiDiffOp:
    """A = (prod_i varphi_l(z_i, z_{i+1})) prod_j w_l^{(j)}.

    Half-integer spins give the exact finite intertwiners; otherwise the
    per-site series operators are cut at series_cut.  Each composite
    coefficient is one exponential of the summed logs, so the large
    varphi and intertwiner factors cancel before overflow.
    """
    from .sklyanin import log_varphi, w_ell_log_terms

    N, ctx, spin = chain.N, chain.ctx, chain.spin
    form = "finite" if spin.finite_dim_flag else "series"
    if form == "series" and series_cut is None:
        raise ValueError("generic spin requires series_cut")
    log_terms = w_ell_log_terms(spin, ctx, form, series_cut)
    terms = []
    for combo in _combos(len(log_terms), N):
        def coeff(zvec, combo=combo):
            lg = 0.0 + 0.0j
            sign = 1.0
            for i in range(N):
                lg += log_varphi(zvec[i], zvec[(i + 1) % N], spin, ctx)
            for j, idx in enumerate(combo):
                _, logfn, sgn = log_terms[idx]
                lg += logfn(zvec[j])
                sign *= sgn
            return sign * safe_exp(lg)

        shifts = tuple(log_terms[idx][0] for idx in combo)
        terms.append(TermN(shifts, coeff, tuple(range(N)), f"A{combo}"))
    return MultiDiffOp(N, tuple(terms),
                       truncated=not spin.finite_dim_flag)


def _combos(n_choices: int, n_slots: int):
    if n_slots == 0:
        yield ()
        return
    for head in range(n_choices):
        for tail in _combos(n_choices, n_slots - 1):
            yield (head,) + tail


def wronskian_pair(lam_sv: ShiftVector, chain: ChainConfig,
                   gens: Mapping[str, complex], series_cut: int):
    """W(lam) = Q^+(lam+eta) Q^-(lam) - Q^+(lam) Q^-(lam+eta)."""
    qpp = q_operator("+", lam_sv + SV_ETA, chain, gens, series_cut)
    qm0 = q_operator("-", lam_sv, chain, gens, series_cut)
    qp0 = q_operator("+", lam_sv, chain, gens, series_cut)
    qmp = q_operator("-", lam_sv + SV_ETA, chain, gens, series_cut)
    w1 = qpp.op.compose(qm0.op, gens)
    w2 = qp0.op.compose(qmp.op, gens)
    return w1 - w2


def wronskian_residual(lam_sv: ShiftVector, chain: ChainConfig,
                       gens: Mapping[str, complex],
                       window: tuple[int, int] = (2, 1),
                       probes: int = 2, seed: int = 0) -> float:
    """Residual of theta1^N(2lam-2l eta) W(lam) = theta1^N(2lam+2l eta) W(lam-eta)."""
    ctx, spin, N = chain.ctx, chain.spin, chain.N
    cut = series_cut_for(window)
    lam = lam_sv.value(gens)
    w0 = wronskian_pair(lam_sv, chain, gens, cut)
    wm = wronskian_pair(lam_sv - SV_ETA, chain, gens, cut)
    thm = theta(1, 2 * lam - 2 * spin.ell * ctx.eta, ctx.tau, ctx) ** N
    thp = theta(1, 2 * lam + 2 * spin.ell * ctx.eta, ctx.tau, ctx) ** N
    return operator_distance(w0.scaled(thm), wm.scaled(thp), ctx, gens,
                             window=window, probes=probes, seed=seed,
                             check_reach=False)


# ---------------------------------------------------------------------------
# The one-site chain in explicit form
# ---------------------------------------------------------------------------

def n1_q_display(lam_sv: ShiftVector, spin: SpinParams, ctx: ModuliContext,
                 gens: Mapping[str, complex], series_cut: int) -> DiffOp:
    """One-site Q in the explicitly renormalized 6W5 form (finite for
    non-negative integer spin)."""
    eta = ctx.eta
    lam = lam_sv.value(gens)
    tle = 2 * spin.ell * eta
    if spin.finite_dim_flag and spin.two_ell_int % 2 == 0:
        series_cut = min(series_cut, spin.two_ell_int // 2)

    def log_pref(z):
        return (log_egamma(2 * lam, ctx) + log_egamma(2 * z, ctx)
                + log_egamma(2 * z + 2 * lam, ctx)
                - log_egamma(2 * lam - tle, ctx) - log_egamma(2 * z - tle, ctx)
                - log_egamma(2 * z + 2 * lam + tle, ctx))

    terms = []
    for k in range(series_cut + 1):
        def coeff(z, k=k):
            a1 = -2 * z - 2 * lam - tle
            uppers = (-2 * lam - tle, -2 * z - tle, -tle)
            return cmath.exp(log_pref(z) + _log_vwp_term(k, a1, uppers, ctx))

        terms.append(Term1(lam_sv + spin.leta_sv - 2 * k * SV_ETA, coeff, f"q1[{k}]"))
    return DiffOp(tuple(terms), truncated=not spin.finite_dim_flag)


def n1_q_explicit(lam_sv: ShiftVector, spin: SpinParams, ctx: ModuliContext,
                  gens: Mapping[str, complex]) -> DiffOp:
    """The (l+1)-term one-site Q for integer spin, with closed coefficients.

    A_k carries the elliptic binomial and two one-sided theta products; the
    k = 0 and k = l edge terms drop one product each.
    """
    if not (spin.finite_dim_flag and spin.two_ell_int % 2 == 0):
        raise SpinNotInteger(f"explicit one-site form needs l in Z+, got {spin.ell}")
    ell = spin.two_ell_int // 2
    eta, tau = ctx.eta, ctx.tau
    lam = lam_sv.value(gens)
    pref = ell_factorial(ell, ctx) / ell_factorial(2 * ell, ctx)
    terms = []
    for k in range(ell + 1):
        binom = ell_binomial(ell, k, ctx)

        def coeff(z, k=k, binom=binom):
            val = (-1) ** k * pref * binom
            lg = 0.0 + 0.0j
            for j in range(ell - k):
                lg += log_theta(1, 2 * z + 2 * (ell - j) * eta, tau, ctx)
                lg += log_theta(1, 2 * lam + 2 * (ell - j) * eta, tau, ctx)
                lg -= log_theta(1, 2 * z + 2 * lam + 2 * (k - j) * eta, tau, ctx)
            for j in range(k):
                lg += log_theta(1, 2 * z - 2 * (ell - j) * eta, tau, ctx)
                lg += log_theta(1, 2 * lam - 2 * (ell - j) * eta, tau, ctx)
                lg -= log_theta(1, 2 * z + 2 * lam + 2 * (k + j - ell) * eta, tau, ctx)
            return val * cmath.exp(lg)

        shift = lam_sv + ShiftVector.unit("eta", 2 * k - ell)
        terms.append(Term1(shift, coeff, f"A[{k}]"))
    return DiffOp(tuple(terms))


# ---------------------------------------------------------------------------
# The local Bailey-symmetry decomposition of the pre-Q product kernel
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LocalFFactor:
    """Per-n delta supports and coefficients of the two-vacuum pairing."""

    supports: tuple        # exact ShiftVectors in the xi' variable
    coeffs: tuple          # complex values
    alphas: tuple          # ((alpha1, (alpha4..alpha10)), ...) per n


def w10_9_alphas(n: int, zeta: complex, xi: complex, zetap: complex,
                 lam: complex, lamp: complex, spin: SpinParams,
                 ctx: ModuliContext):
    """The balanced terminating parameter set of the local 10W9."""
    eta = ctx.eta
    le = spin.ell * eta
    two = 2 * eta

    def alpha(expr):
        return -expr / two

    a1 = alpha(2 * zeta + 2 * lam + 2 * le)
    a4 = alpha(2 * lam + 2 * le)
    a5 = alpha(zeta + zetap + lam - lamp - eta)
    a6 = alpha(zeta - zetap + lam - lamp - eta)
    a7 = alpha(zeta + xi + 2 * le)
    a8 = alpha(zeta - xi + 2 * le)
    xip = zeta + lam + lamp - eta - 2 * n * eta
    a9 = alpha(zeta + xip + lam + lamp - eta)
    a10 = alpha(zeta - xip + lam + lamp - eta)
    return a1, (a4, a5, a6, a7, a8, a9, a10)


def local_f_factor(n_max: int, zeta_sv: ShiftVector, xi_sv: ShiftVector,
                   zetap_sv: ShiftVector, lam_sv: ShiftVector,
                   lamp_sv: ShiftVector, spin: SpinParams, ctx: ModuliContext,
                   gens: Mapping[str, complex]) -> LocalFFactor:
    """Assembled local pairing factor as a comb in xi'.

    Folding the gamma shift laws through the finite k-sum resums the
    pairing of the two vacuum combs into a terminating balanced 10W9:

        F(n) = res_0(X_L) * X_R(zeta + lam_+; zeta', xi'_n, lam')
                          * 10W9(alpha(n))

    at the delta supports xi'_n = zeta + lam + lam' - eta - 2n eta.  The
    lam <-> lam' Bailey symmetry lives in the 10W9 factor together with
    the omega factors of X_R and res_0.
    """
    eta = ctx.eta
    zeta = zeta_sv.value(gens)
    xi = xi_sv.value(gens)
    zetap = zetap_sv.value(gens)
    lam = lam_sv.value(gens)
    lamp = lamp_sv.value(gens)
    lp = lam + spin.ell * eta

    from .special import log_gamma_residue
    z0 = zeta + lp
    lg_res0 = log_gamma_residue(0, ctx) + log_x_left(
        z0, zeta, xi, lam, spin, ctx, drop_factor=True)

    supports = []
    coeffs = []
    alphas = []
    for n in range(n_max + 1):
        xip_sv = zeta_sv + lam_sv + lamp_sv - SV_ETA - 2 * n * SV_ETA
        xip = zeta + lam + lamp - eta - 2 * n * eta
        lg = lg_res0 + log_x_right(z0, zetap, xip, lamp, spin, ctx)
        a1, rest = w10_9_alphas(n, zeta, xi, zetap, lam, lamp, spin, ctx)
        series = w10_9(a1, rest, ctx, termination=n)
        supports.append(xip_sv)
        coeffs.append(cmath.exp(lg) * series)
        alphas.append((a1, rest))
    return LocalFFactor(tuple(supports), tuple(coeffs), tuple(alphas))


def local_f_symmetric_core(n_max: int, zeta_sv: ShiftVector, xi_sv: ShiftVector,
                           zetap_sv: ShiftVector, lam_sv: ShiftVector,
                           lamp_sv: ShiftVector, spin: SpinParams,
                           ctx: ModuliContext, gens: Mapping[str, complex]):
    """Per-n core values that must be lam <-> lam' symmetric.

    Strips the g-ratio (which cancels around a closed chain) and the two
    omega factors from the assembled F(n).
    """
    eta = ctx.eta
    zeta = zeta_sv.value(gens)
    xi = xi_sv.value(gens)
    zetap = zetap_sv.value(gens)
    lam = lam_sv.value(gens)
    lamp = lamp_sv.value(gens)
    ff = local_f_factor(n_max, zeta_sv, xi_sv, zetap_sv, lam_sv, lamp_sv,
                        spin, ctx, gens)
    out = []
    for n in range(n_max + 1):
        xip = zeta + lam + lamp - eta - 2 * n * eta
        lg = 0.0 + 0.0j
        # remove omega(lam, zeta-xi) omega(lam', zeta'-xi')
        lg -= log_omega(lam, zeta - xi, spin, ctx)
        lg -= log_omega(lamp, zetap - xip, spin, ctx)
        # remove g_{xi xi'}/g_{zeta zeta'} at argument lam - lam'
        lg -= (log_egamma(xi + xip + lam - lamp + eta, ctx)
               + log_egamma(xi - xip + lam - lamp + eta, ctx))
        lg += (log_egamma(zeta + zetap + lam - lamp + eta, ctx)
               + log_egamma(zeta - zetap + lam - lamp + eta, ctx))
        out.append(ff.coeffs[n] * cmath.exp(lg))
    return out


def local_f_convolution(n_max: int, zeta_sv: ShiftVector, xi_sv: ShiftVector,
                        zetap_sv: ShiftVector, lam_sv: ShiftVector,
                        lamp_sv: ShiftVector, spin: SpinParams,
                        ctx: ModuliContext, gens: Mapping[str, complex],
                        window: int | None = None):
    """Direct pairing of the left and right vacuum combs per n (the oracle
    side of the decomposition check)."""
    if window is None:
        window = n_max + 2
    vals = []
    xl = vacuum_comb("L", "+", zeta_sv, xi_sv, lam_sv, spin, ctx, gens, window)
    for n in range(n_max + 1):
        xip_sv = zeta_sv + lam_sv + lamp_sv - SV_ETA - 2 * n * SV_ETA
        xr = vacuum_comb("R", "+", zetap_sv, xip_sv, lamp_sv, spin, ctx,
                         gens, window)
        vals.append(xl.comb.pair(xr.comb))
    return vals


def chain_symmetry_residual(mode: str, nvec: Sequence[int], chain: ChainConfig,
                            lam_sv: ShiftVector, lamp_sv: ShiftVector,
                            gens: Mapping[str, complex],
                            window: int | None = None) -> float:
    """Symmetry residual of the assembled N-site kernel product.

    mode "q1": lam <-> lam' invariance of prod_i (X_L^+(lam) . X_R^+(lam'))
    over the delta-constrained edge parameters; mode "q1a": simultaneous
    per-site (zeta_i <-> zeta_{i+1}, zeta'_i <-> zeta'_{i+1},
    lam -> -lam', lam' -> -lam) invariance of the mixed-sign product.  The
    constrained edges are fixed once from (lam, lam', nvec) and reused on
    the swapped side.
    """
    N, ctx, spin = chain.N, chain.ctx, chain.spin
    if len(nvec) != N:
        raise ConstraintInfeasible(f"need {N} support indices, got {len(nvec)}")
    if window is None:
        window = max(nvec) + 3
    window += 2
    edges = [chain.edge_sv(i) for i in range(1, N + 2)]       # zeta_1..zeta_{N+1}
    if mode == "q1":
        # zeta'_{j} = zeta_{j-1} + lam + lam' - eta - 2 n_{j-1} eta, with
        # zeta'_1 = zeta'_{N+1} closing the cycle through site N
        def zp_edge(j):
            jj = N if j == 1 else j - 1
            return edges[jj - 1] + lam_sv + lamp_sv - SV_ETA - 2 * nvec[jj - 1] * SV_ETA

        zp_edges = [zp_edge(j) for j in range(1, N + 2)]

        def product(lam_a, lam_b):
            val = 1.0 + 0.0j
            for i in range(1, N + 1):
                xl = vacuum_comb("L", "+", edges[i - 1], edges[i], lam_a,
                                 spin, ctx, gens, window)
                xr = vacuum_comb("R", "+", zp_edges[i - 1], zp_edges[i], lam_b,
                                 spin, ctx, gens, window)
                val *= xl.comb.pair(xr.comb)
            return val

        base = product(lam_sv, lamp_sv)
        swapped = product(lamp_sv, lam_sv)
    elif mode == "q1a":
        # zeta'_i = zeta_i + lam - lam' - eta - 2 n_i eta
        zp_edges = [edges[i] + lam_sv - lamp_sv - SV_ETA - 2 * nvec[i % N] * SV_ETA
                    for i in range(N + 1)]

        def factor(i, lam_a, lam_b, swap):
            za, zb = edges[i - 1], edges[i]
            zpa, zpb = zp_edges[i - 1], zp_edges[i]
            if swap:
                za, zb = zb, za
                zpa, zpb = zpb, zpa
            xl = vacuum_comb("L", "+", za, zb, lam_a, spin, ctx, gens, window)
            xr = vacuum_comb("R", "-", zpa, zpb, lam_b, spin, ctx, gens, window)
            return xl.comb.pair(xr.comb)

        base = 1.0 + 0.0j
        swapped = 1.0 + 0.0j
        for i in range(1, N + 1):
            base *= factor(i, lam_sv, lamp_sv, False)
            swapped *= factor(i, -1 * lamp_sv, -1 * lam_sv, True)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    scale = max(abs(base), abs(swapped))
    if scale == 0:
        raise ConstraintInfeasible("kernel product vanished identically")
    return abs(base - swapped) / scale
