"""Transfer matrices, local vacuum vectors, global vacua and pre-Q operators.

Edge parameters, spectral parameters and comb supports are exact
ShiftVectors over registered generators; their numeric values come from a
generator assignment so that special-point evaluations keep exact lattice
bookkeeping.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .combs import Comb, MultiComb, comb_residual
from .context import ModuliContext
from .errors import ConfigInvalid, GenericityViolation, SingularGauge
from .operators import DiffOp, MultiDiffOp, Term1, TermN
from .shifts import SV_ETA, ShiftVector, sv
from .sklyanin import SpinParams, l_operator, m_matrix_display, spin_gens
from .special import (log_egamma, log_gamma_residue, log_phi_ell,
                      log_theta, safe_exp, theta, theta_bar)

PI = math.pi


# ---------------------------------------------------------------------------
# Chain configuration and edge vectors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ChainConfig:
    """Homogeneous N-site chain with periodic or sigma1-twisted closure."""

    N: int
    spin: SpinParams
    ctx: ModuliContext
    boundary: str = "periodic"

    def __post_init__(self):
        if self.N < 1:
            raise ConfigInvalid(f"chain length must be >= 1, got {self.N}")
        if self.boundary not in ("periodic", "twisted_sigma1"):
            raise ConfigInvalid(f"unknown boundary {self.boundary!r}")

    @property
    def twisted(self) -> bool:
        return self.boundary == "twisted_sigma1"

    def edge_sv(self, i: int) -> ShiftVector:
        """zeta_i for i = 1..N+1 with the boundary closure built in."""
        if i <= self.N:
            return sv(f"zeta{i}")
        # closure: zeta_{N+1} = zeta_1 (+ 1/2 when twisted)
        return sv("zeta1") + (sv("one", "1/2") if self.twisted else ShiftVector())

    def edge_gens(self, gens: Mapping[str, complex], rng) -> dict:
        out = spin_gens(self.spin, self.ctx)
        out.update(gens)
        for i in range(1, self.N + 1):
            key = f"zeta{i}"
            if key not in out:
                out[key] = complex(rng.uniform(-0.4, 0.4), rng.uniform(-0.15, 0.15))
        return out


@dataclass(frozen=True)
class EdgeVector:
    """Elliptic parametrization of the 2-dim auxiliary space."""

    zeta: complex
    ctx: ModuliContext

    def ket(self) -> np.ndarray:
        return np.array([theta_bar(4, self.zeta, self.ctx),
                         theta_bar(3, self.zeta, self.ctx)])

    def bra(self) -> np.ndarray:
        return self.ket()

    def perp(self) -> np.ndarray:
        return np.array([theta_bar(3, self.zeta, self.ctx),
                         -theta_bar(4, self.zeta, self.ctx)])


def edge_pairing(xi: complex, zeta: complex, ctx: ModuliContext) -> complex:
    """<xi | zeta>_perp = 2 theta1(xi+zeta) theta1(xi-zeta)."""
    return 2 * theta(1, xi + zeta, ctx.tau, ctx) * theta(1, xi - zeta, ctx.tau, ctx)


# ---------------------------------------------------------------------------
# The K operator and the meromorphic vacuum solutions
# ---------------------------------------------------------------------------

def rho_coeff(z: complex, zeta: complex, xi: complex, lam: complex,
              spin: SpinParams, ctx: ModuliContext) -> complex:
    """rho(z) = prod_e theta1(z + e*zeta - lam_+) theta1(z + e*xi + lam_-) / theta1(2z)."""
    lp = lam + spin.ell * ctx.eta
    lm = lam - spin.ell * ctx.eta
    lg = -log_theta(1, 2 * z, ctx.tau, ctx)
    for e in (1, -1):
        lg += log_theta(1, z + e * zeta - lp, ctx.tau, ctx)
        lg += log_theta(1, z + e * xi + lm, ctx.tau, ctx)
    return cmath.exp(lg)


def k_operator(zeta: complex, xi: complex, lam: complex, spin: SpinParams,
               ctx: ModuliContext) -> DiffOp:
    """K(zeta, xi) = rho(z) e^{eta d} + rho(-z) e^{-eta d}."""
    def c_up(z):
        return rho_coeff(z, zeta, xi, lam, spin, ctx)

    def c_dn(z):
        return rho_coeff(-z, zeta, xi, lam, spin, ctx)

    return DiffOp((Term1(SV_ETA, c_up, "K+"), Term1(-1 * SV_ETA, c_dn, "K-")))


def k_from_l(zeta: complex, xi: complex, lam: complex, spin: SpinParams,
             ctx: ModuliContext) -> DiffOp:
    """K = <zeta| L(lam) |xi>_perp assembled from the L-operator."""
    lop = l_operator(lam, spin, ctx)
    bra = EdgeVector(zeta, ctx).bra()
    perp = EdgeVector(xi, ctx).perp()
    acc = None
    for i in range(2):
        for j in range(2):
            piece = lop[i, j].scaled(bra[i] * perp[j])
            acc = piece if acc is None else acc + piece
    return acc


def log_omega(lam: complex, zeta: complex, spin: SpinParams,
              ctx: ModuliContext) -> complex:
    """omega(lam, zeta); the thetas carry modular parameter 2*eta."""
    te = 2 * ctx.eta
    return (log_theta(1, 2 * lam - 2 * spin.ell * ctx.eta, te, ctx)
            - log_theta(1, 2 * lam + zeta, te, ctx)
            - 1j * PI * zeta * zeta / te - 4j * PI * spin.ell * lam)


def omega(lam: complex, zeta: complex, spin: SpinParams, ctx: ModuliContext) -> complex:
    return cmath.exp(log_omega(lam, zeta, spin, ctx))


def log_x_right(z: complex, zeta: complex, xi: complex, lam: complex,
                spin: SpinParams, ctx: ModuliContext, *,
                guard: float | None = None) -> complex:
    lp = lam + spin.ell * ctx.eta
    lm = lam - spin.ell * ctx.eta
    lg = -4j * PI * spin.ell * z + log_omega(lam, zeta - xi, spin, ctx)
    for e in (1, -1):
        lg += log_egamma(z + e * zeta + lp + ctx.eta, ctx, guard=guard)
        lg += log_egamma(z + e * xi - lm + ctx.eta, ctx, guard=guard)
        lg -= log_egamma(z + e * zeta - lp + ctx.eta, ctx, guard=guard)
        lg -= log_egamma(z + e * xi + lm + ctx.eta, ctx, guard=guard)
    return lg


def log_x_left(z: complex, zeta: complex, xi: complex, lam: complex,
               spin: SpinParams, ctx: ModuliContext, *,
               guard: float | None = None, drop_factor: bool = False) -> complex:
    """log X_L; with drop_factor the residue-carrying factor
    Gamma(z - zeta - lam_+) is omitted (used for the residue combs)."""
    lp = lam + spin.ell * ctx.eta
    lm = lam - spin.ell * ctx.eta
    lg = (4j * PI * (spin.ell + 1) * z + log_phi_ell(2 * lam, spin.ell, ctx)
          + log_theta(1, 2 * z, ctx.tau, ctx))
    lg += log_egamma(z + zeta - lp, ctx, guard=guard)
    if not drop_factor:
        lg += log_egamma(z - zeta - lp, ctx, guard=guard)
    lg += log_egamma(z + xi + lm, ctx, guard=guard)
    lg += log_egamma(z - xi + lm, ctx, guard=guard)
    lg -= log_egamma(z + zeta + lp + 2 * ctx.eta, ctx, guard=guard)
    lg -= log_egamma(z - zeta + lp + 2 * ctx.eta, ctx, guard=guard)
    lg -= log_egamma(z + xi - lm + 2 * ctx.eta, ctx, guard=guard)
    lg -= log_egamma(z - xi - lm + 2 * ctx.eta, ctx, guard=guard)
    return lg


def x_meromorphic(side: str, z: complex, zeta: complex, xi: complex,
                  lam: complex, spin: SpinParams, ctx: ModuliContext, *,
                  guard: float | None = None) -> complex:
    """Meromorphic right/left vacuum solution at a point."""
    if side == "R":
        return cmath.exp(log_x_right(z, zeta, xi, lam, spin, ctx, guard=guard))
    if side == "L":
        return cmath.exp(log_x_left(z, zeta, xi, lam, spin, ctx, guard=guard))
    raise ValueError(f"side must be 'R' or 'L', got {side!r}")


# ---------------------------------------------------------------------------
# Half-infinite vacuum combs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VacuumComb:
    side: str               # "R" | "L"
    sign: str               # "+" | "-"
    comb: Comb
    zeta: ShiftVector
    xi: ShiftVector
    lam: ShiftVector


def _swap_args(sign: str, zeta_sv: ShiftVector, xi_sv: ShiftVector,
               lam_sv: ShiftVector):
    if sign == "+":
        return zeta_sv, xi_sv, lam_sv
    if sign == "-":
        return xi_sv, zeta_sv, -1 * lam_sv
    raise ValueError(f"sign must be '+' or '-', got {sign!r}")


def xr_comb(sign: str, zeta_sv: ShiftVector, xi_sv: ShiftVector,
            lam_sv: ShiftVector, spin: SpinParams, ctx: ModuliContext,
            gens: Mapping[str, complex], window: int) -> VacuumComb:
    """Right vacuum comb, finite in one lattice direction.

    Support points xi - lam_- - eta + 2k*eta, k = 1..window (sign +); the
    sign - comb is the exact parameter swap (zeta <-> xi, lam -> -lam).
    """
    z_sv, x_sv, l_sv = _swap_args(sign, zeta_sv, xi_sv, lam_sv)
    zeta = z_sv.value(gens)
    xi = x_sv.value(gens)
    lam = l_sv.value(gens)
    leta = spin.leta_sv
    base = x_sv - (l_sv - leta) - SV_ETA     # xi - lam_- - eta
    coeffs = {}
    for k in range(1, window + 1):
        z = xi - (lam - spin.ell * ctx.eta) - ctx.eta + 2 * k * ctx.eta
        try:
            coeffs[-k] = cmath.exp(log_x_right(z, zeta, xi, lam, spin, ctx))
        except Exception as exc:
            raise GenericityViolation(
                f"right vacuum coefficient at k={k}: {exc}") from exc
    return VacuumComb("R", sign, Comb(base, coeffs, open_lo=True),
                      z_sv, x_sv, l_sv)


def xl_comb(sign: str, lam_sv: ShiftVector, zeta_sv: ShiftVector,
            xi_sv: ShiftVector, spin: SpinParams, ctx: ModuliContext,
            gens: Mapping[str, complex], window: int) -> VacuumComb:
    """Left vacuum comb of residues at zeta + lam_+ - 2k*eta, k = 0..window.

    Coefficients are the analytic residues: res Gamma at -2k*eta times the
    regular factor of X_L; no epsilon limit is taken.
    """
    z_sv, x_sv, l_sv = _swap_args(sign, zeta_sv, xi_sv, lam_sv)
    zeta = z_sv.value(gens)
    xi = x_sv.value(gens)
    lam = l_sv.value(gens)
    base = z_sv + l_sv + spin.leta_sv        # zeta + lam_+
    lp = lam + spin.ell * ctx.eta
    coeffs = {}
    for k in range(0, window + 1):
        z = zeta + lp - 2 * k * ctx.eta
        try:
            lg = log_x_left(z, zeta, xi, lam, spin, ctx, drop_factor=True)
            coeffs[k] = cmath.exp(log_gamma_residue(k, ctx) + lg)
        except Exception as exc:
            raise GenericityViolation(
                f"left vacuum residue at k={k}: {exc}") from exc
    return VacuumComb("L", sign, Comb(base, coeffs, open_hi=True),
                      z_sv, x_sv, l_sv)


def vacuum_comb(side: str, sign: str, zeta_sv: ShiftVector, xi_sv: ShiftVector,
                lam_sv: ShiftVector, spin: SpinParams, ctx: ModuliContext,
                gens: Mapping[str, complex], window: int) -> VacuumComb:
    if side == "R":
        return xr_comb(sign, zeta_sv, xi_sv, lam_sv, spin, ctx, gens, window)
    if side == "L":
        return xl_comb(sign, lam_sv, zeta_sv, xi_sv, spin, ctx, gens, window)
    raise ValueError(f"side must be 'R' or 'L', got {side!r}")


def annihilation_residual(op: DiffOp, comb: Comb, gens: Mapping[str, complex],
                          from_right: bool = False) -> float:
    """Max |(op comb)(p)| relative to the neighborhood term scale.

    The natural scale of a cancellation at a point is the largest single
    term contribution within one lattice step (the edge contributions can
    vanish by themselves through a theta zero).
    """
    out, scales = (op.apply_right(comb, gens, with_scale=True) if from_right
                   else op.apply(comb, gens, with_scale=True))
    worst = 0.0
    for n, v in out.coeffs.items():
        s = max(scales.get(n - 1, 0.0), scales.get(n, 0.0), scales.get(n + 1, 0.0))
        if s > 0.0:
            worst = max(worst, abs(v) / s)
    return worst


# ---------------------------------------------------------------------------
# Pair propagation through a vertex
# ---------------------------------------------------------------------------

def pair_propagation_residual(relation: str, sign: str, zeta_sv: ShiftVector,
                              xi_sv: ShiftVector, lam_sv: ShiftVector,
                              spin: SpinParams, ctx: ModuliContext,
                              gens: Mapping[str, complex], window: int = 14) -> float:
    """Interior residual of one of the four vertex relations R4/L4/R5/L5.

    With the omega-normalized right vacua the lambda-step relations carry
    the exact per-site constant e^{-+2 pi i (zeta - xi)} (it telescopes to
    one over a periodically closed chain); the left relations are constant
    free.  The residual certifies the relations with those constants
    included.
    """
    gens = dict(gens)
    zeta = zeta_sv.value(gens)
    xi = xi_sv.value(gens)
    lam = lam_sv.value(gens)
    lp = lam + spin.ell * ctx.eta
    lm = lam - spin.ell * ctx.eta
    lop = l_operator(lam, spin, ctx)
    bra_z = EdgeVector(zeta, ctx).bra()
    bra_x = EdgeVector(xi, ctx).bra()
    perp_z = EdgeVector(zeta, ctx).perp()
    perp_x = EdgeVector(xi, ctx).perp()
    t1 = lambda x: theta(1, x, ctx.tau, ctx)
    edge_phase = cmath.exp(-2j * PI * (zeta - xi))

    worst = 0.0
    if relation in ("R4", "R5"):
        xr = xr_comb(sign, zeta_sv, xi_sv, lam_sv, spin, ctx, gens, window).comb
        if relation == "R4":
            shifted = xr_comb(sign, zeta_sv, xi_sv, lam_sv + SV_ETA, spin, ctx,
                              gens, window).comb
            ops = lop.row_covector(bra_z)
            fac = [edge_phase * t1(2 * lm) * bra_x[c] for c in range(2)]
        else:
            shifted = xr_comb(sign, zeta_sv, xi_sv, lam_sv - SV_ETA, spin, ctx,
                              gens, window).comb
            ops = lop.column_vector(perp_x)
            fac = [t1(2 * lp) * perp_z[c] / edge_phase for c in range(2)]
        for c in range(2):
            lhs = ops[c].apply(xr, gens)
            worst = max(worst, comb_residual(lhs, shifted.scaled(fac[c])))
        return worst
    if relation in ("L4", "L5"):
        xl = xl_comb(sign, lam_sv, zeta_sv, xi_sv, spin, ctx, gens, window).comb
        if relation == "L4":
            shifted = xl_comb(sign, lam_sv - SV_ETA, zeta_sv, xi_sv, spin, ctx,
                              gens, window).comb
            ops = lop.row_covector(bra_z)
            fac = [t1(2 * lp) * bra_x[c] for c in range(2)]
        else:
            shifted = xl_comb(sign, lam_sv + SV_ETA, zeta_sv, xi_sv, spin, ctx,
                              gens, window).comb
            ops = lop.column_vector(perp_x)
            fac = [t1(2 * lm) * perp_z[c] for c in range(2)]
        for c in range(2):
            lhs = ops[c].apply_right(xl, gens)
            worst = max(worst, comb_residual(lhs, shifted.scaled(fac[c])))
        return worst
    raise ValueError(f"unknown relation {relation!r}")


# ---------------------------------------------------------------------------
# Transfer matrix
# ---------------------------------------------------------------------------

def _sigma1_insertion(chain: ChainConfig) -> np.ndarray | None:
    if chain.twisted:
        return np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
    return None


def transfer_matrix_direct(lam: complex, chain: ChainConfig) -> MultiDiffOp:
    """T(lam) as the traced product of per-site L-operators."""
    N, ctx = chain.N, chain.ctx
    lop = l_operator(complex(lam), chain.spin, ctx)
    site_ops = [[[lop[i, j].promote(s, N) for j in range(2)] for i in range(2)]
                for s in range(N)]
    gens = spin_gens(chain.spin, ctx)
    # matrix product over sites
    prod = site_ops[0]
    for s in range(1, N):
        nxt = [[None, None], [None, None]]
        for i in range(2):
            for j in range(2):
                acc = None
                for k in range(2):
                    piece = prod[i][k].compose(site_ops[s][k][j], gens)
                    acc = piece if acc is None else acc + piece
                nxt[i][j] = acc
        prod = nxt
    twist = _sigma1_insertion(chain)
    if twist is None:
        return prod[0][0] + prod[1][1]
    # tr[prod * sigma1]
    acc = None
    for i in range(2):
        for j in range(2):
            if twist[j, i] != 0:
                piece = prod[i][j].scaled(twist[j, i])
                acc = piece if acc is None else acc + piece
    return acc


def transfer_matrix(lam: complex, chain: ChainConfig) -> MultiDiffOp:
    """T(lam): the 2^N-term two-site M-matrix trace expansion (periodic) or
    the traced L-product with the sigma1 insertion (twisted).

    In the M form each term carries coefficient
    prod_j M^{j,j+1}_{i_j i_{j+1}}(z_j, z_{j+1}) with all arguments
    unshifted (normal ordering) and per-site shifts (3-2*i_j)*eta.
    """
    if chain.twisted:
        return transfer_matrix_direct(lam, chain)
    N, ctx = chain.N, chain.ctx
    lam = complex(lam)
    mdisp = m_matrix_display(lam, chain.spin, ctx)
    terms = []
    for code in range(2 ** N):
        idx = tuple((code >> s) & 1 for s in range(N))   # 0 -> i=1, 1 -> i=2

        def coeff(zvec, idx=idx):
            val = 1.0 + 0.0j
            for j in range(N):
                m = mdisp(zvec[j], zvec[(j + 1) % N])
                val *= m[idx[j], idx[(j + 1) % N]]
            return val

        shifts = tuple(SV_ETA if idx[s] == 0 else -1 * SV_ETA for s in range(N))
        terms.append(TermN(shifts, coeff, tuple(range(N)), f"T{idx}"))
    return MultiDiffOp(N, tuple(terms))


# ---------------------------------------------------------------------------
# Gauge transformation and triangularity
# ---------------------------------------------------------------------------

def gauge_matrix(zeta: complex, ctx: ModuliContext) -> np.ndarray:
    g = np.array([[theta_bar(4, zeta, ctx), theta_bar(3, zeta, ctx)],
                  [0.0, 1.0]], dtype=complex)
    if abs(g[0, 0]) < 1e-12:
        raise SingularGauge(f"thetabar4({zeta}) ~ 0")
    return g


def gauge_matrix_inv(zeta: complex, ctx: ModuliContext) -> np.ndarray:
    g = gauge_matrix(zeta, ctx)
    det = g[0, 0]
    return np.array([[1.0, -g[0, 1]], [0.0, g[0, 0]]], dtype=complex) / det


def gauged_l_entries(zeta: complex, xi: complex, lam: complex,
                     spin: SpinParams, ctx: ModuliContext):
    """Entries of G(zeta) L(lam) G(xi)^{-1} as one-site operators."""
    lop = l_operator(lam, spin, ctx)
    g = gauge_matrix(zeta, ctx)
    ginv = gauge_matrix_inv(xi, ctx)
    out = [[None, None], [None, None]]
    for i in range(2):
        for j in range(2):
            acc = None
            for a in range(2):
                for b in range(2):
                    c = g[i, a] * ginv[b, j]
                    if c != 0:
                        piece = lop[a, b].scaled(c)
                        acc = piece if acc is None else acc + piece
            out[i][j] = acc
    return out


# ---------------------------------------------------------------------------
# Global vacua and pre-Q operators
# ---------------------------------------------------------------------------

def global_vacuum(side: str, sign: str, lam_sv: ShiftVector, chain: ChainConfig,
                  gens: Mapping[str, complex], window: int) -> MultiComb:
    """Product of local vacua over the chain with the boundary closure."""
    factors = []
    for i in range(1, chain.N + 1):
        vc = vacuum_comb(side, sign, chain.edge_sv(i), chain.edge_sv(i + 1),
                         lam_sv, chain.spin, chain.ctx, gens, window)
        factors.append(vc.comb)
    return MultiComb.from_product(factors)


def _xl_site_coeff(k: int, zeta: complex, xi: complex, lam: complex,
                   spin: SpinParams, ctx: ModuliContext) -> complex:
    lp = lam + spin.ell * ctx.eta
    z = zeta + lp - 2 * k * ctx.eta
    lg = log_x_left(z, zeta, xi, lam, spin, ctx, drop_factor=True)
    return safe_exp(log_gamma_residue(k, ctx) + lg)


def _xr_site_coeff(z: complex, zeta: complex, xi: complex, lam: complex,
                   spin: SpinParams, ctx: ModuliContext) -> complex:
    return safe_exp(log_x_right(z, zeta, xi, lam, spin, ctx))


def pre_q(side: str, sign: str, lam_sv: ShiftVector, chain: ChainConfig,
          gens: Mapping[str, complex], window: int) -> MultiDiffOp:
    """Pre-Q operator whose kernel is the global vacuum.

    Row variables are the edge parameters, column variables the quantum
    ones.  The left operators shift each row variable by lam_+ - 2k*eta
    (residue coefficients); the right ones tie each row variable to the
    previous column (cyclic permutation).  The sign - variants are the
    exact parameter swaps of the sign + ones.  A twisted chain closes the
    edges at zeta_1 + 1/2, which shows up as exact half-period shifts on
    the wrap-around slot.
    """
    N, ctx, spin = chain.N, chain.ctx, chain.spin
    leta = spin.leta_sv
    half_num = 0.5 if chain.twisted else 0.0
    half_sv = sv("one", "1/2") if chain.twisted else ShiftVector()
    lam_eff_sv = lam_sv if sign == "+" else -1 * lam_sv
    lam_eff = lam_eff_sv.value(gens)
    lm_eff = lam_eff - spin.ell * ctx.eta
    if sign not in ("+", "-"):
        raise ValueError(f"sign must be '+' or '-', got {sign!r}")
    terms = []
    if side == "L":
        # site i factor X_L^{sgn}(lam, e_i, e_{i+1}; z_i), e_{N} wraps to
        # e_0 + half; supports z_i = e_i + lam_+ - 2k eta (+) or
        # z_i = e_{i+1} + (-lam)_+ - 2k eta (-)
        for code in _kvecs(N, window + 1):
            def coeff(zvec, kvec=code):
                val = 1.0 + 0.0j
                for i in range(N):
                    e_i = zvec[i]
                    e_n = zvec[(i + 1) % N] + (half_num if i == N - 1 else 0.0)
                    if sign == "+":
                        val *= _xl_site_coeff(kvec[i], e_i, e_n, lam_eff, spin, ctx)
                    else:
                        val *= _xl_site_coeff(kvec[i], e_n, e_i, lam_eff, spin, ctx)
                return val

            if sign == "+":
                shifts = tuple(lam_eff_sv + leta - 2 * k * SV_ETA for k in code)
                perm = tuple(range(N))
            else:
                shifts = tuple(lam_eff_sv + leta - 2 * code[i] * SV_ETA
                               + (half_sv if i == N - 1 else ShiftVector())
                               for i in range(N))
                perm = tuple((i + 1) % N for i in range(N))
            terms.append(TermN(shifts, coeff, perm, f"QL{sign}{code}"))
        return MultiDiffOp(N, tuple(terms), truncated=True)
    if side == "R":
        # site i factor X_R^{sgn}(z_i; e_i, e_{i+1}, lam); support (+):
        # e_{i+1} = z_i + lam_- + eta - 2k_i eta with k_i >= 1 (the k = 0
        # lattice point is the leading truncation zero), support (-):
        # the roles of the edges swap
        for code in _kvecs(N, window + 1):
            kk = tuple(k + 1 for k in code)
            if sign == "+":
                # edge value e_m reconstructed from the site feeding it
                def coeff(zvec, kvec=kk):
                    def edge(m):
                        j = (m - 1) % N
                        val = zvec[j] + lm_eff + ctx.eta - 2 * kvec[j] * ctx.eta
                        if m == 0:
                            val -= half_num
                        return val

                    val = 1.0 + 0.0j
                    for i in range(N):
                        e_i = edge(i)
                        e_n = edge((i + 1) % N) + (half_num if i == N - 1 else 0.0)
                        val *= _xr_site_coeff(zvec[i], e_i, e_n, lam_eff, spin, ctx)
                    return val

                shifts = tuple(lam_eff_sv - leta + SV_ETA
                               - 2 * kk[(m - 1) % N] * SV_ETA
                               - (half_sv if m == 0 else ShiftVector())
                               for m in range(N))
                perm = tuple((m - 1) % N for m in range(N))
            else:
                def coeff(zvec, kvec=kk):
                    def edge(m):
                        mm = m % N
                        # zeta'_m = z_m - (-lam)_+ ... = z_m + lam_- + eta - 2k eta
                        val = zvec[mm] + lm_eff + ctx.eta - 2 * kvec[mm] * ctx.eta
                        if m == N:
                            val += half_num
                        return val

                    val = 1.0 + 0.0j
                    for i in range(N):
                        # X_R^- = X_R^+ with (zeta, xi) swapped, -lam
                        val *= _xr_site_coeff(zvec[i], edge(i + 1), edge(i),
                                              lam_eff, spin, ctx)
                    return val

                shifts = tuple(lam_eff_sv - leta + SV_ETA - 2 * kk[m] * SV_ETA
                               for m in range(N))
                perm = tuple(range(N))
            terms.append(TermN(shifts, coeff, perm, f"QR{sign}{code}"))
        return MultiDiffOp(N, tuple(terms), truncated=True)
    raise ValueError(f"side must be 'L' or 'R', got {side!r}")


def _kvecs(n: int, count: int):
    if n == 0:
        yield ()
        return
    for head in range(count):
        for tail in _kvecs(n - 1, count):
            yield (head,) + tail
