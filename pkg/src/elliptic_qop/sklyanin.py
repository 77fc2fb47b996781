"""Sklyanin algebra generators, elliptic L- and R-matrices, the spin
intertwiner (finite and series forms) and the two-site M-matrix.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import numpy as np

from .context import ModuliContext
from .errors import FiniteFormUnavailable, PoleProximity
from .operators import DiffOp, Term1
from .series import ell_binomial
from .shifts import SV_ETA, ShiftVector, sv
from .special import (gamma_r_const, log_egamma, log_phi_ell, log_theta,
                      phi_ell, theta, theta_bar)

PI = math.pi
HALF_INT_TOL = 1e-9


@dataclass(frozen=True)
class SpinParams:
    """Representation spin.  Half-integer spins get exact eta-multiple
    bookkeeping so special-point lattice matches stay exact."""

    ell: complex

    @property
    def finite_dim_flag(self) -> bool:
        n2 = round((2 * self.ell).real)
        return n2 >= 0 and abs(2 * self.ell - n2) < HALF_INT_TOL

    @property
    def two_ell_int(self) -> int:
        if not self.finite_dim_flag:
            raise FiniteFormUnavailable(f"spin {self.ell} is not in Z/2")
        return round((2 * self.ell).real)

    @property
    def leta_sv(self) -> ShiftVector:
        """ell*eta as an exact shift vector."""
        n2 = round((2 * self.ell).real)
        if abs(2 * self.ell - n2) < HALF_INT_TOL:
            return ShiftVector.unit("eta", Fraction(n2, 2))
        return sv("leta")

    def reflected(self) -> "SpinParams":
        """Spin -(ell+1), the intertwining partner."""
        return SpinParams(-self.ell - 1)

    def patch_gens(self, gens: Mapping[str, complex],
                   eta: complex) -> dict:
        out = dict(gens)
        n2 = round((2 * self.ell).real)
        if not abs(2 * self.ell - n2) < HALF_INT_TOL:
            out["leta"] = self.ell * eta
        return out


def spin_gens(spin: SpinParams, ctx: ModuliContext) -> dict:
    return spin.patch_gens(ctx.gens, ctx.eta)


# ---------------------------------------------------------------------------
# Generators and L-operator
# ---------------------------------------------------------------------------

def sklyanin_generator(a: int, spin: SpinParams, ctx: ModuliContext) -> DiffOp:
    """s_a = theta_{a+1}(2z-2l*eta)/theta1(2z) e^{eta d}
           - theta_{a+1}(-2z-2l*eta)/theta1(2z) e^{-eta d}."""
    if a not in (0, 1, 2, 3):
        raise ValueError(f"generator index must be 0..3, got {a}")
    tau = ctx.tau
    tle = 2 * spin.ell * ctx.eta

    def c_plus(z, a1=a + 1):
        return cmath.exp(log_theta(a1, 2 * z - tle, tau, ctx)
                         - log_theta(1, 2 * z, tau, ctx))

    def c_minus(z, a1=a + 1):
        return -cmath.exp(log_theta(a1, -2 * z - tle, tau, ctx)
                          - log_theta(1, 2 * z, tau, ctx))

    return DiffOp((Term1(SV_ETA, c_plus, f"s{a}+"),
                   Term1(-1 * SV_ETA, c_minus, f"s{a}-")))


def standard_generator_scale(a: int, ctx: ModuliContext) -> complex:
    """Constant relating s_a to Sklyanin's standard generators:
    S_a = i^{delta_a2} theta_{a+1}(eta) s_a."""
    return (1j if a == 2 else 1.0) * theta(a + 1, ctx.eta, ctx.tau, ctx)


@dataclass(frozen=True)
class LOperator:
    """2x2 operator-valued matrix acting on one site."""

    entries: tuple            # ((L11, L12), (L21, L22))
    lam: complex
    spin: SpinParams

    def __getitem__(self, idx) -> DiffOp:
        i, j = idx
        return self.entries[i][j]

    def row_covector(self, vec) -> tuple:
        """<v| L: tuple of column-indexed operators."""
        return tuple(self.entries[0][j].scaled(vec[0]) + self.entries[1][j].scaled(vec[1])
                     for j in range(2))

    def column_vector(self, vec) -> tuple:
        """L |v>: tuple of row-indexed operators."""
        return tuple(self.entries[i][0].scaled(vec[0]) + self.entries[i][1].scaled(vec[1])
                     for i in range(2))


def l_operator(lam: complex, spin: SpinParams, ctx: ModuliContext) -> LOperator:
    """Elliptic L-operator assembled from the four generators."""
    lam = complex(lam)
    t = [theta(a, 2 * lam, ctx.tau, ctx) for a in (1, 2, 3, 4)]
    s = [sklyanin_generator(a, spin, ctx) for a in range(4)]
    l11 = (s[0].scaled(t[0]) + s[3].scaled(t[3])).scaled(0.5)
    l12 = (s[1].scaled(t[1]) + s[2].scaled(t[2])).scaled(0.5)
    l21 = (s[1].scaled(t[1]) - s[2].scaled(t[2])).scaled(0.5)
    l22 = (s[0].scaled(t[0]) - s[3].scaled(t[3])).scaled(0.5)
    return LOperator(((l11, l12), (l21, l22)), lam, spin)


def v_matrix(lam: complex, z: complex, ctx: ModuliContext) -> np.ndarray:
    return np.array([[theta_bar(4, z + lam, ctx), theta_bar(3, z + lam, ctx)],
                     [theta_bar(4, z - lam, ctx), theta_bar(3, z - lam, ctx)]])


def v_matrix_inv(lam: complex, z: complex, ctx: ModuliContext) -> np.ndarray:
    det = 2 * theta(1, 2 * z, ctx.tau, ctx) * theta(1, 2 * lam, ctx.tau, ctx)
    if det == 0:
        raise PoleProximity("singular V matrix", point=z)
    return np.array([[theta_bar(3, z - lam, ctx), -theta_bar(3, z + lam, ctx)],
                     [-theta_bar(4, z - lam, ctx), theta_bar(4, z + lam, ctx)]]) / det


def l_operator_factorized(lam: complex, spin: SpinParams,
                          ctx: ModuliContext) -> LOperator:
    """Same operator through the normal-ordered V^{-1} D V factorization.

    The normal-ordering dots mean every matrix element is written with its
    argument unshifted and the shift exponentials collected on the right.
    """
    lam = complex(lam)
    lp = lam + spin.ell * ctx.eta
    lm = lam - spin.ell * ctx.eta
    pref = theta(1, 2 * lp, ctx.tau, ctx)

    def entry(i: int, j: int) -> DiffOp:
        def c_up(z, i=i, j=j):
            return pref * v_matrix_inv(lp, z, ctx)[i, 0] * v_matrix(lm, z, ctx)[0, j]

        def c_dn(z, i=i, j=j):
            return pref * v_matrix_inv(lp, z, ctx)[i, 1] * v_matrix(lm, z, ctx)[1, j]

        return DiffOp((Term1(SV_ETA, c_up, f"Lf{i}{j}+"),
                       Term1(-1 * SV_ETA, c_dn, f"Lf{i}{j}-")))

    rows = tuple(tuple(entry(i, j) for j in range(2)) for i in range(2))
    return LOperator(rows, lam, spin)


PAULI = (np.eye(2, dtype=complex),
         np.array([[0, 1], [1, 0]], dtype=complex),
         np.array([[0, -1j], [1j, 0]], dtype=complex),
         np.array([[1, 0], [0, -1]], dtype=complex))


def elliptic_r_matrix(lam: complex, ctx: ModuliContext) -> np.ndarray:
    """8-vertex R-matrix sum_a theta_{a+1}(2l+eta)/theta_{a+1}(eta) s_a (x) s_a."""
    out = np.zeros((4, 4), dtype=complex)
    for a in range(4):
        w = theta(a + 1, 2 * lam + ctx.eta, ctx.tau, ctx) / theta(a + 1, ctx.eta, ctx.tau, ctx)
        out += w * np.kron(PAULI[a], PAULI[a])
    return out


def rll_sides(lam: complex, mu: complex, spin: SpinParams, ctx: ModuliContext,
              gens: Mapping[str, complex]):
    """The two 4x4 operator matrices of the RLL = LLR relation."""
    lop = l_operator(lam, spin, ctx)
    mop = l_operator(mu, spin, ctx)
    rmat = elliptic_r_matrix(lam - mu, ctx)
    zero = DiffOp(())

    # L1 = L(lam) in aux slot 1, L2 = L(mu) in slot 2, shared quantum space:
    #   (L1 L2)_{(ik),(jm)} = L(lam)_{ij} ∘ L(mu)_{km}
    #   (L2 L1)_{(ik),(jm)} = L(mu)_{km} ∘ L(lam)_{ij}
    l1l2 = [[zero] * 4 for _ in range(4)]
    l2l1 = [[zero] * 4 for _ in range(4)]
    for i in range(2):
        for j in range(2):
            for k in range(2):
                for m in range(2):
                    l1l2[2 * i + k][2 * j + m] = lop[i, j].compose(mop[k, m], gens)
                    l2l1[2 * i + k][2 * j + m] = mop[k, m].compose(lop[i, j], gens)
    lhs = [[zero for _ in range(4)] for _ in range(4)]
    rhs = [[zero for _ in range(4)] for _ in range(4)]
    for i in range(4):
        for j in range(4):
            for k in range(4):
                if rmat[i, k] != 0:
                    lhs[i][j] = lhs[i][j] + l1l2[k][j].scaled(rmat[i, k])
                if rmat[k, j] != 0:
                    rhs[i][j] = rhs[i][j] + l2l1[i][k].scaled(rmat[k, j])
    return lhs, rhs


# ---------------------------------------------------------------------------
# Intertwiner w_ell
# ---------------------------------------------------------------------------

def w_ell(spin: SpinParams, ctx: ModuliContext, form: str = "auto",
          series_cut: int | None = None) -> DiffOp:
    """Intertwiner between spins ell and -(ell+1).

    form="finite": the (2l+2)-term operator, needs 2l in Z_+;
    form="series": the half-infinite operator series cut at `series_cut`
    terms (terminating automatically at half-integer spin).
    """
    if form == "auto":
        form = "finite" if spin.finite_dim_flag else "series"
    if form == "finite":
        return _w_finite(spin, ctx)
    if form == "series":
        if series_cut is None:
            raise ValueError("series form requires series_cut")
        return _w_series(spin, ctx, series_cut)
    raise ValueError(f"unknown form {form!r}")


def w_ell_log_terms(spin: SpinParams, ctx: ModuliContext, form: str = "auto",
                    series_cut: int | None = None):
    """(shift, log-coefficient, sign) triples of the intertwiner terms.

    Exposed so that multi-site products (the factorized integral of
    motion) can assemble their coefficients in a single exponential.
    """
    if form == "auto":
        form = "finite" if spin.finite_dim_flag else "series"
    if form == "finite":
        return _w_finite_log(spin, ctx)
    if form == "series":
        if series_cut is None:
            raise ValueError("series form requires series_cut")
        return _w_series_log(spin, ctx, series_cut)
    raise ValueError(f"unknown form {form!r}")


def _terms_from_log(log_terms, truncated: bool) -> DiffOp:
    terms = []
    for i, (shift, logfn, sign) in enumerate(log_terms):
        def coeff(z, logfn=logfn, sign=sign):
            return sign * cmath.exp(logfn(z))

        terms.append(Term1(shift, coeff, f"w[{i}]"))
    return DiffOp(tuple(terms), truncated=truncated)


def _w_finite_log(spin: SpinParams, ctx: ModuliContext):
    n2 = spin.two_ell_int
    tau, eta = ctx.tau, ctx.eta
    out = []
    for k in range(n2 + 2):
        binom = ell_binomial(n2 + 1, k, ctx)
        sign = (-1) ** k

        def logfn(z, k=k, binom=binom):
            lg = cmath.log(binom)
            lg += log_theta(1, 2 * z + 2 * (n2 - 2 * k + 1) * eta, tau, ctx)
            for j in range(n2 + 2):
                lg -= log_theta(1, 2 * z + 2 * (j - k) * eta, tau, ctx)
            return lg

        out.append((ShiftVector.unit("eta", n2 - 2 * k + 1), logfn, sign))
    return out


def _w_finite(spin: SpinParams, ctx: ModuliContext) -> DiffOp:
    return _terms_from_log(_w_finite_log(spin, ctx), truncated=False)


def _w_series_log(spin: SpinParams, ctx: ModuliContext, series_cut: int):
    ell = spin.ell
    tau, eta = ctx.tau, ctx.eta
    kmax = series_cut
    if spin.finite_dim_flag:
        # series terminates exactly at k = 2l + 1
        kmax = min(kmax, spin.two_ell_int + 1)
    top = spin.leta_sv * 2 + SV_ETA          # (2*ell + 1) * eta, exact

    def log_bracket_z(z: complex, j: int) -> complex:
        # [alpha1(z) + j] with 2*eta*alpha1(z) = -2z - 2(2l+1)*eta
        return log_theta(1, -2 * z - 2 * (2 * ell + 1) * eta + 2 * j * eta, tau, ctx)

    # the gamma-ratio prefactor carries the shift-law phase
    # e^{pi i eta (2l+1)^2} R^{-(2l+1)} that makes the series reduce to the
    # finite operator at half-integer spin (for 2l+1 integer the whole
    # prefactor collapses to 1/prod_j theta1(2z + 2j eta))
    two_lp1 = 2 * ell + 1
    log_phase = (1j * PI * eta * two_lp1 * two_lp1
                 - two_lp1 * cmath.log(gamma_r_const(ctx)))
    out = []
    for k in range(kmax + 1):
        def logfn(z, k=k):
            lg = 2j * PI * two_lp1 * z + log_phase
            lg += log_egamma(2 * z, ctx) - log_egamma(2 * z + 2 * two_lp1 * eta, ctx)
            # 4W3 term k at operator argument: [a1+2k][a1]_k/([a1][k]!) *
            #   [a4]_k / [a1-a4+1]_k with a4 = -2l-1
            lg += log_bracket_z(z, 2 * k) - log_bracket_z(z, 0)
            for j in range(k):
                lg += log_bracket_z(z, j)
                lg -= log_theta(1, 2 * (j + 1) * eta, tau, ctx)
                lg += log_theta(1, 2 * (j - 2 * ell - 1) * eta, tau, ctx)
                lg -= log_theta(1, -2 * z + 2 * (j + 1) * eta, tau, ctx)
            return lg

        out.append((top - 2 * k * SV_ETA, logfn, 1.0))
    return out


def _w_series(spin: SpinParams, ctx: ModuliContext, series_cut: int) -> DiffOp:
    return _terms_from_log(_w_series_log(spin, ctx, series_cut),
                           truncated=not spin.finite_dim_flag)


# ---------------------------------------------------------------------------
# Two-site M-matrix and varphi
# ---------------------------------------------------------------------------

def m_matrix(lam: complex, spin: SpinParams, ctx: ModuliContext) -> Callable:
    """Two-site c-number matrix from the V factorization, numeric 2x2.

    M(z1, z2) = theta1(2*lam_+) V(lam_-, z1) V^{-1}(lam_+, z2); this is the
    grouping that the cyclic trace of the factorized L-product actually
    produces, and it reproduces the explicit theta1-product entries exactly.
    """
    lam = complex(lam)
    lp = lam + spin.ell * ctx.eta
    lm = lam - spin.ell * ctx.eta
    pref = theta(1, 2 * lp, ctx.tau, ctx)

    def mat(z1: complex, z2: complex) -> np.ndarray:
        return pref * (v_matrix(lm, z1, ctx) @ v_matrix_inv(lp, z2, ctx))

    return mat


def m_matrix_display(lam: complex, spin: SpinParams, ctx: ModuliContext) -> Callable:
    """The explicit theta1-product form of M (log-safe at deep arguments)."""
    lam = complex(lam)
    tle = 2 * spin.ell * ctx.eta
    tau = ctx.tau

    def entry(i: int, k: int, z1: complex, z2: complex) -> complex:
        si = -1.0 if i == 1 else 1.0        # (-1)^i with i in {1,2}
        sk = -1.0 if k == 1 else 1.0
        sgn = si * sk                        # (-1)^{i+k}
        lg = log_theta(1, z1 + sgn * z2 + si * tle, tau, ctx)
        if (i, k) == (1, 1):
            lg += log_theta(1, z1 - z2 + 2 * lam, tau, ctx)
            pre = 1.0
        elif (i, k) == (1, 2):
            lg += log_theta(1, z1 + z2 + 2 * lam, tau, ctx)
            pre = -1.0
        elif (i, k) == (2, 1):
            lg += log_theta(1, z1 + z2 - 2 * lam, tau, ctx)
            pre = 1.0
        else:
            lg += log_theta(1, z1 - z2 - 2 * lam, tau, ctx)
            pre = -1.0
        lg -= log_theta(1, 2 * z2, tau, ctx)
        return pre * cmath.exp(lg)

    def mat(z1: complex, z2: complex) -> np.ndarray:
        return np.array([[entry(i, k, z1, z2) for k in (1, 2)] for i in (1, 2)])

    return mat


def varphi(z1: complex, z2: complex, spin: SpinParams, ctx: ModuliContext) -> complex:
    """phi_l(z1, z2) = Phi_l(z1 - z2) Phi_l(z1 + z2)."""
    return phi_ell(z1 - z2, spin.ell, ctx) * phi_ell(z1 + z2, spin.ell, ctx)


def log_varphi(z1: complex, z2: complex, spin: SpinParams, ctx: ModuliContext) -> complex:
    return log_phi_ell(z1 - z2, spin.ell, ctx) + log_phi_ell(z1 + z2, spin.ell, ctx)


# ---------------------------------------------------------------------------
# Appendix-style four-term theta identity
# ---------------------------------------------------------------------------

def theta3_identity_check(k: int, spin: SpinParams, a: int, ctx: ModuliContext,
                          zs: Sequence[complex] | None = None,
                          rng=None, n_random: int = 20) -> float:
    """Residual of the four-term theta identity behind the intertwining
    relation, checked at random points (and optionally given ones)."""
    import random as _random

    if rng is None:
        rng = _random.Random(11)
    ell = spin.ell
    eta, tau = ctx.eta, ctx.tau
    pts = list(zs) if zs is not None else []
    while len(pts) < (n_random if zs is None else len(zs)):
        pts.append(complex(rng.uniform(-0.45, 0.45), rng.uniform(-0.2, 0.2)))

    def th(b, x):
        return theta(b, x, tau, ctx)

    worst = 0.0
    for z in pts:
        t1 = (th(1, 2 * (ell + k + 1) * eta) * th(a + 1, 2 * z + 2 * (ell + 1) * eta)
              * th(1, 2 * z + 4 * k * eta) * th(1, 2 * z - 2 * (ell - k + 1) * eta))
        t2 = (th(1, 2 * (ell - k + 1) * eta) * th(a + 1, -2 * z + 2 * (ell + 1) * eta)
              * th(1, 2 * z + 4 * k * eta) * th(1, 2 * z + 2 * (ell + k + 1) * eta))
        t3 = (th(1, 2 * (ell + k + 1) * eta) * th(a + 1, 2 * z + 2 * (2 * k - ell - 1) * eta)
              * th(1, 2 * z) * th(1, 2 * z + 2 * (ell + k + 1) * eta))
        t4 = (th(1, 2 * (ell - k + 1) * eta) * th(a + 1, -2 * z - 2 * (2 * k + ell + 1) * eta)
              * th(1, 2 * z) * th(1, 2 * z - 2 * (ell - k + 1) * eta))
        # at the anchor points both sides vanish by cancellation, so the
        # natural scale is the largest single term
        scale = max(abs(t1), abs(t2), abs(t3), abs(t4), 1e-300)
        worst = max(worst, abs((t1 + t2) - (t3 + t4)) / scale)
    return worst
