"""Scalar special functions: Jacobi theta, Dedekind eta, elliptic gamma,
q-gamma, basic hypergeometric series and theta-space elements.

Everything here is a pure function of its arguments; adaptive truncation is
controlled by a :class:`~elliptic_qop.context.ModuliContext` (or explicit
tol/max_terms overrides).  All non-integer powers take principal branches.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .context import ModuliContext
from .errors import DivergenceGuard, NoConvergence, PoleProximity

PI = math.pi
TWO_PI_I = 2j * PI

_DEF_TOL = 1e-12
_DEF_MAX = 256


def safe_exp(lg: complex) -> complex:
    """exp for log-assembled coefficients; an impending overflow marks an
    ill-conditioned evaluation point and triggers probe resampling.

    The cap admits products of two coefficients within float range, since
    composed operators multiply pairs of these values."""
    if lg.real > 350.0:
        raise PoleProximity(f"coefficient overflow (log magnitude {lg.real:.0f})")
    return cmath.exp(lg)


def _tols(ctx: ModuliContext | None, tol, max_terms):
    if ctx is not None:
        return (ctx.series_tol if tol is None else tol,
                ctx.max_terms if max_terms is None else max_terms)
    return (_DEF_TOL if tol is None else tol,
            _DEF_MAX if max_terms is None else max_terms)


# ---------------------------------------------------------------------------
# Jacobi theta functions
# ---------------------------------------------------------------------------

@lru_cache(maxsize=400_000)
def _theta_sum(z: complex, tau: complex, offset: float, tol: float, max_terms: int) -> complex:
    """sum_k exp(pi*i*tau*(k+offset)^2 + 2*pi*i*(k+offset)*z), recentered."""
    im_tau = tau.imag
    center = int(round(-z.imag / im_tau - offset))

    def term(k: int) -> complex:
        t = k + offset
        return cmath.exp(1j * PI * tau * t * t + TWO_PI_I * t * z)

    total = term(center)
    peak = abs(total)
    quiet = 0
    for r in range(1, max_terms):
        t_hi = term(center + r)
        t_lo = term(center - r)
        total += t_hi + t_lo
        mag = max(abs(t_hi), abs(t_lo))
        peak = max(peak, mag)
        if mag < tol * max(peak, 1e-300):
            quiet += 1
            if quiet >= 3:
                return total
        else:
            quiet = 0
    raise NoConvergence(f"theta series did not settle in {max_terms} terms")


def theta(a: int, z: complex, tau: complex, ctx: ModuliContext | None = None,
          *, tol: float | None = None, max_terms: int | None = None) -> complex:
    """Jacobi theta_a(z|tau), a in 1..4, Im(tau) > 0."""
    if complex(tau).imag <= 0:
        raise DivergenceGuard(f"theta requires Im(tau) > 0, got {tau}")
    tol, max_terms = _tols(ctx, tol, max_terms)
    z = complex(z)
    tau = complex(tau)
    if a == 1:
        return -_theta_sum(z + 0.5, tau, 0.5, tol, max_terms)
    if a == 2:
        return _theta_sum(z, tau, 0.5, tol, max_terms)
    if a == 3:
        return _theta_sum(z, tau, 0.0, tol, max_terms)
    if a == 4:
        return _theta_sum(z + 0.5, tau, 0.0, tol, max_terms)
    raise ValueError(f"theta index must be 1..4, got {a}")


def theta1(z: complex, tau: complex, ctx: ModuliContext | None = None) -> complex:
    return theta(1, z, tau, ctx)


def theta_bar(a: int, z: complex, ctx: ModuliContext) -> complex:
    """theta_a at the halved module tau/2 (the bar convention)."""
    return theta(a, z, ctx.tau / 2, ctx)


# ---------------------------------------------------------------------------
# Log-space evaluation
#
# Deep delta-lattice points push theta/gamma arguments far in the imaginary
# direction where the plain values overflow float64.  Coefficient formulas
# therefore assemble log values (branch ambiguities cancel on exp of sums)
# obtained by reducing the argument with the exact quasi-periodicity laws.
# ---------------------------------------------------------------------------

@lru_cache(maxsize=400_000)
def _log_theta_cached(a: int, x: complex, tau: complex, tol: float, max_terms: int) -> complex:
    m = int(round(x.imag / tau.imag))
    x_red = x - m * tau
    val = theta(a, x_red, tau, tol=tol, max_terms=max_terms)
    if val == 0:
        return complex(-math.inf, 0.0)
    sign_log = 1j * PI * m if a in (1, 4) else 0.0
    return cmath.log(val) + sign_log - 1j * PI * m * m * tau - TWO_PI_I * m * x_red


def log_theta(a: int, x: complex, tau: complex, ctx: ModuliContext | None = None,
              *, tol: float | None = None, max_terms: int | None = None) -> complex:
    """log theta_a(x|tau) up to 2*pi*i; safe for large |Im x|."""
    tol, max_terms = _tols(ctx, tol, max_terms)
    return _log_theta_cached(a, complex(x), complex(tau), tol, max_terms)


def log_theta1(x: complex, tau: complex, ctx: ModuliContext | None = None) -> complex:
    return log_theta(1, x, tau, ctx)


def log_theta1_structural(x: complex, tau: complex, ctx: ModuliContext | None = None,
                          zero_tol: float = 1e-11) -> complex:
    """log theta1 that snaps exact lattice zeros to -inf.

    Terminating series rely on brackets vanishing identically; the floating
    evaluation of theta1 at an exact lattice point leaves an O(1e-16)
    residue that would otherwise leak into later terms.
    """
    if _lattice_distance(complex(x), complex(tau)) < zero_tol:
        return complex(-math.inf, 0.0)
    return log_theta(1, x, tau, ctx)


def _lattice_distance(x: complex, tau: complex) -> float:
    """Approximate distance from x to the lattice Z + tau*Z (theta1 zeros)."""
    m = round(x.imag / tau.imag)
    best = math.inf
    for mm in (m - 1, m, m + 1):
        r = x - mm * tau
        best = min(best, abs(r - round(r.real)))
    return best


@lru_cache(maxsize=400_000)
def _log_egamma_cached(z: complex, tau: complex, eta: complex, tol: float,
                       max_terms: int, guard: float) -> complex:
    """log Gamma(z|tau,2eta), reduced into the band 0 <= Im z < Im(2eta)."""
    taup = 2 * eta
    m = int(math.floor(z.imag / taup.imag))
    z_red = z - m * taup
    if m >= 1 and abs(z_red - round(z_red.real)) < max(4.0 * guard, 1e-7):
        # z sits on a regular point 2k*eta + n where the naive reduction
        # would pair a Gamma pole with a theta1 zero; start one band up
        m -= 1
        z_red = z_red + taup
    eta_d = _dedekind_cached(tau, tol, max_terms)
    # log of the step factor Gamma(x+2eta)/Gamma(x) = -i e^{-pi i tau/6}
    #   eta_D(tau)^{-1} e^{pi i x} theta1(x|tau)
    log_const = cmath.log(-1j) - 1j * PI * tau / 6.0 - cmath.log(eta_d)

    def log_step(x: complex) -> complex:
        # a vanishing theta1 factor is a genuine zero/pole of Gamma; an
        # exact lattice hit gives log 0 = -inf (the caller sees Gamma = 0
        # or a clean pole), a near hit is an accuracy hazard
        d = _lattice_distance(x, tau)
        if d < 1e-12:
            return complex(-math.inf, 0.0)
        if guard > 0.0 and d < guard:
            raise PoleProximity(
                f"elliptic gamma zero/pole lattice within guard at z={z}", point=z)
        lt = _log_theta_cached(1, x, tau, tol, max_terms)
        return log_const + 1j * PI * x + lt

    acc = 0.0 + 0.0j
    if m > 0:
        for j in range(m):
            acc += log_step(z_red + j * taup)
    elif m < 0:
        for j in range(1, -m + 1):
            acc -= log_step(z_red - j * taup)
    base = _egamma_cached(z_red, tau, taup, tol, max_terms, guard, False)
    if base == 0:
        return complex(-math.inf, 0.0) + acc
    if base == complex(math.inf, 0.0):
        return complex(math.inf, 0.0) + acc
    return cmath.log(base) + acc


# Accuracy floor for bulk formula evaluation: a pole at distance d costs
# about 1e-16/d relative error in one factor, so 1e-9 keeps lone factors at
# the 1e-7 level.  Parameter-level genericity (ctx.generic_guard) is
# enforced where parameters are drawn, not per evaluation.
EVAL_GUARD = 1e-9


def log_egamma(z: complex, ctx: ModuliContext, *, guard: float | None = None) -> complex:
    """log Gamma(z | tau, 2*eta); overflow-free for deep lattice arguments."""
    if guard is None:
        guard = EVAL_GUARD
    return _log_egamma_cached(complex(z), complex(ctx.tau), complex(ctx.eta),
                              ctx.series_tol, ctx.max_terms, guard)


# ---------------------------------------------------------------------------
# Dedekind eta
# ---------------------------------------------------------------------------

@lru_cache(maxsize=4096)
def _dedekind_cached(tau: complex, tol: float, max_terms: int) -> complex:
    q = cmath.exp(TWO_PI_I * tau)
    prod = 1.0 + 0.0j
    qk = q
    for _ in range(max_terms * 16):
        prod *= 1.0 - qk
        if abs(qk) < tol:
            return cmath.exp(1j * PI * tau / 12.0) * prod
        qk *= q
    raise NoConvergence("Dedekind eta product did not settle")


def dedekind_eta(tau: complex, ctx: ModuliContext | None = None,
                 *, tol: float | None = None, max_terms: int | None = None) -> complex:
    """Dedekind eta function e^{pi i tau/12} prod (1 - e^{2 pi i k tau})."""
    if complex(tau).imag <= 0:
        raise DivergenceGuard(f"dedekind_eta requires Im(tau) > 0, got {tau}")
    tol, max_terms = _tols(ctx, tol, max_terms)
    return _dedekind_cached(complex(tau), tol, max_terms)


# ---------------------------------------------------------------------------
# Elliptic gamma function
# ---------------------------------------------------------------------------

@lru_cache(maxsize=400_000)
def _egamma_cached(z: complex, tau: complex, taup: complex, tol: float,
                   max_terms: int, guard: float, inverse: bool) -> complex:
    p = cmath.exp(TWO_PI_I * tau)
    q = cmath.exp(TWO_PI_I * taup)
    w = cmath.exp(TWO_PI_I * z)
    w_inv = 1.0 / w
    fuzz = 4.0 * guard

    num = 1.0 + 0.0j
    den = 1.0 + 0.0j
    pk = 1.0 + 0.0j                      # p^k
    for _ in range(max_terms):
        # inner sweep over the taup index at fixed tau index k
        qk = 1.0 + 0.0j                  # q^{k'}
        row_touched = False
        for _ in range(max_terms):
            fn = 1.0 - pk * p * qk * q * w_inv
            fd = 1.0 - pk * qk * w
            if abs(fd) < 1e-12:
                fd = 0.0            # exactly on the pole lattice
            elif fuzz > 0.0 and abs(fd) < fuzz:
                raise PoleProximity(
                    f"elliptic gamma near pole lattice at z={z}", point=z)
            if inverse and 1e-12 <= abs(fn) < fuzz:
                raise PoleProximity(
                    f"elliptic gamma near zero lattice at z={z}", point=z)
            if abs(fn) < 1e-12:
                fn = 0.0
            num *= fn
            den *= fd
            if abs(fn - 1.0) < tol and abs(fd - 1.0) < tol:
                break
            row_touched = True
            qk *= q
        else:
            raise NoConvergence("elliptic gamma inner product did not settle")
        if not row_touched:
            if den == 0:
                value = complex(math.inf, 0.0)   # exactly on the pole lattice
            elif num == 0:
                value = 0.0 + 0.0j               # exactly on the zero lattice
            else:
                value = num / den
            if inverse:
                if value == 0:
                    return complex(math.inf, 0.0)
                return 1.0 / value if value != complex(math.inf, 0.0) else 0.0 + 0.0j
            return value
        pk *= p
    raise NoConvergence("elliptic gamma outer product did not settle")


def elliptic_gamma(z: complex, tau: complex, taup: complex,
                   ctx: ModuliContext | None = None, *, tol: float | None = None,
                   max_terms: int | None = None, guard: float | None = None) -> complex:
    """Ruijsenaars elliptic gamma via its double infinite product.

    Raises PoleProximity when z falls within `guard` of the pole lattice
    -k*tau - k'*taup + n (guard=0 disables the check, for residue probes).
    """
    if complex(tau).imag <= 0 or complex(taup).imag <= 0:
        raise DivergenceGuard("elliptic_gamma requires Im(tau), Im(taup) > 0")
    tol, max_terms = _tols(ctx, tol, max_terms)
    if guard is None:
        guard = ctx.generic_guard if ctx is not None else 1e-4
    return _egamma_cached(complex(z), complex(tau), complex(taup),
                          tol, max_terms, guard, False)


def elliptic_gamma_inv(z: complex, tau: complex, taup: complex,
                       ctx: ModuliContext | None = None, *, tol: float | None = None,
                       max_terms: int | None = None, guard: float | None = None) -> complex:
    """1/Gamma(z|tau,taup); finite (and ~0) on the pole lattice of Gamma."""
    if complex(tau).imag <= 0 or complex(taup).imag <= 0:
        raise DivergenceGuard("elliptic_gamma requires Im(tau), Im(taup) > 0")
    tol, max_terms = _tols(ctx, tol, max_terms)
    if guard is None:
        guard = ctx.generic_guard if ctx is not None else 1e-4
    return _egamma_cached(complex(z), complex(tau), complex(taup),
                          tol, max_terms, guard, True)


def egamma(z: complex, ctx: ModuliContext, *, guard: float | None = None) -> complex:
    """Gamma(z | tau, 2*eta), the normalization every vacuum formula uses."""
    return elliptic_gamma(z, ctx.tau, 2 * ctx.eta, ctx, guard=guard)


def egamma_inv(z: complex, ctx: ModuliContext, *, guard: float | None = None) -> complex:
    return elliptic_gamma_inv(z, ctx.tau, 2 * ctx.eta, ctx, guard=guard)


def gamma_r_const(ctx: ModuliContext) -> complex:
    """R = i e^{pi i (eta + tau/6)} eta_D(tau), the shift-law constant."""
    return 1j * cmath.exp(1j * PI * (ctx.eta + ctx.tau / 6.0)) * dedekind_eta(ctx.tau, ctx)


def gamma_shift_ratio(x: complex, k: int, ctx: ModuliContext) -> complex:
    """Gamma(x + 2*k*eta)/Gamma(x) through the closed theta1-product law.

    Evaluates the ratio without forming either gamma value, valid for any
    integer k (positive or negative).
    """
    if k == 0:
        return 1.0 + 0.0j
    r_const = gamma_r_const(ctx)
    guard_tol = 4.0 * ctx.generic_guard
    if k > 0:
        prod = 1.0 + 0.0j
        for j in range(k):
            f = theta(1, x + 2 * j * ctx.eta, ctx.tau, ctx)
            prod *= f
        phase = cmath.exp(1j * PI * ctx.eta * k * k) * r_const ** (-k) \
            * cmath.exp(1j * PI * k * x)
        return phase * prod
    m = -k
    prod = 1.0 + 0.0j
    for j in range(m):
        f = theta(1, -x + 2 * (j + 1) * ctx.eta, ctx.tau, ctx)
        if abs(f) < guard_tol:
            raise PoleProximity("vanishing theta1 factor in gamma_shift_ratio",
                                point=-x + 2 * (j + 1) * ctx.eta)
        prod *= f
    phase = (-1) ** m * cmath.exp(1j * PI * ctx.eta * m * m) * r_const ** m \
        * cmath.exp(-1j * PI * m * x)
    return phase / prod


def log_gamma_residue(k: int, ctx: ModuliContext) -> complex:
    """log of the residue of Gamma(z|tau,2eta) at z = -2*k*eta, k >= 0."""
    if k < 0:
        raise ValueError("gamma_residue requires k >= 0")
    log_r0 = (1j * PI * (ctx.tau + 2 * ctx.eta) / 12.0 + cmath.log(-1.0)
              - cmath.log(TWO_PI_I * dedekind_eta(ctx.tau, ctx)
                          * dedekind_eta(2 * ctx.eta, ctx)))
    if k == 0:
        return log_r0
    lg = log_r0 + 1j * PI * ctx.eta * k * k + k * cmath.log(gamma_r_const(ctx))
    if k % 2:
        lg += cmath.log(-1.0)
    for j in range(1, k + 1):
        lg -= log_theta(1, 2 * j * ctx.eta, ctx.tau, ctx)
    return lg


def gamma_residue(k: int, ctx: ModuliContext) -> complex:
    """Residue of Gamma(z|tau,2eta) at z = -2*k*eta, k >= 0."""
    return cmath.exp(log_gamma_residue(k, ctx))


def log_gamma_shift_ratio(x: complex, k: int, ctx: ModuliContext) -> complex:
    """log of Gamma(x + 2*k*eta)/Gamma(x) via the theta1-product laws.

    Structural theta zeros give -inf (the ratio vanishes) for k > 0 and
    +inf (a clean pole) for k < 0; used to pair gamma factors whose
    argument difference is an exact lattice step so poles cancel exactly.
    """
    if k == 0:
        return 0.0 + 0.0j
    log_r = cmath.log(gamma_r_const(ctx))
    if k > 0:
        lg = 1j * PI * ctx.eta * k * k - k * log_r + 1j * PI * k * x
        for j in range(k):
            step = _log_theta_cached(1, x + 2 * j * ctx.eta, ctx.tau,
                                     ctx.series_tol, ctx.max_terms) \
                if _lattice_distance(x + 2 * j * ctx.eta, ctx.tau) >= 1e-12 \
                else complex(-math.inf, 0.0)
            lg += step
        return lg
    m = -k
    lg = 1j * PI * ctx.eta * m * m + m * log_r - 1j * PI * m * x
    if m % 2:
        lg += cmath.log(-1.0)
    for j in range(m):
        arg = -x + 2 * (j + 1) * ctx.eta
        if _lattice_distance(arg, ctx.tau) < 1e-12:
            return complex(math.inf, 0.0)
        lg -= _log_theta_cached(1, arg, ctx.tau, ctx.series_tol, ctx.max_terms)
    return lg


def log_phi_ell(z: complex, ell: complex, ctx: ModuliContext,
                *, guard: float | None = None) -> complex:
    n2 = round((2 * ell).real)
    if n2 >= 0 and abs(2 * ell - n2) < 1e-9:
        # finite theta product, free of the gamma pole/zero pairing
        lg = 0.0 + 0.0j
        for k2 in range(-n2, n2 + 1, 2):     # k = -l..l in half steps
            x = z + k2 * ctx.eta
            if _lattice_distance(x, ctx.tau) < 1e-12:
                return complex(-math.inf, 0.0)
            lg += _log_theta_cached(1, x, ctx.tau, ctx.series_tol, ctx.max_terms)
        return lg
    two_lp1 = 2 * ell + 1
    lg = two_lp1 * (cmath.log(gamma_r_const(ctx)) - 1j * PI * ctx.eta - 1j * PI * z)
    lg += log_egamma(z + 2 * (ell + 1) * ctx.eta, ctx, guard=guard)
    lg -= log_egamma(z - 2 * ell * ctx.eta, ctx, guard=guard)
    return lg


def phi_ell(z: complex, ell: complex, ctx: ModuliContext,
            *, guard: float | None = None) -> complex:
    """Phi_ell(z), the spin-dependent quasi-constant of the vacuum vectors.

    For 2*ell a non-negative integer this reduces to the finite product
    prod_{k=-ell}^{ell} theta1(z + 2*k*eta); the gamma-ratio form extends it
    to arbitrary complex spin (principal branch for the R power).
    """
    return cmath.exp(log_phi_ell(z, ell, ctx, guard=guard))


# ---------------------------------------------------------------------------
# q-gamma and basic hypergeometric series (XXZ degeneration)
# ---------------------------------------------------------------------------

def qpochhammer_inf(a: complex, q: complex, ctx: ModuliContext | None = None,
                    *, tol: float | None = None, max_terms: int | None = None) -> complex:
    """(a; q)_infinity for |q| < 1."""
    if abs(q) >= 1:
        raise DivergenceGuard(f"(a;q)_inf requires |q| < 1, got |q|={abs(q)}")
    tol, max_terms = _tols(ctx, tol, max_terms)
    prod = 1.0 + 0.0j
    aq = complex(a)
    for _ in range(max_terms * 16):
        prod *= 1.0 - aq
        if abs(aq) < tol:
            return prod
        aq *= q
    raise NoConvergence("q-Pochhammer product did not settle")


def q_gamma(x: complex, q: complex, ctx: ModuliContext | None = None,
            *, tol: float | None = None, max_terms: int | None = None) -> complex:
    """Gamma_q(x) = (q;q)_inf / (q^x;q)_inf * (1-q)^{1-x}, principal branches."""
    if abs(q) >= 1:
        raise DivergenceGuard(f"q_gamma requires |q| < 1, got |q|={abs(q)}")
    qx = cmath.exp(x * cmath.log(q))
    pw = cmath.exp((1 - x) * cmath.log(1 - q))
    return qpochhammer_inf(q, q, ctx, tol=tol, max_terms=max_terms) \
        / qpochhammer_inf(qx, q, ctx, tol=tol, max_terms=max_terms) * pw


def basic_2phi1(a: complex, b: complex, c: complex, q: complex, x: complex,
                ctx: ModuliContext | None = None, *, tol: float | None = None,
                max_terms: int | None = None) -> complex:
    """2phi1(a, b; c; q, x) with an adaptive tail test.

    Terminating cases (a or b in q^{-N}) exit exactly; otherwise the sum
    stops once three consecutive terms fall below tol * |partial sum| and
    raises NoConvergence if the cap is hit first.
    """
    if abs(q) >= 1:
        raise DivergenceGuard(f"2phi1 requires |q| < 1, got |q|={abs(q)}")
    tol, max_terms = _tols(ctx, tol, max_terms)
    total = 1.0 + 0.0j
    term = 1.0 + 0.0j
    quiet = 0
    for k in range(max_terms):
        qk = q ** k
        den = (1.0 - q ** (k + 1)) * (1.0 - c * qk)
        if den == 0:
            raise PoleProximity("2phi1 denominator vanished before termination")
        term = term * (1.0 - a * qk) * (1.0 - b * qk) * x / den
        if term == 0:
            return total
        total += term
        if abs(term) < tol * max(abs(total), 1e-300):
            quiet += 1
            if quiet >= 3:
                return total
        else:
            quiet = 0
    raise NoConvergence("2phi1 tail test failed within max_terms")


# ---------------------------------------------------------------------------
# Theta-space elements (entire theta functions of even order)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ThetaSpaceElement:
    """Even theta function of even order n in multiplicative form.

    F(z) = scale * prod_i theta1(z - x_i) theta1(z + x_i); the +/- pairing
    makes F even and puts the root sum at zero, so F lies in the order-n
    space by construction.
    """

    order: int
    roots: tuple
    scale: complex
    ctx: ModuliContext

    def __call__(self, z: complex) -> complex:
        val = complex(self.scale)
        for x in self.roots:
            val *= theta(1, z - x, self.ctx.tau, self.ctx)
            val *= theta(1, z + x, self.ctx.tau, self.ctx)
        return val

    def quasi_periodicity_residual(self, z: complex) -> float:
        """Max relative residual of the two order-n functional equations."""
        n, tau = self.order, self.ctx.tau
        f = self(z)
        scale = max(abs(f), 1e-300)
        r1 = abs(self(z + 1) - f) / scale
        factor = (-1) ** n * cmath.exp(-1j * PI * n * tau - TWO_PI_I * n * z)
        r2 = abs(self(z + tau) - factor * f) / max(abs(factor * f), scale)
        r3 = abs(self(-z) - f) / scale
        return max(r1, r2, r3)


def theta_space_element(n: int, roots: Sequence[complex], ctx: ModuliContext,
                        scale: complex = 1.0) -> ThetaSpaceElement:
    """Build an even order-n element from n/2 root representatives."""
    if n % 2 != 0 or n <= 0:
        raise ValueError(f"order must be a positive even integer, got {n}")
    if 2 * len(roots) != n:
        raise ValueError(f"need {n // 2} roots for order {n}, got {len(roots)}")
    return ThetaSpaceElement(order=n, roots=tuple(complex(r) for r in roots),
                             scale=complex(scale), ctx=ctx)
