"""Elliptic Pochhammer arithmetic, very-well-poised elliptic hypergeometric
series r+1_W_r, balance/termination classification and the elliptic Bailey
transformation for the terminating balanced 10W9.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import cmath
import math

from .context import ModuliContext
from .errors import ConfigInvalid, NoConvergence, PoleProximity
from .special import log_theta, theta

TERMINATION_TOL = 1e-9


def ell_bracket(x: complex, ctx: ModuliContext) -> complex:
    """[x] = theta1(2*x*eta | tau)."""
    return theta(1, 2 * x * ctx.eta, ctx.tau, ctx)


def log_ell_bracket(x: complex, ctx: ModuliContext) -> complex:
    """log [x]; -inf real part when the bracket vanishes."""
    return log_theta(1, 2 * x * ctx.eta, ctx.tau, ctx)


def ell_pochhammer(x: complex, k: int, ctx: ModuliContext) -> complex:
    """[x]_k = [x][x+1]...[x+k-1], empty product for k=0."""
    if k < 0:
        raise ValueError("ell_pochhammer requires k >= 0")
    prod = 1.0 + 0.0j
    for j in range(k):
        prod *= ell_bracket(x + j, ctx)
    return prod


def log_ell_pochhammer(x: complex, k: int, ctx: ModuliContext) -> complex:
    if k < 0:
        raise ValueError("ell_pochhammer requires k >= 0")
    return sum((log_ell_bracket(x + j, ctx) for j in range(k)), 0.0 + 0.0j)


def ell_factorial(n: int, ctx: ModuliContext) -> complex:
    """[n]! = [1][2]...[n]."""
    return ell_pochhammer(1, n, ctx)


def ell_binomial(n: int, m: int, ctx: ModuliContext) -> complex:
    """Elliptic binomial [n]! / ([m]! [n-m]!)."""
    if not 0 <= m <= n:
        raise ValueError(f"binomial out of range: ({n}, {m})")
    return ell_factorial(n, ctx) / (ell_factorial(m, ctx) * ell_factorial(n - m, ctx))


def _as_negative_integer(alpha: complex) -> int | None:
    n = round(-alpha.real)
    if n >= 0 and abs(alpha + n) < TERMINATION_TOL:
        return n
    return None


@dataclass(frozen=True)
class WSeriesSpec:
    """Parameter record for r+1_W_r(alpha1; alpha4..alpha_{r+1}; z).

    `termination` carries the exact integer cut when the harness built the
    spec symbolically; otherwise termination is detected from the alphas
    being within 1e-9 of a negative integer.
    """

    r: int
    alpha1: complex
    alphas: tuple
    argument: complex
    ctx: ModuliContext
    termination: int | None = None

    def __post_init__(self):
        if self.r < 3:
            raise ConfigInvalid(f"r must be >= 3, got {self.r}")
        if len(self.alphas) != self.r - 2:
            raise ConfigInvalid(
                f"{self.r + 1}W{self.r} needs {self.r - 2} upper parameters, "
                f"got {len(self.alphas)}")
        object.__setattr__(self, "alphas", tuple(complex(a) for a in self.alphas))

    def termination_index(self) -> int | None:
        if self.termination is not None:
            return self.termination
        hits = [n for n in (_as_negative_integer(a) for a in self.alphas) if n is not None]
        return min(hits) if hits else None

    @property
    def terminating(self) -> bool:
        return self.termination_index() is not None


def w_term(spec: WSeriesSpec, k: int) -> complex:
    """k-th summand of the series, assembled in log space.

    Log-space products avoid float overflow from the exponential growth of
    theta1 along the 2*eta lattice; branch ambiguities cancel on exp.
    """
    ctx = spec.ctx
    a1 = spec.alpha1
    if k == 0:
        return 1.0 + 0.0j
    if spec.argument == 0:
        return 0.0 + 0.0j
    log_num = log_ell_bracket(a1 + 2 * k, ctx) + log_ell_pochhammer(a1, k, ctx)
    log_den = log_ell_bracket(a1, ctx) + log_ell_pochhammer(1, k, ctx)
    for a in spec.alphas:
        log_num += log_ell_pochhammer(a, k, ctx)
        log_den += log_ell_pochhammer(a1 - a + 1, k, ctx)
    if log_num.real == -math.inf:
        return 0.0 + 0.0j
    if log_den.real == -math.inf:
        raise PoleProximity(f"vanishing Pochhammer denominator at term {k}")
    return cmath.exp(k * cmath.log(spec.argument) + log_num - log_den)


def w_series(spec: WSeriesSpec) -> complex:
    """Evaluate the elliptic hypergeometric series.

    Terminating series are summed exactly over k = 0..n.  Otherwise the
    adaptive tail test applies (three consecutive terms below tol times the
    running magnitude) and NoConvergence is raised at the term cap.
    """
    n = spec.termination_index()
    if n is not None:
        return sum(w_term(spec, k) for k in range(n + 1))
    tol = spec.ctx.series_tol
    total = 0.0 + 0.0j
    quiet = 0
    for k in range(spec.ctx.max_terms):
        t = w_term(spec, k)
        total += t
        if abs(t) < tol * max(abs(total), 1e-300):
            quiet += 1
            if quiet >= 3:
                return total
        else:
            quiet = 0
    raise NoConvergence("w_series tail test failed within max_terms")


def balance_defect(spec: WSeriesSpec) -> complex:
    """r - 5 + (r-3)*alpha1 - 2*sum(alphas); zero for balanced series."""
    return spec.r - 5 + (spec.r - 3) * spec.alpha1 - 2 * sum(spec.alphas)


def is_balanced(spec: WSeriesSpec) -> bool:
    """True iff the argument is 1 and the linear balance relation holds."""
    if abs(spec.argument - 1.0) > TERMINATION_TOL:
        return False
    return abs(balance_defect(spec)) < TERMINATION_TOL


def w10_9(alpha1: complex, alphas: Sequence[complex], ctx: ModuliContext,
          termination: int | None = None) -> complex:
    """Balanced terminating 10W9 at argument 1."""
    spec = WSeriesSpec(r=9, alpha1=alpha1, alphas=tuple(alphas), argument=1.0,
                       ctx=ctx, termination=termination)
    return w_series(spec)


def bailey_partner(alpha1: complex, alphas: Sequence[complex]):
    """Image (beta1, betas) of a balanced terminating 10W9 parameter set.

    beta1 = 2*alpha1 + 1 - alpha4 - alpha5 - alpha6, the next three betas
    shift by beta1 - alpha1, the tail (alpha7..alpha10) is fixed.  The map
    is an involution and preserves the balance relation.
    """
    alphas = tuple(complex(a) for a in alphas)
    if len(alphas) != 7:
        raise ConfigInvalid(f"bailey_partner expects alpha4..alpha10, got {len(alphas)}")
    defect = 2 + 3 * alpha1 - sum(alphas)
    if abs(defect) > 1e-6:
        raise ConfigInvalid(f"parameters are not balanced (defect {defect})")
    beta1 = 2 * alpha1 + 1 - alphas[0] - alphas[1] - alphas[2]
    shift = beta1 - alpha1
    betas = tuple(a + shift for a in alphas[:3]) + alphas[3:]
    return beta1, betas


def bailey_residual(alpha1: complex, alphas: Sequence[complex], n: int,
                    ctx: ModuliContext) -> float:
    """Relative defect of the elliptic Bailey transformation.

    Both sides are terminating balanced 10W9 sums; the right-hand side
    carries the four-over-four Pochhammer ratio prefactor.
    """
    alphas = tuple(complex(a) for a in alphas)
    beta1, betas = bailey_partner(alpha1, alphas)
    a7, a8 = alphas[3], alphas[4]
    b7, b8 = betas[3], betas[4]
    lhs = w10_9(alpha1, alphas, ctx, termination=n)
    rhs_series = w10_9(beta1, betas, ctx, termination=n)
    log_pref = (log_ell_pochhammer(alpha1 + 1, n, ctx)
                + log_ell_pochhammer(beta1 - b7 + 1, n, ctx)
                + log_ell_pochhammer(beta1 - b8 + 1, n, ctx)
                + log_ell_pochhammer(alpha1 - a7 - a8 + 1, n, ctx)
                - log_ell_pochhammer(beta1 + 1, n, ctx)
                - log_ell_pochhammer(alpha1 - a7 + 1, n, ctx)
                - log_ell_pochhammer(alpha1 - a8 + 1, n, ctx)
                - log_ell_pochhammer(beta1 - b7 - b8 + 1, n, ctx))
    if log_pref.real == math.inf:
        raise PoleProximity("vanishing Pochhammer in Bailey prefactor")
    rhs = rhs_series * cmath.exp(log_pref)
    scale = max(abs(lhs), abs(rhs))
    if scale == 0:
        return 0.0
    res = abs(lhs - rhs) / scale
    if math.isnan(res):
        raise NoConvergence("Bailey residual evaluated to NaN")
    return res


def random_balanced_w10_9(rng, n: int, spread: float = 0.35):
    """Draw a generic balanced terminating parameter set with alpha10 = -n.

    alpha9 soaks up the balance constraint; returns (alpha1, alphas).
    """
    def draw():
        return complex(rng.uniform(-spread, spread), rng.uniform(-spread, spread))

    alpha1 = 1.5 + draw()
    a4, a5, a6, a7, a8 = (0.3 + draw() for _ in range(5))
    a10 = complex(-n)
    a9 = 2 + 3 * alpha1 - (a4 + a5 + a6 + a7 + a8) - a10
    return alpha1, (a4, a5, a6, a7, a8, a9, a10)
