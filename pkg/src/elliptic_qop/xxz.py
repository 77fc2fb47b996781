"""Trigonometric (six-vertex) degeneration: U_q(sl2) generators, the XXZ
L-operator, the q-deformed Q-operator and the T-Q relation, plus the
modular-limit drift check connecting the elliptic operators to these.

The x-space difference operators step by gamma, so an XXZ chain reuses the
comb machinery with eta := gamma in its own context.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .context import ModuliContext
from .errors import ConfigInvalid
from .operators import DiffOp, MultiDiffOp, Term1, TermN
from .shifts import SV_ETA, ShiftVector, sv
from .sklyanin import SpinParams
from .special import qpochhammer_inf, safe_exp
from .vacua import _kvecs

PI = math.pi
TWO_PI_I = 2j * PI


def xxz_context(gamma: complex, tau_dummy: complex = 0.8j) -> ModuliContext:
    """Context whose lattice step generator is gamma (Im gamma > 0)."""
    return ModuliContext(tau=tau_dummy, eta=gamma)


# ---------------------------------------------------------------------------
# U_q(sl2) generators on exponential test functions
# ---------------------------------------------------------------------------

class ExpPoly:
    """Finite sums sum_k c_k e^{a_k x}, closed under the XXZ operators.

    Exponent keys are rounded so that a + 2*pi*i - 2*pi*i collapses back
    onto a.
    """

    def __init__(self, data: Mapping[complex, complex] | None = None):
        self.data = {}
        for a, c in (data or {}).items():
            if c != 0:
                key = complex(round(a.real, 9), round(a.imag, 9))
                self.data[key] = self.data.get(key, 0.0 + 0.0j) + complex(c)

    def shift(self, s: complex) -> "ExpPoly":
        return ExpPoly({a: c * cmath.exp(a * s) for a, c in self.data.items()})

    def mul_exp(self, b: complex) -> "ExpPoly":
        return ExpPoly({a + b: c for a, c in self.data.items()})

    def deriv(self) -> "ExpPoly":
        return ExpPoly({a: c * a for a, c in self.data.items()})

    def scaled(self, w: complex) -> "ExpPoly":
        return ExpPoly({a: w * c for a, c in self.data.items()})

    def __add__(self, other: "ExpPoly") -> "ExpPoly":
        out = dict(self.data)
        for a, c in other.data.items():
            out[a] = out.get(a, 0.0 + 0.0j) + c
        return ExpPoly(out)

    def __sub__(self, other: "ExpPoly") -> "ExpPoly":
        return self + other.scaled(-1.0)

    def max_abs(self) -> float:
        return max((abs(c) for c in self.data.values()), default=0.0)

    def distance(self, other: "ExpPoly") -> float:
        keys = set(self.data) | set(other.data)
        scale = max(self.max_abs(), other.max_abs(), 1e-300)
        return max((abs(self.data.get(a, 0) - other.data.get(a, 0)) for a in keys),
                   default=0.0) / scale


@dataclass(frozen=True)
class XXZParams:
    gamma: complex
    ell: complex

    @property
    def q(self) -> complex:
        return cmath.exp(TWO_PI_I * self.gamma)


def j0(f: ExpPoly, p: XXZParams) -> ExpPoly:
    return f.deriv().scaled(p.gamma)


def j_plus(f: ExpPoly, p: XXZParams) -> ExpPoly:
    ql = p.q ** p.ell
    return (f.shift(-p.gamma).scaled(ql) - f.shift(p.gamma).scaled(1 / ql)).mul_exp(TWO_PI_I)


def j_minus(f: ExpPoly, p: XXZParams) -> ExpPoly:
    ql = p.q ** p.ell
    return (f.shift(p.gamma).scaled(ql) - f.shift(-p.gamma).scaled(1 / ql)).mul_exp(-TWO_PI_I)


def uq_sl2_residual(p: XXZParams, probes: Sequence[complex] = (0.7 + 0.2j, -1.1 + 0.4j,
                                                               0.3 - 0.6j)) -> float:
    """Max defect of the quantum-algebra relations on exponential probes.

    [j0, j+-] = +-2 pi i gamma j+- holds as displayed; the raising/lowering
    commutator closes on the doubled argument,
    [j+, j-] = 2 (q - 1/q) sinh(2 j0), for this difference realization.
    """
    worst = 0.0
    for a in probes:
        f = ExpPoly({a: 1.0})
        lhs = j0(j_plus(f, p), p) - j_plus(j0(f, p), p)
        rhs = j_plus(f, p).scaled(TWO_PI_I * p.gamma)
        worst = max(worst, lhs.distance(rhs))
        lhs = j0(j_minus(f, p), p) - j_minus(j0(f, p), p)
        rhs = j_minus(f, p).scaled(-TWO_PI_I * p.gamma)
        worst = max(worst, lhs.distance(rhs))
        lhs = j_plus(j_minus(f, p), p) - j_minus(j_plus(f, p), p)
        # 2 (q - q^{-1}) sinh(2 j0) f = (q - q^{-1})(e^{2 gamma d} - e^{-2 gamma d}) f
        rhs = (f.shift(2 * p.gamma) - f.shift(-2 * p.gamma)).scaled(p.q - 1 / p.q)
        worst = max(worst, lhs.distance(rhs))
    return worst


# ---------------------------------------------------------------------------
# XXZ L-operator as difference operators in x
# ---------------------------------------------------------------------------

def xxz_l_operator(u: complex, p: XXZParams):
    """2x2 matrix of difference operators with shifts +-gamma."""
    gam_sv = SV_ETA          # the context's eta IS gamma
    ql = p.q ** p.ell
    eu = cmath.exp(TWO_PI_I * u)
    half_i = 1.0 / 2j

    def mk(upc, dnc, desc):
        return DiffOp((Term1(gam_sv, upc, desc + "+"),
                       Term1(-1 * gam_sv, dnc, desc + "-")))

    l11 = mk(lambda z: half_i * eu, lambda z: -half_i / eu, "L11")
    l22 = mk(lambda z: -half_i / eu, lambda z: half_i * eu, "L22")
    # j_- = e^{-2 pi i x}(q^l e^{gamma d} - q^{-l} e^{-gamma d})
    l12 = mk(lambda z: half_i * cmath.exp(-TWO_PI_I * z) * ql,
             lambda z: -half_i * cmath.exp(-TWO_PI_I * z) / ql, "L12")
    l21 = mk(lambda z: -half_i * cmath.exp(TWO_PI_I * z) / ql,
             lambda z: half_i * cmath.exp(TWO_PI_I * z) * ql, "L21")
    return ((l11, l12), (l21, l22))


def xxz_transfer_matrix(u: complex, p: XXZParams, N: int,
                        gens: Mapping[str, complex]) -> MultiDiffOp:
    lop = xxz_l_operator(u, p)
    site_ops = [[[lop[i][j].promote(s, N) for j in range(2)] for i in range(2)]
                for s in range(N)]
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
    return prod[0][0] + prod[1][1]


# ---------------------------------------------------------------------------
# XXZ Q-operator
# ---------------------------------------------------------------------------

def _log_qpoch(a: complex, q: complex, k: int) -> complex:
    """log (a; q)_k with structural zero handling."""
    lg = 0.0 + 0.0j
    for j in range(k):
        f = 1.0 - a * q ** j
        if abs(f) < 1e-13:
            return complex(-math.inf, 0.0)
        lg += cmath.log(f)
    return lg


def xxz_q_operator(sign: str, u_sv: ShiftVector, p: XXZParams, N: int,
                   gens: Mapping[str, complex], series_cut: int,
                   ctx: ModuliContext) -> MultiDiffOp:
    """Q^{+-}(u) built from q-gamma prefactors and the little-q-Jacobi
    series with operator argument q^{2(l+1)} e^{-2 gamma d}.

    The central modular-partner factor is omitted, as in the displayed
    operator.
    """
    if sign not in ("+", "-"):
        raise ConfigInvalid(f"sign must be '+' or '-', got {sign!r}")
    gam = p.gamma
    q2 = p.q ** 2
    u = u_sv.value(gens)
    u_eff = u if sign == "+" else -u
    u_eff_sv = u_sv if sign == "+" else -1 * u_sv
    ell = p.ell
    qq_inf = qpochhammer_inf(q2, q2, ctx)

    def log_qgamma2(x: complex) -> complex:
        # log Gamma_{q^2}(x); peel leading factors while |q^{2x}| > 1 so
        # the tail Pochhammer stays well-conditioned
        qx = cmath.exp(x * cmath.log(q2))
        steps = 0
        lg_extra = 0.0 + 0.0j
        while abs(qx) > 1.0 and steps < 400:
            lg_extra += cmath.log(1.0 - qx)
            qx *= q2
            steps += 1
        val = qpochhammer_inf(qx, q2, ctx)
        return (cmath.log(qq_inf) - (cmath.log(val) + lg_extra)
                + (1 - x) * cmath.log(1 - q2))

    def log_prefactor(zvec) -> complex:
        lg = -TWO_PI_I * N * ell * u_eff
        for i in range(N):
            xi = zvec[i]
            xn = zvec[(i + 1) % N] if sign == "+" else zvec[(i - 1) % N]
            d = (xi - xn) / (2 * gam)
            lg += log_qgamma2(d + u_eff / gam)
            lg -= log_qgamma2(u_eff / gam - ell)
            lg -= log_qgamma2(d - ell)
        return lg

    terms = []
    arg_base = cmath.exp((2 * (ell + 1)) * cmath.log(p.q))
    for code in _kvecs(N, series_cut + 1):
        def coeff(zvec, kvec=code):
            zvec = tuple(zvec)
            lg = log_prefactor(zvec)
            for j in range(N):
                xj = zvec[j]
                xn = zvec[(j + 1) % N] if sign == "+" else zvec[(j - 1) % N]
                k = kvec[j]
                a = cmath.exp(-2 * ell * cmath.log(p.q)) * cmath.exp(-2 * TWO_PI_I * u_eff)
                b = cmath.exp(-2 * ell * cmath.log(p.q)) * cmath.exp(TWO_PI_I * (xn - xj))
                c = q2 * cmath.exp(TWO_PI_I * (xn - xj - 2 * u_eff))
                num = _log_qpoch(a, q2, k) + _log_qpoch(b, q2, k)
                if num.real == -math.inf:
                    return 0.0 + 0.0j
                den = _log_qpoch(q2, q2, k) + _log_qpoch(c, q2, k)
                lg += num - den + k * cmath.log(arg_base)
            return safe_exp(lg)

        shifts = tuple(u_eff_sv + sv("lgam") - 2 * k * SV_ETA for k in code)
        terms.append(TermN(shifts, coeff, tuple(range(N)), f"Qx{sign}{code}"))
    core = MultiDiffOp(N, tuple(terms), truncated=True)
    if sign == "-":
        core = core.compose(MultiDiffOp.cyclic(N), gens)
    return core


def xxz_tq_coefficients(u: complex, p: XXZParams, N: int) -> tuple[complex, complex]:
    a = cmath.sin(2 * PI * (u - p.ell * p.gamma)) ** N
    b = cmath.sin(2 * PI * (u + p.ell * p.gamma)) ** N
    return a, b


# ---------------------------------------------------------------------------
# Elliptic -> XXZ modular limit of the L-operator
# ---------------------------------------------------------------------------

_MOD_SWAP = {1: 1, 2: 4, 3: 3, 4: 2}


def _log_theta_mod(a: int, w: complex, tau: complex,
                   ctx: ModuliContext) -> complex:
    """log theta_a(w | tau) through the modular law, stable for Im tau -> 0.

    theta_a(w|tau) = pref_a(tau) e^{-pi i w^2/tau} theta_{swap(a)}(w/tau | -1/tau).
    """
    from .special import log_theta

    pref = cmath.sqrt(1j / tau)
    lg = cmath.log(1j * pref if a == 1 else pref)
    lg -= 1j * PI * w * w / tau
    lg += log_theta(_MOD_SWAP[a], w / tau, -1 / tau, ctx)
    return lg


_ENT_SPECS = {
    (0, 0): ((1, 1, 1.0), (4, 4, 1.0)),
    (0, 1): ((2, 2, 1.0), (3, 3, 1.0)),
    (1, 0): ((2, 2, 1.0), (3, 3, -1.0)),
    (1, 1): ((1, 1, 1.0), (4, 4, -1.0)),
}


def _scaled_elliptic_entries(tau: complex, p: XXZParams, u: complex,
                             x: complex) -> dict:
    """Entry coefficients of sqrt(i tau/4) e^{i pi/(4 tau)} L(tau u) at
    z = tau x + 1/4, eta = tau gamma, evaluated through the modular law."""
    ctx = ModuliContext(tau=-1 / tau, eta=p.gamma)   # tolerance carrier
    ell = p.ell
    lam = tau * u
    eta_e = tau * p.gamma
    log_scale = 0.5 * cmath.log(1j * tau / 4.0) + 1j * PI / (4 * tau)
    z = tau * x + 0.25
    out = {}
    for (i, j), spec in _ENT_SPECS.items():
        for up in (True, False):
            v = 0.0 + 0.0j
            arg = (2 * z - 2 * ell * eta_e) if up else (-2 * z - 2 * ell * eta_e)
            ss = 1.0 if up else -1.0
            for th_lam, th_s, sgn in spec:
                v += 0.5 * sgn * ss * cmath.exp(
                    _log_theta_mod(th_lam, 2 * lam, tau, ctx)
                    + _log_theta_mod(th_s, arg, tau, ctx)
                    - _log_theta_mod(1, 2 * z, tau, ctx) + log_scale)
            out[(i, j, up)] = v
    return out


def elliptic_to_xxz_drift(tau_small: complex, p: XXZParams, u: complex,
                          xs: Sequence[complex]) -> tuple[float, float]:
    """(invariant_drift, gauge_drift) at a finite surrogate tau.

    The scaled elliptic coefficients match the six-vertex ones up to a
    scalar and a diagonal gauge that die off linearly in tau; the
    gauge-invariant entry cross-ratios (products of up and down
    coefficients, compared between entries) isolate the convention-free
    content.  gauge_drift is the raw entrywise deviation (with the
    negative square-root branch), the quantity for the halving test.
    """
    keys = [(0, 0), (0, 1), (1, 0), (1, 1)]
    inv_worst = 0.0
    raw_worst = 0.0
    lxxz = xxz_l_operator(u, p)
    for x in xs:
        ce = _scaled_elliptic_entries(tau_small, p, u, x)
        cx = {(i, j, up): lxxz[i][j].terms[0 if up else 1].coeff(x)
              for i in range(2) for j in range(2) for up in (True, False)}
        for i1 in range(4):
            for i2 in range(i1 + 1, 4):
                a, b = keys[i1], keys[i2]
                re = (ce[a + (True,)] * ce[a + (False,)]) / (
                    ce[b + (True,)] * ce[b + (False,)])
                rx = (cx[a + (True,)] * cx[a + (False,)]) / (
                    cx[b + (True,)] * cx[b + (False,)])
                inv_worst = max(inv_worst, abs(re - rx) / abs(rx))
        for key, v_x in cx.items():
            raw_worst = max(raw_worst, abs(-ce[key] - v_x) / max(abs(v_x), 1e-300))
    return inv_worst, raw_worst
