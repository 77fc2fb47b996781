"""Verification suites, deterministic configuration and report emission.

Every suite certifies one block of operator/function identities at desk
scale and returns per-check records carrying the residual, the tolerance it
was tested against and the parameters used.  Seeding is positional
(seed, suite, tag), so reports are reproducible bit-for-bit.
"""

from __future__ import annotations

import cmath
import json
import math
import os
import random
import time
import zlib
from dataclasses import dataclass, field
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Mapping, Sequence

from . import qop, vacua, xxz
from .combs import comb_residual, multicomb_lincomb, multicomb_residual
from .context import ModuliContext
from .errors import ConfigInvalid, GenericityViolation, PoleProximity
from .operators import (DiffOp, MultiDiffOp, Term1, operator_distance,
                        proportionality_constant)
from .series import (WSeriesSpec, bailey_partner, bailey_residual, ell_bracket,
                     ell_factorial, ell_pochhammer, is_balanced,
                     random_balanced_w10_9, w_series)
from .shifts import SV_ETA, sv
from .sklyanin import (SpinParams, elliptic_r_matrix, l_operator,
                       l_operator_factorized, m_matrix, m_matrix_display,
                       rll_sides, sklyanin_generator, spin_gens,
                       theta3_identity_check, w_ell)
from .special import (dedekind_eta, egamma, elliptic_gamma, gamma_r_const,
                      gamma_residue, gamma_shift_ratio, phi_ell, q_gamma,
                      basic_2phi1, theta, theta_bar, theta_space_element)

PI = math.pi

DEFAULT_SPIN = 0.23 + 0.11j
DEFAULT_LAMBDA = 0.19 + 0.05j

SUITE_IDS = ("theta", "gamma", "bailey", "sklyanin", "rll", "intertwine",
             "vacua", "preq", "tq", "qq_commute", "special_values",
             "wronskian", "n1", "xxz", "appendixB")


def _sub_seed(seed: int, *tags) -> int:
    data = repr((seed,) + tags).encode()
    return zlib.crc32(data) & 0x7FFFFFFF


@dataclass
class SuiteConfig:
    tau: complex = 0.10 + 1.00j
    eta: complex = 0.07 + 0.31j
    series_tol: float = 1e-12
    max_terms: int = 256
    generic_guard: float = 1e-4
    spin: complex = DEFAULT_SPIN
    N: int = 2
    boundary: str = "periodic"
    window: tuple = (12, 4)
    q_window: tuple = (3, 1)
    seed: int = 20260808
    suites: tuple = SUITE_IDS
    tolerances: dict = field(default_factory=dict)

    def context(self) -> ModuliContext:
        return ModuliContext(tau=self.tau, eta=self.eta,
                             series_tol=self.series_tol,
                             max_terms=self.max_terms,
                             generic_guard=self.generic_guard)

    def tolerance(self, suite: str, default: float) -> float:
        return float(self.tolerances.get(suite, default))


@dataclass
class CheckRecord:
    suite: str
    anchor: str
    params: str
    residual: float
    tolerance: float
    passed: bool
    skipped: bool = False

    def to_json(self):
        return {"suite": self.suite, "anchor": self.anchor,
                "params": self.params, "residual": self.residual,
                "tolerance": self.tolerance, "passed": self.passed,
                "skipped": self.skipped}


@dataclass
class VerificationReport:
    records: list
    seed: int
    config: dict
    wall_time: float
    environment: str

    @property
    def all_passed(self) -> bool:
        return all(r.passed or r.skipped for r in self.records)

    def to_json(self) -> dict:
        return {"seed": self.seed, "config": self.config,
                "wall_time": round(self.wall_time, 3),
                "environment": self.environment,
                "records": [r.to_json() for r in self.records]}

    def to_markdown(self) -> str:
        lines = ["# Verification report", "",
                 f"- seed: {self.seed}",
                 f"- wall time: {self.wall_time:.1f} s",
                 f"- environment: {self.environment}",
                 f"- config: `{json.dumps(self.config, sort_keys=True)}`", "",
                 "| suite | check | params | residual | tolerance | status |",
                 "|---|---|---|---|---|---|"]
        for r in self.records:
            status = "SKIP" if r.skipped else ("pass" if r.passed else "FAIL")
            lines.append(f"| {r.suite} | {r.anchor} | {r.params} | "
                         f"{r.residual:.3e} | {r.tolerance:.0e} | {status} |")
        lines.append("")
        return "\n".join(lines)


class _Checker:
    """Collects records for one suite, with genericity reseeding."""

    def __init__(self, suite: str, config: SuiteConfig):
        self.suite = suite
        self.config = config
        self.records: list[CheckRecord] = []

    def run(self, anchor: str, tolerance: float, fn: Callable[[random.Random], float],
            params: str = "", retries: int = 5):
        tol = self.config.tolerance(self.suite, tolerance)
        for attempt in range(retries + 1):
            rng = random.Random(_sub_seed(self.config.seed, self.suite, anchor, attempt))
            try:
                residual = float(fn(rng))
            except (GenericityViolation, PoleProximity):
                continue
            self.records.append(CheckRecord(self.suite, anchor, params,
                                            residual, tol, residual < tol))
            return
        self.records.append(CheckRecord(self.suite, anchor, params,
                                        math.nan, tol, False, skipped=True))


def _rand_z(rng, scale_re=0.45, scale_im=0.2) -> complex:
    return complex(rng.uniform(-scale_re, scale_re), rng.uniform(-scale_im, scale_im))


def _base_gens(config: SuiteConfig, spin: SpinParams, rng,
               extra: Mapping[str, complex] | None = None) -> dict:
    ctx = config.context()
    gens = spin_gens(spin, ctx)
    gens.update(extra or {})
    return gens


# ---------------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------------

def _suite_theta(config: SuiteConfig) -> list:
    ctx = config.context()
    tau = ctx.tau
    ck = _Checker("theta", config)

    def periods(rng):
        worst = 0.0
        for a in (1, 2, 3, 4):
            for _ in range(20):
                z = _rand_z(rng)
                t = theta(a, z, tau, ctx)
                s1 = (-1) ** (1 if a in (1, 2) else 0)
                r1 = abs(theta(a, z + 1, tau, ctx) - s1 * t)
                s2 = (-1) ** (1 if a in (1, 4) else 0)
                fac = s2 * cmath.exp(-1j * PI * tau - 2j * PI * z)
                r2 = abs(theta(a, z + tau, tau, ctx) - fac * t)
                worst = max(worst, (r1 + r2) / max(abs(t), abs(fac * t)))
        return worst

    ck.run("theta quasi-periodicity", 1e-10, periods, "a=1..4, 20 pts")

    def modular(rng):
        swap = {1: 1, 2: 4, 3: 3, 4: 2}
        worst = 0.0
        for a in (1, 2, 3, 4):
            for _ in range(10):
                z = _rand_z(rng)
                pref = cmath.sqrt(1j / tau) * cmath.exp(-1j * PI * z * z / tau)
                if a == 1:
                    pref *= 1j
                lhs = theta(a, z, tau, ctx)
                rhs = pref * theta(swap[a], z / tau, -1 / tau, ctx)
                worst = max(worst, abs(lhs - rhs) / abs(lhs))
        return worst

    ck.run("theta modular law", 1e-9, modular, "a=1..4, 10 pts")

    def odd(rng):
        return abs(theta(1, 0, tau, ctx))

    ck.run("theta1 odd at 0", 1e-12, odd)

    def eta_checks(rng):
        e = dedekind_eta(tau, ctx)
        ei = dedekind_eta(1j, ctx)
        r1 = abs(ei.imag) + max(0.0, -ei.real)
        # discriminant consistency: eta^3 = theta2 theta3 theta4 (0) / 2
        prod = (theta(2, 0, tau, ctx) * theta(3, 0, tau, ctx)
                * theta(4, 0, tau, ctx)) / 2.0
        r2 = abs(e ** 3 - prod) / abs(prod)
        return max(r1, r2)

    ck.run("dedekind eta", 1e-9, eta_checks)

    def order_spaces(rng):
        import numpy as np
        worst = 0.0
        # constructed elements satisfy their functional equations
        for n, nroots in ((2, 1), (4, 2)):
            roots = [_rand_z(rng) for _ in range(nroots)]
            el = theta_space_element(n, roots, ctx)
            for _ in range(5):
                worst = max(worst, el.quasi_periodicity_residual(_rand_z(rng)))
        # thetabar4, thetabar3 satisfy the order-2 equations
        for a in (3, 4):
            f = lambda z, a=a: theta_bar(a, z, ctx)
            for _ in range(5):
                z = _rand_z(rng)
                v = f(z)
                r1 = abs(f(z + 1) - v) / abs(v)
                fac = cmath.exp(-2j * PI * tau - 4j * PI * z)
                r2 = abs(f(z + tau) - fac * v) / max(abs(v), abs(fac * v))
                worst = max(worst, r1, r2)
        # sampled Gram matrix of n general order-n elements has full rank
        # (roots summing to zero, not necessarily the even pairing)
        for n in (2, 4):
            els = []
            for _ in range(n):
                roots = [_rand_z(rng) for _ in range(n - 1)]
                roots.append(-sum(roots))

                def el(z, roots=tuple(roots)):
                    val = 1.0 + 0.0j
                    for r in roots:
                        val *= theta(1, z - r, tau, ctx)
                    return val

                els.append(el)
            pts = [_rand_z(rng) for _ in range(2 * n + 2)]
            g = np.array([[e(p) for p in pts] for e in els])
            sing = np.linalg.svd(g, compute_uv=False)
            if sing[-1] <= 1e-8 * sing[0]:
                worst = max(worst, 1.0)
            # and adding one more element must drop the rank (dim = n)
            extra_roots = [_rand_z(rng) for _ in range(n - 1)]
            extra_roots.append(-sum(extra_roots))

            def extra(z, roots=tuple(extra_roots)):
                val = 1.0 + 0.0j
                for r in roots:
                    val *= theta(1, z - r, tau, ctx)
                return val

            g2 = np.array([[e(p) for p in pts] for e in els + [extra]])
            sing2 = np.linalg.svd(g2, compute_uv=False)
            worst = max(worst, sing2[-1] / sing2[0])
        return worst

    ck.run("theta-space elements", 1e-9, order_spaces, "orders 2 and 4")
    return ck.records


def _suite_gamma(config: SuiteConfig) -> list:
    ctx = config.context()
    tau, eta = ctx.tau, ctx.eta
    taup = 2 * eta
    ck = _Checker("gamma", config)

    def shift_laws(rng):
        worst = 0.0
        for _ in range(20):
            z = _rand_z(rng)
            g0 = elliptic_gamma(z, tau, taup, ctx)
            r1 = abs(elliptic_gamma(z + 1, tau, taup, ctx) - g0) / abs(g0)
            fac2 = -1j * cmath.exp(-1j * PI * taup / 6) / dedekind_eta(taup, ctx) \
                * cmath.exp(1j * PI * z) * theta(1, z, taup, ctx)
            r2 = abs(elliptic_gamma(z + tau, tau, taup, ctx) - fac2 * g0) / abs(fac2 * g0)
            fac3 = -1j * cmath.exp(-1j * PI * tau / 6) / dedekind_eta(tau, ctx) \
                * cmath.exp(1j * PI * z) * theta(1, z, tau, ctx)
            r3 = abs(elliptic_gamma(z + taup, tau, taup, ctx) - fac3 * g0) / abs(fac3 * g0)
            refl = 1j * cmath.exp(1j * PI * taup / 6) * dedekind_eta(taup, ctx)
            lhs = g0 * elliptic_gamma(taup - z, tau, taup, ctx) \
                * cmath.exp(1j * PI * z) * theta(1, z, taup, ctx)
            r4 = abs(lhs - refl) / abs(refl)
            worst = max(worst, r1, r2, r3, r4)
        return worst

    ck.run("gamma shift and reflection laws", 1e-10, shift_laws, "20 pts")

    def modular_gamma(rng):
        # the transformed moduli taup/tau, -tau/taup need positive imaginary
        # parts, i.e. arg(taup) > arg(tau); test on an admissible pair
        tau_m, taup_m = 0.30 + 0.90j, -0.10 + 0.80j
        worst = 0.0
        for _ in range(10):
            z = complex(rng.uniform(0.05, 0.45), rng.uniform(0.05, 0.3))
            p3 = (-(z ** 3) / (3 * tau_m * taup_m)
                  + (tau_m + taup_m - 1) * z * z / (2 * tau_m * taup_m)
                  - (tau_m ** 2 + taup_m ** 2 + 3 * tau_m * taup_m
                     - 3 * tau_m - 3 * taup_m + 1) * z / (6 * tau_m * taup_m)
                  - (tau_m + taup_m - 1) * (tau_m + taup_m - tau_m * taup_m)
                  / (12 * tau_m * taup_m))
            lhs = elliptic_gamma(z, tau_m, taup_m, ctx)
            rhs = (cmath.exp(1j * PI * p3)
                   * elliptic_gamma(z / tau_m, -1 / tau_m, taup_m / tau_m, ctx)
                   / elliptic_gamma((z - tau_m) / taup_m, -tau_m / taup_m,
                                    -1 / taup_m, ctx))
            worst = max(worst, abs(lhs - rhs) / abs(lhs))
        return worst

    ck.run("gamma modular law", 1e-8, modular_gamma, "10 pts")

    def ratios(rng):
        worst = 0.0
        for k in (0, 3, -2, 5, -4):
            x = _rand_z(rng) + 0.3
            r1 = gamma_shift_ratio(x, k, ctx)
            r2 = egamma(x + 2 * k * eta, ctx) / egamma(x, ctx)
            worst = max(worst, abs(r1 - r2) / abs(r2))
        return worst

    ck.run("gamma shift-ratio products", 1e-10, ratios, "k in {0,3,-2,5,-4}")

    def residues(rng):
        worst = 0.0
        # closed form vs extrapolated numeric residue
        for k in (0, 1):
            rk = gamma_residue(k, ctx)
            e1, e2 = 1e-4, 1e-5
            n1 = e1 * elliptic_gamma(-2 * k * eta + e1, tau, taup, ctx, guard=0.0)
            n2 = e2 * elliptic_gamma(-2 * k * eta + e2, tau, taup, ctx, guard=0.0)
            extr = (n2 * e1 - n1 * e2) / (e1 - e2)
            worst = max(worst, abs(rk - extr) / abs(rk))
        # ratio of consecutive residues matches the closed-form ratio
        ratio = gamma_residue(2, ctx) / gamma_residue(1, ctx)
        closed = (-1) * cmath.exp(1j * PI * eta * 3) * gamma_r_const(ctx) \
            / theta(1, 4 * eta, tau, ctx)
        worst = max(worst, abs(ratio - closed) / abs(closed))
        return worst

    ck.run("gamma residues", 1e-6, residues, "k=0,1 extrapolation; k=2 ratio")

    def phi_checks(rng):
        worst = 0.0
        z = _rand_z(rng)
        worst = max(worst, abs(phi_ell(z, 0, ctx) - theta(1, z, tau, ctx))
                    / abs(theta(1, z, tau, ctx)))
        p1 = theta(1, z - 2 * eta, tau, ctx) * theta(1, z, tau, ctx) \
            * theta(1, z + 2 * eta, tau, ctx)
        worst = max(worst, abs(phi_ell(z, 1, ctx) - p1) / abs(p1))
        ell = complex(config.spin)
        for _ in range(20):
            z = _rand_z(rng)
            lhs = theta(1, z - 2 * ell * eta, tau, ctx) * phi_ell(z + 2 * eta, ell, ctx)
            rhs = theta(1, z + 2 * (ell + 1) * eta, tau, ctx) * phi_ell(z, ell, ctx)
            worst = max(worst, abs(lhs - rhs) / max(abs(lhs), abs(rhs)))
        return worst

    ck.run("phi_ell difference equation", 1e-9, phi_checks, "l=0,1 and generic")

    def qfn(rng):
        worst = abs(q_gamma(1, 0.3, ctx) - 1.0)
        worst = max(worst, abs(q_gamma(2, 0.3, ctx) - 1.0))
        worst = max(worst, abs(basic_2phi1(0.3, 0.4, 0.5, 0.3, 0.0, ctx) - 1.0))
        q = 0.25 + 0.1j
        a = 1 / q
        val = basic_2phi1(a, 0.4, 0.6, q, 0.3 + 0.1j, ctx)
        two = 1.0 + (1 - a) * (1 - 0.4) * (0.3 + 0.1j) / ((1 - q) * (1 - 0.6))
        worst = max(worst, abs(val - two) / abs(two))
        return worst

    ck.run("q-gamma and 2phi1 basics", 1e-10, qfn)
    return ck.records


def _suite_bailey(config: SuiteConfig) -> list:
    ctx = config.context()
    ck = _Checker("bailey", config)

    def draws(rng):
        worst = 0.0
        for trial in range(50):
            n = rng.randint(0, 5)
            a1, alphas = random_balanced_w10_9(rng, n)
            worst = max(worst, bailey_residual(a1, alphas, n, ctx))
        return worst

    ck.run("Bailey transformation, 50 draws n<=5", 1e-8, draws)

    def involution(rng):
        a1, alphas = random_balanced_w10_9(rng, 3)
        b1, betas = bailey_partner(a1, alphas)
        c1, gammas = bailey_partner(b1, betas)
        worst = abs(c1 - a1)
        worst = max(worst, max(abs(g - a) for g, a in zip(gammas, alphas)))
        spec = WSeriesSpec(r=9, alpha1=b1, alphas=betas, argument=1.0, ctx=ctx,
                           termination=3)
        if not is_balanced(spec):
            worst = max(worst, 1.0)
        return worst

    ck.run("partner map is a balanced involution", 1e-12, involution)

    def brackets(rng):
        worst = 0.0
        f3 = ell_factorial(3, ctx)
        prod = ell_bracket(1, ctx) * ell_bracket(2, ctx) * ell_bracket(3, ctx)
        worst = max(worst, abs(f3 - prod) / abs(prod))
        x = _rand_z(rng)
        lhs = ell_pochhammer(x, 5, ctx)
        rhs = ell_pochhammer(x, 4, ctx) * ell_bracket(x + 4, ctx)
        worst = max(worst, abs(lhs - rhs) / abs(rhs))
        # terminating sums are exact finite sums: independent summation
        # order (reversed) reproduces them
        a1, alphas = random_balanced_w10_9(rng, 3)
        spec = WSeriesSpec(9, a1, alphas, 1.0, ctx, termination=3)
        v1 = w_series(spec)
        from .series import w_term
        v2 = sum(w_term(spec, k) for k in reversed(range(4)))
        worst = max(worst, abs(v1 - v2) / abs(v1))
        return worst

    ck.run("elliptic factorial arithmetic", 1e-11, brackets)
    return ck.records


def _suite_sklyanin(config: SuiteConfig) -> list:
    ctx = config.context()
    tau, eta = ctx.tau, ctx.eta
    ck = _Checker("sklyanin", config)

    for ell in (0.5, 1.0, complex(config.spin)):
        spin = SpinParams(ell)
        gens = spin_gens(spin, ctx)
        s = [sklyanin_generator(a, spin, ctx) for a in range(4)]

        def quad_relations(rng, s=s, gens=gens):
            def i_ab(a, b):
                return theta(a + 1, 0, tau, ctx) * theta(b + 1, 2 * eta, tau, ctx)

            worst = 0.0
            for al, be, ga in ((1, 2, 3), (2, 3, 1), (3, 1, 2)):
                lhs = s[al].compose(s[0], gens).scaled((-1) ** (al + 1) * i_ab(al, 0))
                rhs = s[be].compose(s[ga], gens).scaled(i_ab(be, ga)) \
                    - s[ga].compose(s[be], gens).scaled(i_ab(ga, be))
                worst = max(worst, operator_distance(
                    lhs, rhs, ctx, gens, window=(8, 3), probes=3,
                    seed=_sub_seed(config.seed, "quadrel", str(ell), al)))
                lhs2 = s[0].compose(s[al], gens).scaled((-1) ** (al + 1) * i_ab(al, 0))
                rhs2 = s[be].compose(s[ga], gens).scaled(i_ab(ga, be)) \
                    - s[ga].compose(s[be], gens).scaled(i_ab(be, ga))
                worst = max(worst, operator_distance(
                    lhs2, rhs2, ctx, gens, window=(8, 3), probes=3,
                    seed=_sub_seed(config.seed, "quadrelb", str(ell), al)))
            return worst

        ck.run(f"Sklyanin relations l={ell}", 1e-9, quad_relations)

        def transp(rng, s=s, spin=spin, gens=gens):
            worst = 0.0
            for a in range(4):
                lhs = s[a].transpose(gens)
                sp = sklyanin_generator(a, spin.reflected(), ctx)
                sign = 1.0 if a == 0 else -1.0
                rhs = sp.lmul_function(lambda z: theta(1, 2 * z, tau, ctx)) \
                    .rmul_function(lambda z: 1.0 / theta(1, 2 * z, tau, ctx), gens) \
                    .scaled(sign)
                worst = max(worst, operator_distance(
                    lhs, rhs, ctx, gens, window=(8, 2), probes=2,
                    seed=_sub_seed(config.seed, "transp", str(ell), a)))
            return worst

        ck.run(f"generator transposition law l={ell}", 1e-9, transp)

    def dual_l(rng):
        spin = SpinParams(complex(config.spin))
        gens = spin_gens(spin, ctx)
        lam = _rand_z(rng)
        l1 = l_operator(lam, spin, ctx)
        l2 = l_operator_factorized(lam, spin, ctx)
        worst = 0.0
        for i in range(2):
            for j in range(2):
                worst = max(worst, operator_distance(
                    l1[i, j], l2[i, j], ctx, gens, window=(8, 2), probes=2,
                    seed=_sub_seed(config.seed, "lfact", i, j)))
        lam2 = _rand_z(rng)
        lt = l_operator(-lam2 + 0.5 * (1 + tau), spin, ctx)
        l0 = l_operator(lam2, spin, ctx)
        fac = -cmath.exp(-1j * PI * tau + 4j * PI * lam2)
        for i in range(2):
            for j in range(2):
                worst = max(worst, operator_distance(
                    lt[i, j], l0[j, i].scaled(fac), ctx, gens, window=(8, 2),
                    probes=2, seed=_sub_seed(config.seed, "ltrans", i, j)))
        return worst

    ck.run("L factorized form and transposition", 1e-9, dual_l)

    def finite_rep(rng):
        import numpy as np
        spin = SpinParams(0.5)
        gens = spin_gens(spin, ctx)
        basis = [lambda z: theta_bar(4, z, ctx), lambda z: theta_bar(3, z, ctx)]
        zs = [_rand_z(rng) for _ in range(3)]
        amat = np.array([[b(z) for b in basis] for z in zs])
        c_norm = theta(1, 2 * eta, tau, ctx)
        from .sklyanin import PAULI
        worst = 0.0
        for a in range(4):
            op = sklyanin_generator(a, spin, ctx)
            m = np.zeros((2, 2), dtype=complex)
            for j in range(2):
                vals = np.array([op.apply_function(basis[j], z, gens)[0] for z in zs])
                m[:, j] = np.linalg.lstsq(amat, vals, rcond=None)[0]
            ref = c_norm * ((-1j) ** (1 if a == 2 else 0)) \
                / theta(a + 1, eta, tau, ctx) * PAULI[a]
            worst = max(worst, np.max(np.abs(m - ref)) / np.max(np.abs(ref)))
        return worst

    ck.run("spin-1/2 matrices (Pauli form, theta1(2eta) normalization)",
           1e-9, finite_rep)
    return ck.records


def _suite_rll(config: SuiteConfig) -> list:
    ctx = config.context()
    ck = _Checker("rll", config)
    from .operators import matrix_operator_distance

    for ell in (0.5, 1.0, complex(config.spin)):
        def rll(rng, ell=ell):
            spin = SpinParams(ell)
            gens = spin_gens(spin, ctx)
            worst = 0.0
            for trial in range(3):
                lam, mu = _rand_z(rng), _rand_z(rng)
                lhs, rhs = rll_sides(lam, mu, spin, ctx, gens)
                worst = max(worst, matrix_operator_distance(
                    lhs, rhs, ctx, gens, window=(6, 3), probes=2,
                    seed=_sub_seed(config.seed, "rll", str(ell), trial)))
            return worst

        ck.run(f"RLL = LLR l={ell}", 1e-8, rll, "3 random (lam, mu)")

    def r_weights(rng):
        import numpy as np
        worst = 0.0
        r = elliptic_r_matrix(-ctx.eta / 2, ctx)
        from .sklyanin import PAULI
        # the sigma0 (x) sigma0 component vanishes at lam = -eta/2
        comp = np.trace(np.kron(PAULI[0], PAULI[0]).conj().T @ r) / 4.0
        worst = max(worst, abs(comp) / np.max(np.abs(r)))
        lam = _rand_z(rng)
        for a in range(4):
            w1 = theta(a + 1, 2 * lam + ctx.eta, ctx.tau, ctx)
            w2 = theta(a + 1, -(2 * lam + ctx.eta), ctx.tau, ctx)
            sgn = -1.0 if a == 0 else 1.0  # theta1 odd, the others even
            worst = max(worst, abs(w1 - sgn * w2) / abs(w1))
        return worst

    ck.run("R-matrix weight structure", 1e-9, r_weights)
    return ck.records


def _suite_intertwine(config: SuiteConfig) -> list:
    ctx = config.context()
    ck = _Checker("intertwine", config)

    for ell in (0.5, 1.0, 1.5):
        def s3(rng, ell=ell):
            spin = SpinParams(ell)
            gens = spin_gens(spin, ctx)
            w = w_ell(spin, ctx, form="finite")
            worst = 0.0
            for a in range(4):
                s_lo = sklyanin_generator(a, spin, ctx)
                s_hi = sklyanin_generator(a, spin.reflected(), ctx)
                worst = max(worst, operator_distance(
                    s_hi.compose(w, gens), w.compose(s_lo, gens), ctx, gens,
                    window=(11, 6), probes=2,
                    seed=_sub_seed(config.seed, "s3", str(ell), a)))
            return worst

        ck.run(f"intertwining relation l={ell}", 1e-8, s3)

    def s3_series(rng):
        spin = SpinParams(complex(config.spin))
        gens = spin_gens(spin, ctx)
        w = w_ell(spin, ctx, form="series", series_cut=14)
        worst = 0.0
        for a in range(4):
            s_lo = sklyanin_generator(a, spin, ctx)
            s_hi = sklyanin_generator(a, spin.reflected(), ctx)
            worst = max(worst, operator_distance(
                s_hi.compose(w, gens), w.compose(s_lo, gens), ctx, gens,
                window=(5, 2), probes=2, check_reach=False,
                seed=_sub_seed(config.seed, "s3ser", a)))
        return worst

    ck.run("intertwining, truncated series at generic spin", 1e-8, s3_series)

    def finite_vs_series(rng):
        spin = SpinParams(1.0)
        gens = spin_gens(spin, ctx)
        wf = w_ell(spin, ctx, form="finite")
        ws = w_ell(spin, ctx, form="series", series_cut=10)
        return operator_distance(wf, ws, ctx, gens, window=(10, 4), probes=2,
                                 seed=_sub_seed(config.seed, "wfs"))

    ck.run("finite vs series intertwiner at l=1", 1e-10, finite_vs_series)

    def annihilation(rng):
        worst = 0.0
        for ell in (0.5, 1.0):
            spin = SpinParams(ell)
            gens = spin_gens(spin, ctx)
            w = w_ell(spin, ctx, form="finite")
            n = spin.two_ell_int * 2
            if ell == 0.5:
                funcs = [lambda z: theta_bar(4, z, ctx), lambda z: theta_bar(3, z, ctx)]
            else:
                funcs = []
                for _ in range(3):
                    roots = [_rand_z(rng) for _ in range(n // 2)]
                    funcs.append(theta_space_element(n, roots, ctx))
            for f in funcs:
                for _ in range(20):
                    z = _rand_z(rng)
                    val, scale = w.apply_function(f, z, gens)
                    worst = max(worst, abs(val) / scale)
        return worst

    ck.run("intertwiner annihilates the finite modules", 1e-9, annihilation)

    def t5(rng):
        spin = SpinParams(complex(config.spin))
        gens = spin_gens(spin, ctx)
        chain = vacua.ChainConfig(N=2, spin=spin, ctx=ctx)
        chain_r = vacua.ChainConfig(N=2, spin=spin.reflected(), ctx=ctx)
        lam = _rand_z(rng)
        tl = vacua.transfer_matrix(lam, chain)
        tr = vacua.transfer_matrix(lam, chain_r)

        from .sklyanin import log_varphi

        def phi_prod(zvec):
            lg = sum(log_varphi(zvec[i], zvec[(i + 1) % 2], spin, ctx)
                     for i in range(2))
            return cmath.exp(lg)

        pp = MultiDiffOp.identity(2).lmul_function(phi_prod)
        return operator_distance(tl.compose(pp, gens), pp.compose(tr, gens),
                                 ctx, gens, window=(6, 2), probes=3,
                                 seed=_sub_seed(config.seed, "t5"))

    ck.run("transfer-matrix intertwining via varphi, N=2", 1e-8, t5)
    return ck.records


def _suite_appendix_b(config: SuiteConfig) -> list:
    ctx = config.context()
    ck = _Checker("appendixB", config)

    def identity_checks(rng):
        worst = theta3_identity_check(1, SpinParams(1.0), 0, ctx, rng=rng)
        worst = max(worst, theta3_identity_check(
            2, SpinParams(complex(config.spin)), 2, ctx, rng=rng))
        return worst

    ck.run("four-term theta identity, 20 random points", 1e-9, identity_checks)

    def anchors(rng):
        spin = SpinParams(complex(config.spin))
        ell, eta = spin.ell, ctx.eta
        k = 1
        pts = [0.0, -2 * k * eta, (ell - k + 1) * eta]
        return theta3_identity_check(k, spin, 0, ctx, zs=pts)

    ck.run("three anchor points", 1e-10, anchors)

    def m_entries(rng):
        import numpy as np
        spin = SpinParams(complex(config.spin))
        lam = _rand_z(rng)
        mm = m_matrix(lam, spin, ctx)
        md = m_matrix_display(lam, spin, ctx)
        worst = 0.0
        for _ in range(4):
            z1, z2 = _rand_z(rng), _rand_z(rng)
            a, b = mm(z1, z2), md(z1, z2)
            worst = max(worst, np.max(np.abs(a - b)) / np.max(np.abs(a)))
        # strip the spin-dependent theta factor; the remainder must be
        # spin-independent
        spin2 = SpinParams(0.4 + 0.07j)
        md2 = m_matrix_display(lam, spin2, ctx)
        z1, z2 = _rand_z(rng), _rand_z(rng)
        m1, m2 = md(z1, z2), md2(z1, z2)
        for i in (1, 2):
            for kk in (1, 2):
                si = -1.0 if i == 1 else 1.0
                sk = -1.0 if kk == 1 else 1.0
                t1 = theta(1, z1 + si * sk * z2 + si * 2 * spin.ell * ctx.eta,
                           ctx.tau, ctx)
                t2 = theta(1, z1 + si * sk * z2 + si * 2 * spin2.ell * ctx.eta,
                           ctx.tau, ctx)
                c1 = m1[i - 1, kk - 1] / t1
                c2 = m2[i - 1, kk - 1] / t2
                worst = max(worst, abs(c1 - c2) / abs(c1))
        return worst

    ck.run("two-site M matrix: V route, display, spin split", 1e-9, m_entries)

    def local_rule(rng):
        from .sklyanin import varphi
        spin = SpinParams(complex(config.spin))
        eta, tau = ctx.eta, ctx.tau
        worst = 0.0
        for e1 in (1, -1):
            for e2 in (1, -1):
                z1, z2 = _rand_z(rng), _rand_z(rng)
                lhs = varphi(z1 + e1 * eta, z2 + e2 * eta, spin, ctx)
                i1 = 1 if e1 == 1 else 2
                i2 = 1 if e2 == 1 else 2
                num = theta(1, z1 + (-1) ** (i1 + i2) * z2
                            - 2 * (-1) ** i1 * (spin.ell + 1) * eta, tau, ctx)
                den = theta(1, z1 + (-1) ** (i1 + i2) * z2
                            + 2 * (-1) ** i1 * spin.ell * eta, tau, ctx)
                rhs = num / den * varphi(z1, z2, spin, ctx)
                worst = max(worst, abs(lhs - rhs) / max(abs(lhs), abs(rhs)))
        return worst

    ck.run("local commutation rule for varphi, four sign cases", 1e-9, local_rule)
    return ck.records


def _suite_vacua(config: SuiteConfig) -> list:
    ctx = config.context()
    tau, eta = ctx.tau, ctx.eta
    spin = SpinParams(complex(config.spin))
    ck = _Checker("vacua", config)
    zsv, xsv, lsv = sv("zeta1"), sv("zeta2"), sv("lam")

    def draw_gens(rng):
        return _base_gens(config, spin, rng, {
            "zeta1": _rand_z(rng), "zeta2": _rand_z(rng), "lam": _rand_z(rng)})

    def scprod_orth(rng):
        worst = 0.0
        import numpy as np
        for _ in range(20):
            zeta, xi = _rand_z(rng), _rand_z(rng)
            lhs = vacua.EdgeVector(xi, ctx).bra() @ vacua.EdgeVector(zeta, ctx).perp()
            rhs = vacua.edge_pairing(xi, zeta, ctx)
            worst = max(worst, abs(lhs - rhs) / abs(rhs))
            l2 = vacua.EdgeVector(zeta + 0.5 * (1 + tau), ctx).ket()
            r2 = cmath.exp(-1j * PI * tau / 2 - 2j * PI * zeta) \
                * vacua.EdgeVector(zeta, ctx).perp()
            worst = max(worst, float(np.max(np.abs(l2 - r2)) / np.max(np.abs(r2))))
        return worst

    ck.run("edge pairing and orthogonality laws", 1e-10, scprod_orth, "20 pts")

    def k_op(rng):
        gens = draw_gens(rng)
        zeta, xi, lam = gens["zeta1"], gens["zeta2"], gens["lam"]
        k1 = vacua.k_operator(zeta, xi, lam, spin, ctx)
        k2 = vacua.k_from_l(zeta, xi, lam, spin, ctx)
        # the assembled row-vector form equals -2 times the closed form
        worst = operator_distance(k2.scaled(-0.5), k1, ctx, gens, window=(8, 2),
                                  probes=2, seed=_sub_seed(config.seed, "kop"))
        xr = vacua.xr_comb("+", zsv, xsv, lsv, spin, ctx, gens, 14)
        worst = max(worst, vacua.annihilation_residual(k1, xr.comb, gens))
        xl = vacua.xl_comb("+", lsv, zsv, xsv, spin, ctx, gens, 14)
        worst = max(worst, vacua.annihilation_residual(k1, xl.comb, gens,
                                                       from_right=True))
        return worst

    ck.run("K operator: closed form and kernel annihilation", 1e-9, k_op)

    def mero(rng):
        gens = draw_gens(rng)
        zeta, xi, lam = gens["zeta1"], gens["zeta2"], gens["lam"]
        worst = 0.0
        for _ in range(10):
            z = _rand_z(rng)
            t1 = vacua.rho_coeff(z, zeta, xi, lam, spin, ctx) \
                * vacua.x_meromorphic("R", z + eta, zeta, xi, lam, spin, ctx)
            t2 = vacua.rho_coeff(-z, zeta, xi, lam, spin, ctx) \
                * vacua.x_meromorphic("R", z - eta, zeta, xi, lam, spin, ctx)
            worst = max(worst, abs(t1 + t2) / max(abs(t1), abs(t2)))
            t3 = vacua.rho_coeff(-z - eta, zeta, xi, lam, spin, ctx) \
                * vacua.x_meromorphic("L", z + eta, zeta, xi, lam, spin, ctx)
            t4 = vacua.rho_coeff(z - eta, zeta, xi, lam, spin, ctx) \
                * vacua.x_meromorphic("L", z - eta, zeta, xi, lam, spin, ctx)
            worst = max(worst, abs(t3 + t4) / max(abs(t3), abs(t4)))
        ratios = []
        for _ in range(5):
            z = _rand_z(rng)
            ratios.append(vacua.x_meromorphic("R", z, zeta, xi, lam, spin, ctx)
                          / vacua.x_meromorphic("R", z, xi, zeta, -lam, spin, ctx))
        spread = max(abs(r - ratios[0]) for r in ratios) / abs(ratios[0])
        return max(worst, spread)

    ck.run("meromorphic solutions: difference equations and swap", 1e-9, mero)

    def comb_construction(rng):
        gens = draw_gens(rng)
        zeta, xi, lam = gens["zeta1"], gens["zeta2"], gens["lam"]
        lm = lam - spin.ell * eta
        xr = vacua.xr_comb("+", zsv, xsv, lsv, spin, ctx, gens, 12)
        scale = xr.comb.max_abs()
        worst = 0.0
        for k in (0, 1):
            z0 = xi - lm - eta - 2 * k * eta
            v = vacua.x_meromorphic("R", z0, zeta, xi, lam, spin, ctx, guard=0.0)
            worst = max(worst, abs(v) / scale)
        # E2 swap laws are exact coefficient identities
        xrm = vacua.xr_comb("-", zsv, xsv, lsv, spin, ctx, gens, 10)
        xrs = vacua.xr_comb("+", xsv, zsv, -1 * lsv, spin, ctx, gens, 10)
        worst = max(worst, comb_residual(xrm.comb, xrs.comb))
        xlm = vacua.xl_comb("-", lsv, zsv, xsv, spin, ctx, gens, 10)
        xls = vacua.xl_comb("+", -1 * lsv, xsv, zsv, spin, ctx, gens, 10)
        worst = max(worst, comb_residual(xlm.comb, xls.comb))
        return worst

    ck.run("vacuum combs: truncation zeros and swap laws", 1e-8, comb_construction)

    def residue_oracle(rng):
        gens = draw_gens(rng)
        zeta, xi, lam = gens["zeta1"], gens["zeta2"], gens["lam"]
        lp = lam + spin.ell * eta
        xl = vacua.xl_comb("+", lsv, zsv, xsv, spin, ctx, gens, 4)
        worst = 0.0
        for k in (0, 1):
            zk = zeta + lp - 2 * k * eta
            ana = xl.comb.coeffs[k]
            ests = []
            for ep in (1e-4, 1e-5):
                v = ep * cmath.exp(vacua.log_x_left(zk + ep, zeta, xi, lam, spin,
                                                    ctx, guard=0.0))
                ests.append(v)
            extr = (ests[1] * 1e-4 - ests[0] * 1e-5) / (1e-4 - 1e-5)
            worst = max(worst, abs(ana - extr) / abs(ana))
        return worst

    ck.run("analytic residues vs epsilon extrapolation oracle", 1e-6,
           residue_oracle, "k=0,1")

    def propagation(rng):
        worst = 0.0
        for draw in range(5):
            gens = draw_gens(rng)
            for rel in ("R4", "L4", "R5", "L5"):
                for sign in ("+", "-"):
                    worst = max(worst, vacua.pair_propagation_residual(
                        rel, sign, zsv, xsv, lsv, spin, ctx, gens, window=12))
        return worst

    ck.run("pair propagation R4/L4/R5/L5, both signs, 5 draws", 1e-8, propagation)

    def triang(rng):
        gens = draw_gens(rng)
        zeta, xi, lam = gens["zeta1"], gens["zeta2"], gens["lam"]
        lp, lm = lam + spin.ell * eta, lam - spin.ell * eta
        lp_ops = vacua.gauged_l_entries(zeta, xi, lam, spin, ctx)
        xr = vacua.xr_comb("+", zsv, xsv, lsv, spin, ctx, gens, 14).comb
        worst = vacua.annihilation_residual(lp_ops[0][1], xr, gens)
        xrp = vacua.xr_comb("+", zsv, xsv, lsv + SV_ETA, spin, ctx, gens, 14).comb
        xrm = vacua.xr_comb("+", zsv, xsv, lsv - SV_ETA, spin, ctx, gens, 14).comb
        edge_phase = cmath.exp(-2j * PI * (zeta - xi))
        out11 = lp_ops[0][0].apply(xr, gens)
        ref11 = xrp.scaled(edge_phase * theta(1, 2 * lm, tau, ctx))
        worst = max(worst, comb_residual(out11, ref11))
        out22 = lp_ops[1][1].apply(xr, gens)
        fac22 = theta_bar(4, zeta, ctx) / theta_bar(4, xi, ctx) \
            * theta(1, 2 * lp, tau, ctx) / edge_phase
        worst = max(worst, comb_residual(out22, xrm.scaled(fac22)))
        # twisted gauge of sigma1 is lower triangular
        g1 = vacua.gauge_matrix(zeta + 0.5, ctx)
        g0inv = vacua.gauge_matrix_inv(zeta, ctx)
        import numpy as np
        sig1p = g1 @ np.array([[0.0, 1.0], [1.0, 0.0]]) @ g0inv
        worst = max(worst, abs(sig1p[0, 1]) / np.max(np.abs(sig1p)))
        return worst

    ck.run("gauge triangularity and twisted sigma1'", 1e-8, triang)

    def global_relations(rng):
        worst = 0.0
        for boundary, signs in (("periodic", (1.0, 1.0)),
                                ("twisted_sigma1", (-1.0, 1.0))):
            chain = vacua.ChainConfig(N=2, spin=spin, ctx=ctx, boundary=boundary)
            gens = chain.edge_gens({"lam": _rand_z(rng)}, rng)
            lam = gens["lam"]
            thm = theta(1, 2 * lam - 2 * spin.ell * eta, tau, ctx) ** 2
            thp = theta(1, 2 * lam + 2 * spin.ell * eta, tau, ctx) ** 2
            t_op = vacua.transfer_matrix_direct(lam, chain)
            for side in ("R", "L"):
                x0 = vacua.global_vacuum(side, "+", lsv, chain, gens, 11)
                xp = vacua.global_vacuum(side, "+", lsv + SV_ETA, chain, gens, 11)
                xm = vacua.global_vacuum(side, "+", lsv - SV_ETA, chain, gens, 11)
                tx = (t_op if side == "R" else t_op.transpose(gens)).apply(x0, gens)
                rhs = multicomb_lincomb([(signs[0] * thm, xp), (signs[1] * thp, xm)])
                worst = max(worst, multicomb_residual(tx, rhs))
        return worst

    ck.run("global vacuum relations, periodic and twisted, N=2", 1e-8,
           global_relations)
    return ck.records


def _suite_preq(config: SuiteConfig) -> list:
    ctx = config.context()
    tau, eta = ctx.tau, ctx.eta
    spin = SpinParams(complex(config.spin))
    ck = _Checker("preq", config)
    lsv, msv = sv("lam"), sv("mu")
    W, B = config.q_window
    cut = qop.series_cut_for((W, B))

    def tql(rng):
        chain = vacua.ChainConfig(N=2, spin=spin, ctx=ctx)
        gens = chain.edge_gens({"lam": _rand_z(rng)}, rng)
        lam = gens["lam"]
        t_op = vacua.transfer_matrix(lam, chain)
        thm = theta(1, 2 * lam - 2 * spin.ell * eta, tau, ctx) ** 2
        thp = theta(1, 2 * lam + 2 * spin.ell * eta, tau, ctx) ** 2
        worst = 0.0
        for side in ("R", "L"):
            q0 = vacua.pre_q(side, "+", lsv, chain, gens, cut)
            qp = vacua.pre_q(side, "+", lsv + SV_ETA, chain, gens, cut)
            qm = vacua.pre_q(side, "+", lsv - SV_ETA, chain, gens, cut)
            lhs = t_op.compose(q0, gens) if side == "R" else q0.compose(t_op, gens)
            rhs = qp.scaled(thm) + qm.scaled(thp)
            worst = max(worst, operator_distance(
                lhs, rhs, ctx, gens, window=(W, B), probes=2, check_reach=False,
                seed=_sub_seed(config.seed, "tql", side)))
        return worst

    ck.run("pre-Q T-Q relations, N=2", 1e-8, tql)

    def exchange(rng):
        chain = vacua.ChainConfig(N=2, spin=spin, ctx=ctx)
        gens = chain.edge_gens({"lam": _rand_z(rng), "mu": _rand_z(rng)}, rng)
        ql_l = vacua.pre_q("L", "+", lsv, chain, gens, cut)
        ql_m = vacua.pre_q("L", "+", msv, chain, gens, cut)
        qr_l = vacua.pre_q("R", "+", lsv, chain, gens, cut)
        qr_m = vacua.pre_q("R", "+", msv, chain, gens, cut)
        worst = operator_distance(
            ql_l.compose(qr_m, gens), ql_m.compose(qr_l, gens), ctx, gens,
            window=(W, B), probes=2, check_reach=False,
            seed=_sub_seed(config.seed, "q1"))
        qrm_m = vacua.pre_q("R", "-", msv, chain, gens, cut)
        qlm_m = vacua.pre_q("L", "-", msv, chain, gens, cut)
        worst = max(worst, operator_distance(
            ql_l.compose(qrm_m, gens), qlm_m.compose(qr_l, gens), ctx, gens,
            window=(W, B), probes=2, check_reach=False,
            seed=_sub_seed(config.seed, "q1a")))
        return worst

    ck.run("exchange relations Q1 and Q1a, N=2", 1e-7, exchange)

    def local_decomposition(rng):
        gens = _base_gens(config, spin, rng, {
            "zeta1": _rand_z(rng), "zeta2": _rand_z(rng), "zetap": _rand_z(rng),
            "lam": _rand_z(rng), "mu": _rand_z(rng)})
        zsv, xsv, zpsv = sv("zeta1"), sv("zeta2"), sv("zetap")
        ff = qop.local_f_factor(4, zsv, xsv, zpsv, lsv, msv, spin, ctx, gens)
        conv = qop.local_f_convolution(4, zsv, xsv, zpsv, lsv, msv, spin, ctx, gens)
        worst = 0.0
        for n in range(5):
            a, b = ff.coeffs[n], conv[n]
            worst = max(worst, abs(a - b) / max(abs(a), abs(b)))
        return worst

    ck.run("local 10W9 decomposition vs direct convolution, n<=4", 1e-8,
           local_decomposition)

    def bailey_mechanism(rng):
        gens = _base_gens(config, spin, rng, {
            "zeta1": _rand_z(rng), "zeta2": _rand_z(rng), "zetap": _rand_z(rng),
            "lam": _rand_z(rng), "mu": _rand_z(rng)})
        worst = 0.0
        for n in (1, 2, 3):
            a1, alphas = qop.w10_9_alphas(n, gens["zeta1"], gens["zeta2"],
                                          gens["zetap"], gens["lam"], gens["mu"],
                                          spin, ctx)
            spec = WSeriesSpec(9, a1, alphas, 1.0, ctx, termination=n)
            if not is_balanced(spec):
                worst = max(worst, 1.0)
            b1, betas = bailey_partner(a1, alphas)
            a1s, alphas_s = qop.w10_9_alphas(n, gens["zeta1"], gens["zeta2"],
                                             gens["zetap"], gens["mu"], gens["lam"],
                                             spin, ctx)
            worst = max(worst, abs(b1 - a1s))
            worst = max(worst, max(abs(x - y) for x, y in zip(betas, alphas_s)))
            worst = max(worst, bailey_residual(a1, alphas, n, ctx))
        return worst

    ck.run("local parameter set: balanced, partner = lambda swap", 1e-9,
           bailey_mechanism)

    def sym_core(rng):
        gens = _base_gens(config, spin, rng, {
            "zeta1": _rand_z(rng), "zeta2": _rand_z(rng), "zetap": _rand_z(rng),
            "lam": _rand_z(rng), "mu": _rand_z(rng)})
        zsv, xsv, zpsv = sv("zeta1"), sv("zeta2"), sv("zetap")
        c1 = qop.local_f_symmetric_core(4, zsv, xsv, zpsv, lsv, msv, spin, ctx, gens)
        c2 = qop.local_f_symmetric_core(4, zsv, xsv, zpsv, msv, lsv, spin, ctx, gens)
        worst = max(abs(a - b) / max(abs(a), abs(b)) for a, b in zip(c1, c2))
        chain = vacua.ChainConfig(N=2, spin=spin, ctx=ctx)
        gens2 = chain.edge_gens({"lam": gens["lam"], "mu": gens["mu"]}, rng)
        for mode in ("q1", "q1a"):
            nvec = (rng.randint(0, 3), rng.randint(0, 3))
            worst = max(worst, qop.chain_symmetry_residual(
                mode, nvec, chain, lsv, msv, gens2))
        return worst

    ck.run("symmetric core and chain symmetry (q1, q1a)", 1e-7, sym_core)
    return ck.records


def _suite_tq(config: SuiteConfig) -> list:
    ctx = config.context()
    spin_g = SpinParams(complex(config.spin))
    spin_1 = SpinParams(1.0)
    ck = _Checker("tq", config)
    lsv = sv("lam")
    W, B = config.q_window

    def duality(rng):
        worst = 0.0
        chain = vacua.ChainConfig(N=2, spin=spin_g, ctx=ctx)
        gens = _base_gens(config, spin_g, rng, {"lam": _rand_z(rng)})
        cut = qop.series_cut_for((W, B))
        for sign in ("+", "-"):
            q1 = qop.q_operator(sign, lsv, chain, gens, cut)
            q2 = qop.q_kernel_operator(sign, lsv, chain, gens, cut)
            worst = max(worst, operator_distance(
                q1.op, q2, ctx, gens, window=(W, B), probes=2, check_reach=False,
                seed=_sub_seed(config.seed, "dual", sign)))
        return worst

    ck.run("kernel form vs operator form, both signs, N=2", 1e-9, duality)

    def window_stability(rng):
        chain = vacua.ChainConfig(N=1, spin=spin_g, ctx=ctx)
        gens = _base_gens(config, spin_g, rng, {"lam": _rand_z(rng)})
        cut = qop.series_cut_for((W, B))
        q1 = qop.q_operator("+", lsv, chain, gens, cut)
        q2 = qop.q_operator("+", lsv, chain, gens, cut + 2)
        return operator_distance(q1.op, q2.op, ctx, gens, window=(W, B),
                                 probes=2, check_reach=False,
                                 seed=_sub_seed(config.seed, "wstab"))

    ck.run("series window exactness (cut + 2 invariance)", 1e-13,
           window_stability)

    def tq_n1_int(rng):
        # the one-site chain at integer spin sits at the non-generic point
        # where the general normalization vanishes identically; the
        # explicitly renormalized one-site operators carry the relation
        gens = _base_gens(config, spin_1, rng, {"lam": 0.0})
        chain = vacua.ChainConfig(N=1, spin=spin_1, ctx=ctx)
        cut = qop.series_cut_for((3, 1))
        worst = 0.0
        for trial in range(5):
            gens["lam"] = _rand_z(rng)
            lam = gens["lam"]
            t_op = vacua.transfer_matrix(lam, chain)
            thm = theta(1, 2 * lam - 2 * ctx.eta, ctx.tau, ctx)
            thp = theta(1, 2 * lam + 2 * ctx.eta, ctx.tau, ctx)
            for sign in ("+", "-"):
                s = 1 if sign == "+" else -1
                q0 = qop.n1_q_display(s * lsv, spin_1, ctx, gens, cut).promote(0, 1)
                qp = qop.n1_q_display(s * (lsv + SV_ETA), spin_1, ctx, gens,
                                      cut).promote(0, 1)
                qm = qop.n1_q_display(s * (lsv - SV_ETA), spin_1, ctx, gens,
                                      cut).promote(0, 1)
                lhs = t_op.compose(q0, gens)
                rhs = qp.scaled(thm) + qm.scaled(thp)
                worst = max(worst, operator_distance(
                    lhs, rhs, ctx, gens, window=(3, 1), probes=2,
                    check_reach=False,
                    seed=_sub_seed(config.seed, "tqn1i", sign, trial)))
        return worst

    ck.run("T-Q relation N=1 l=1 (renormalized one-site form), 5 lambdas",
           1e-7, tq_n1_int)

    def tq_n2_int(rng):
        # half-integer spin pushes the coefficient growth harder, so the
        # l=1 chain probes a shallower window
        chain = vacua.ChainConfig(N=2, spin=spin_1, ctx=ctx)
        gens = _base_gens(config, spin_1, rng, {"lam": 0.0})
        worst = 0.0
        for trial in range(5):
            gens["lam"] = _rand_z(rng)
            for sign in ("+", "-"):
                worst = max(worst, qop.tq_residual(
                    sign, lsv, chain, gens, window=(2, 1), probes=2,
                    seed=_sub_seed(config.seed, "tq", 2, sign, trial)))
        return worst

    ck.run("T-Q relation N=2 l=1, both signs, 5 lambdas", 1e-7, tq_n2_int)

    for n_sites in (1, 2):
        def tq(rng, n_sites=n_sites):
            chain = vacua.ChainConfig(N=n_sites, spin=spin_g, ctx=ctx)
            gens = _base_gens(config, spin_g, rng, {"lam": 0.0})
            worst = 0.0
            for trial in range(5):
                gens["lam"] = _rand_z(rng)
                for sign in ("+", "-"):
                    worst = max(worst, qop.tq_residual(
                        sign, lsv, chain, gens, window=(W, B), probes=2,
                        seed=_sub_seed(config.seed, "tq", n_sites, sign, trial)))
            return worst

        ck.run(f"T-Q relation N={n_sites} l generic, both signs, 5 lambdas",
               1e-7, tq)

    def tq_twisted(rng):
        worst = 0.0
        for n_sites in (1, 2):
            chain = vacua.ChainConfig(N=n_sites, spin=spin_g, ctx=ctx,
                                      boundary="twisted_sigma1")
            gens = _base_gens(config, spin_g, rng, {"lam": _rand_z(rng)})
            for sign in ("+", "-"):
                worst = max(worst, qop.tq_residual(
                    sign, lsv, chain, gens, window=(W, B), probes=2,
                    seed=_sub_seed(config.seed, "tqtw", n_sites, sign)))
        return worst

    ck.run("twisted T-Q relation (relative minus), N=1,2", 1e-7, tq_twisted)
    return ck.records


def _suite_qq_commute(config: SuiteConfig) -> list:
    ctx = config.context()
    spin = SpinParams(complex(config.spin))
    ck = _Checker("qq_commute", config)
    lsv, msv = sv("lam"), sv("mu")
    W, B = config.q_window

    def grid(rng):
        # composed operators multiply two coefficient scales, so the grid
        # probes a shallower window than single-operator identities
        chain = vacua.ChainConfig(N=2, spin=spin, ctx=ctx)
        gens = _base_gens(config, spin, rng,
                          {"lam": _rand_z(rng), "mu": _rand_z(rng)})
        worst = 0.0
        for sa, sb in (("+", "+"), ("+", "-"), ("-", "-"), ("+", "T"), ("-", "T")):
            worst = max(worst, qop.q_commutativity_residual(
                sa, lsv, sb, msv, chain, gens, window=(2, 1), probes=2,
                seed=_sub_seed(config.seed, "grid", sa, sb)))
        return worst

    ck.run("commutativity grid {Q+, Q-, T} at N=2", 1e-7, grid)

    def cyclic(rng):
        chain = vacua.ChainConfig(N=2, spin=spin, ctx=ctx)
        gens = _base_gens(config, spin, rng, {"lam": _rand_z(rng)})
        c_op = MultiDiffOp.cyclic(2)
        t_op = vacua.transfer_matrix(gens["lam"], chain)
        worst = operator_distance(
            c_op.compose(t_op, gens), t_op.compose(c_op, gens), ctx, gens,
            window=(5, 2), probes=2, check_reach=False,
            seed=_sub_seed(config.seed, "ct"))
        q = qop.q_operator("+", lsv, chain, gens, qop.series_cut_for((W, B)))
        worst = max(worst, operator_distance(
            c_op.compose(q.op, gens), q.op.compose(c_op, gens), ctx, gens,
            window=(W, B), probes=2, check_reach=False,
            seed=_sub_seed(config.seed, "cq")))
        return worst

    ck.run("cyclic shift commutes with T and Q", 1e-9, cyclic)
    return ck.records


def _suite_special_values(config: SuiteConfig) -> list:
    ctx = config.context()
    spin = SpinParams(complex(config.spin))
    spin_1 = SpinParams(1.0)
    ck = _Checker("special_values", config)
    W, B = config.q_window

    def values(rng):
        chain = vacua.ChainConfig(N=2, spin=spin, ctx=ctx)
        gens = _base_gens(config, spin, rng)
        worst = 0.0
        for sign in ("+", "-"):
            worst = max(worst, qop.q_special_value_residual(
                sign, chain, gens, window=(4, 2), probes=2,
                seed=_sub_seed(config.seed, "spv", sign)))
        for m in (1, 2):
            for sign in ("+", "-"):
                worst = max(worst, qop.q_zero_residual(
                    sign, m, chain, gens, window=(4, 2),
                    seed=_sub_seed(config.seed, "zero", sign, m)))
        return worst

    ck.run("identity/cyclic values and zeros of Q", 1e-9, values)

    def a_operator_checks(rng):
        gens1 = _base_gens(config, spin_1, rng)
        chain1 = vacua.ChainConfig(N=2, spin=spin_1, ctx=ctx)
        a_op = qop.a_operator(chain1, gens1)
        q_at = qop.q_operator("+", spin_1.leta_sv + SV_ETA, chain1, gens1, 6)
        c = proportionality_constant(q_at.op, a_op, ctx, gens1, window=(4, 2),
                                     seed=_sub_seed(config.seed, "aprop"))
        worst = operator_distance(q_at.op, a_op.scaled(c), ctx, gens1,
                                  window=(4, 2), probes=2, check_reach=False,
                                  seed=_sub_seed(config.seed, "aq"))
        t_op = vacua.transfer_matrix(_rand_z(rng), chain1)
        worst = max(worst, operator_distance(
            a_op.compose(t_op, gens1), t_op.compose(a_op, gens1), ctx, gens1,
            window=(6, 4), probes=2, check_reach=False,
            seed=_sub_seed(config.seed, "at")))
        # l = 0 closed form
        spin_0 = SpinParams(0.0)
        gens0 = _base_gens(config, spin_0, rng)
        a_0 = qop.a_operator(vacua.ChainConfig(N=2, spin=spin_0, ctx=ctx), gens0)

        def sinh_op():
            return DiffOp((Term1(SV_ETA, lambda z: 0.5, "s+"),
                           Term1(-1 * SV_ETA, lambda z: -0.5, "s-")))

        ref = sinh_op().promote(0, 2).compose(sinh_op().promote(1, 2), gens0)

        def pref(zvec):
            val = 4.0
            for i in range(2):
                zi, zj = zvec[i], zvec[(i + 1) % 2]
                val *= theta(1, zi + zj, ctx.tau, ctx) \
                    * theta(1, zi - zj, ctx.tau, ctx) / theta(1, 2 * zi, ctx.tau, ctx)
            return val

        worst = max(worst, operator_distance(
            a_0, ref.lmul_function(pref), ctx, gens0, window=(6, 2), probes=2,
            seed=_sub_seed(config.seed, "a0")))
        # annihilation of the finite modules at l = 1/2
        spin_h = SpinParams(0.5)
        gens_h = _base_gens(config, spin_h, rng)
        a_h = qop.a_operator(vacua.ChainConfig(N=2, spin=spin_h, ctx=ctx), gens_h)
        for _ in range(8):
            zv = (_rand_z(rng), _rand_z(rng))
            f = lambda w: theta_bar(4, w[0], ctx) * theta_bar(3, w[1], ctx)
            val, scale = a_h.apply_function(f, zv, gens_h)
            worst = max(worst, abs(val) / scale)
        return worst

    ck.run("factorized integral of motion: value, [A,T], l=0 form, kernel",
           1e-7, a_operator_checks)
    return ck.records


def _suite_wronskian(config: SuiteConfig) -> list:
    ctx = config.context()
    spin = SpinParams(complex(config.spin))
    spin_1 = SpinParams(1.0)
    ck = _Checker("wronskian", config)
    lsv = sv("lam")

    def functional_n1_int(rng):
        gens1 = _base_gens(config, spin_1, rng, {"lam": _rand_z(rng)})
        # N=1 at integer spin through the explicitly renormalized one-site Q
        cut = qop.series_cut_for((3, 1))
        lam = gens1["lam"]

        def w_display(lam_sv):
            qp_p = qop.n1_q_display(lam_sv + SV_ETA, spin_1, ctx, gens1, cut).promote(0, 1)
            qm_0 = qop.n1_q_display(-1 * lam_sv, spin_1, ctx, gens1, cut).promote(0, 1)
            qp_0 = qop.n1_q_display(lam_sv, spin_1, ctx, gens1, cut).promote(0, 1)
            qm_p = qop.n1_q_display(-1 * (lam_sv + SV_ETA), spin_1, ctx, gens1,
                                    cut).promote(0, 1)
            return qp_p.compose(qm_0, gens1) - qp_0.compose(qm_p, gens1)

        w0 = w_display(lsv)
        wm = w_display(lsv - SV_ETA)
        thm = theta(1, 2 * lam - 2 * ctx.eta, ctx.tau, ctx)
        thp = theta(1, 2 * lam + 2 * ctx.eta, ctx.tau, ctx)
        return operator_distance(
            w0.scaled(thm), wm.scaled(thp), ctx, gens1, window=(3, 1), probes=2,
            check_reach=False, seed=_sub_seed(config.seed, "wr1"))

    ck.run("Wronskian functional equation N=1 l=1", 1e-7, functional_n1_int)

    def functional_generic_n1(rng):
        gens_g = _base_gens(config, spin, rng, {"lam": _rand_z(rng)})
        return qop.wronskian_residual(
            lsv, vacua.ChainConfig(N=1, spin=spin, ctx=ctx), gens_g,
            window=(3, 1), probes=2, seed=_sub_seed(config.seed, "wrg1"))

    ck.run("Wronskian functional equation N=1 generic spin", 1e-7,
           functional_generic_n1)

    def functional_generic_n2(rng):
        gens_g = _base_gens(config, spin, rng, {"lam": _rand_z(rng)})
        return qop.wronskian_residual(
            lsv, vacua.ChainConfig(N=2, spin=spin, ctx=ctx), gens_g,
            window=(2, 1), probes=1, seed=_sub_seed(config.seed, "wrg2"))

    ck.run("Wronskian functional equation N=2 generic spin", 1e-6,
           functional_generic_n2)

    def value_at_leta(rng):
        gens_g = _base_gens(config, spin, rng)
        chain1 = vacua.ChainConfig(N=1, spin=spin, ctx=ctx)
        cut = qop.series_cut_for((3, 1))
        w_op = qop.wronskian_pair(spin.leta_sv, chain1, gens_g, cut)
        a_op = qop.a_operator(chain1, gens_g, series_cut=cut)
        ac = a_op.compose(MultiDiffOp.cyclic(1), gens_g)
        c = proportionality_constant(w_op, ac, ctx, gens_g, window=(3, 1),
                                     seed=_sub_seed(config.seed, "wprop"))
        return operator_distance(w_op, ac.scaled(c), ctx, gens_g, window=(3, 1),
                                 probes=2, check_reach=False,
                                 seed=_sub_seed(config.seed, "wac"))

    ck.run("Wronskian at lambda = l eta is the scaled A C", 1e-7, value_at_leta)
    return ck.records


def _suite_n1(config: SuiteConfig) -> list:
    ctx = config.context()
    spin_1 = SpinParams(1.0)
    ck = _Checker("n1", config)
    lsv = sv("lam")

    def forms(rng):
        gens = _base_gens(config, spin_1, rng, {"lam": _rand_z(rng)})
        qd = qop.n1_q_display(lsv, spin_1, ctx, gens, series_cut=8)
        qe = qop.n1_q_explicit(lsv, spin_1, ctx, gens)
        c = proportionality_constant(qe, qd, ctx, gens, window=(6, 2),
                                     seed=_sub_seed(config.seed, "n1prop"))
        return operator_distance(qe, qd.scaled(c), ctx, gens, window=(6, 2),
                                 probes=2, check_reach=False,
                                 seed=_sub_seed(config.seed, "n1d"))

    ck.run("one-site explicit form matches the series form at l=1", 1e-9, forms)

    def lame_family(rng):
        gens = _base_gens(config, spin_1, rng, {"lam": _rand_z(rng)})
        qe = qop.n1_q_explicit(lsv, spin_1, ctx, gens)
        lamp = _rand_z(rng)
        lame = sklyanin_generator(0, spin_1, ctx).scaled(
            theta(1, 2 * lamp, ctx.tau, ctx))
        worst = operator_distance(
            qe.compose(lame, gens), lame.compose(qe, gens), ctx, gens,
            window=(7, 3), probes=2, seed=_sub_seed(config.seed, "lame"))
        # and against another member of the family
        gens2 = {**gens, "mu": _rand_z(rng)}
        q2 = qop.n1_q_explicit(sv("mu"), spin_1, ctx, gens2)
        worst = max(worst, operator_distance(
            qe.compose(q2, gens2), q2.compose(qe, gens2), ctx, gens2,
            window=(7, 4), probes=2, check_reach=False,
            seed=_sub_seed(config.seed, "qq1")))
        return worst

    ck.run("commuting family with the one-site transfer matrix", 1e-8,
           lame_family)
    return ck.records


def _suite_xxz(config: SuiteConfig) -> list:
    ck = _Checker("xxz", config)
    gamma = 0.11 + 0.16j
    p1 = xxz.XXZParams(gamma=gamma, ell=1.0)
    pg = xxz.XXZParams(gamma=gamma, ell=complex(config.spin))
    ctx = xxz.xxz_context(gamma)

    def uq(rng):
        return max(xxz.uq_sl2_residual(p1), xxz.uq_sl2_residual(pg))

    ck.run("quantum-algebra relations of the generators", 1e-9, uq)

    def tqz(rng):
        worst = 0.0
        usv = sv("u")
        for n_sites, p in ((1, p1), (2, pg)):
            gens = dict(ctx.gens)
            gens.update(u=_rand_z(rng), lgam=p.ell * p.gamma)
            u = gens["u"]
            cut = 8
            t_op = xxz.xxz_transfer_matrix(u, p, n_sites, gens)
            q0 = xxz.xxz_q_operator("+", usv, p, n_sites, gens, cut, ctx)
            qp = xxz.xxz_q_operator("+", usv + SV_ETA, p, n_sites, gens, cut, ctx)
            qm = xxz.xxz_q_operator("+", usv - SV_ETA, p, n_sites, gens, cut, ctx)
            a, b = xxz.xxz_tq_coefficients(u, p, n_sites)
            lhs = t_op.compose(q0, gens)
            rhs = qp.scaled(a) + qm.scaled(b)
            worst = max(worst, operator_distance(
                lhs, rhs, ctx, gens, window=(3, 1), probes=2, check_reach=False,
                seed=_sub_seed(config.seed, "tqz", n_sites)))
        return worst

    ck.run("six-vertex T-Q relation, N=1,2", 1e-7, tqz)

    def commute(rng):
        gens = dict(ctx.gens)
        gens.update(u=_rand_z(rng), u2=_rand_z(rng), lgam=pg.ell * pg.gamma)
        qa = xxz.xxz_q_operator("+", sv("u"), pg, 2, gens, 7, ctx)
        qb = xxz.xxz_q_operator("+", sv("u2"), pg, 2, gens, 7, ctx)
        return operator_distance(qa.compose(qb, gens), qb.compose(qa, gens),
                                 ctx, gens, window=(3, 1), probes=2,
                                 check_reach=False,
                                 seed=_sub_seed(config.seed, "qqx"))

    ck.run("commutativity of the six-vertex Q operators, N=2", 1e-7, commute)

    def drift(rng):
        xs = [_rand_z(rng) for _ in range(3)]
        u = _rand_z(rng)
        inv1, raw1 = xxz.elliptic_to_xxz_drift(0.02j, p1, u, xs)
        inv2, raw2 = xxz.elliptic_to_xxz_drift(0.01j, p1, u, xs)
        # invariant drift carries the criterion; the raw gauge drift must
        # roughly halve under tau halving (linear convergence)
        halving_ok = raw1 / max(raw2, 1e-300)
        if not (1.4 < halving_ok < 3.5):
            return 1.0
        return inv1

    ck.run("modular limit drift at tau = 0.02i with halving consistency",
           1e-3, drift)
    return ck.records


_SUITES: Mapping[str, Callable[[SuiteConfig], list]] = {
    "theta": _suite_theta,
    "gamma": _suite_gamma,
    "bailey": _suite_bailey,
    "sklyanin": _suite_sklyanin,
    "rll": _suite_rll,
    "intertwine": _suite_intertwine,
    "appendixB": _suite_appendix_b,
    "vacua": _suite_vacua,
    "preq": _suite_preq,
    "tq": _suite_tq,
    "qq_commute": _suite_qq_commute,
    "special_values": _suite_special_values,
    "wronskian": _suite_wronskian,
    "n1": _suite_n1,
    "xxz": _suite_xxz,
}


def run_suite(config: SuiteConfig) -> VerificationReport:
    """Execute the configured suites and collect a deterministic report."""
    import platform

    unknown = [s for s in config.suites if s not in _SUITES]
    if unknown:
        raise ConfigInvalid(f"unknown suites: {unknown}")
    config.context()        # validate moduli before any evaluation
    t0 = time.time()
    workers = int(os.environ.get("ELLIPTIC_QOP_WORKERS", "1"))
    records: list[CheckRecord] = []
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futs = {s: pool.submit(_SUITES[s], config) for s in config.suites}
            for s in config.suites:
                records.extend(futs[s].result())
    else:
        for s in config.suites:
            records.extend(_SUITES[s](config))
    env = f"python {platform.python_version()} on {platform.system().lower()}"
    cfg = {"tau": str(config.tau), "eta": str(config.eta),
           "spin": str(config.spin), "N": config.N,
           "boundary": config.boundary, "window": list(config.window),
           "q_window": list(config.q_window),
           "series_tol": config.series_tol, "max_terms": config.max_terms,
           "generic_guard": config.generic_guard,
           "suites": list(config.suites)}
    return VerificationReport(records=records, seed=config.seed, config=cfg,
                              wall_time=time.time() - t0, environment=env)


# ---------------------------------------------------------------------------
# Scalar evaluation utility
# ---------------------------------------------------------------------------

def eval_expr(name: str, args: Sequence[complex], config: SuiteConfig,
              oracle: bool = False) -> complex:
    """Evaluate one registered scalar function at the given arguments.

    With oracle=True the theta/gamma evaluations run at doubled precision
    through mpmath as an independent cross-check path.
    """
    from .errors import UnknownFunction

    ctx = config.context()
    spin = SpinParams(complex(config.spin))
    args = [complex(a) for a in args]
    if oracle and name in ("theta1", "theta2", "theta3", "theta4"):
        import mpmath as mp
        with mp.workdps(30):
            q = mp.exp(1j * mp.pi * mp.mpc(ctx.tau))
            idx = int(name[-1])
            return complex(mp.jtheta(idx, mp.pi * mp.mpc(args[0]), q))
    if oracle and name == "elliptic_gamma":
        import mpmath as mp
        with mp.workdps(30):
            z = mp.mpc(args[0])
            p = mp.exp(2j * mp.pi * mp.mpc(ctx.tau))
            q = mp.exp(4j * mp.pi * mp.mpc(ctx.eta))
            num = mp.mpf(1)
            den = mp.mpf(1)
            total = mp.mpc(1)
            for k in range(60):
                for m in range(60):
                    fn = 1 - p ** (k + 1) * q ** (m + 1) * mp.exp(-2j * mp.pi * z)
                    fd = 1 - p ** k * q ** m * mp.exp(2j * mp.pi * z)
                    total *= fn / fd
                    if abs(fn - 1) < mp.mpf(10) ** -32 and abs(fd - 1) < mp.mpf(10) ** -32:
                        break
            return complex(total)
    table = {
        "theta1": lambda: theta(1, args[0], ctx.tau, ctx),
        "theta2": lambda: theta(2, args[0], ctx.tau, ctx),
        "theta3": lambda: theta(3, args[0], ctx.tau, ctx),
        "theta4": lambda: theta(4, args[0], ctx.tau, ctx),
        "dedekind_eta": lambda: dedekind_eta(args[0] if args else ctx.tau, ctx),
        "elliptic_gamma": lambda: egamma(args[0], ctx),
        "phi_ell": lambda: phi_ell(args[0], args[1] if len(args) > 1 else spin.ell, ctx),
        "q_gamma": lambda: q_gamma(args[0], args[1], ctx),
        "basic_2phi1": lambda: basic_2phi1(*args[:5], ctx),
        "omega": lambda: vacua.omega(args[0], args[1], spin, ctx),
        "xk_coeff": lambda: qop.xk_coeff(int(args[0].real), args[1], args[2],
                                         args[3], spin, ctx),
        "w_series": lambda: w_series(WSeriesSpec(
            r=5, alpha1=args[0], alphas=tuple(args[1:4]), argument=args[4], ctx=ctx)),
    }
    if name not in table:
        raise UnknownFunction(f"unknown function id {name!r}")
    return table[name]()


# ---------------------------------------------------------------------------
# Config file and report IO
# ---------------------------------------------------------------------------

def parse_complex(text: str) -> complex:
    """Parse 'a+bi' / 'a-bi' / plain real into a complex number."""
    t = text.strip().replace(" ", "")
    if t.endswith("i") and not t.endswith("j"):
        t = t[:-1] + "j"
    return complex(t)


def load_config(path: str | None = None, overrides: Mapping[str, str] | None = None,
                ) -> SuiteConfig:
    cfg = SuiteConfig()
    entries: dict[str, str] = {}
    if path:
        with open(path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise ConfigInvalid(f"bad config line: {line!r}")
                key, val = line.split("=", 1)
                entries[key.strip()] = val.strip()
    entries.update(overrides or {})
    for key, val in entries.items():
        if key in ("tau", "eta", "spin"):
            setattr(cfg, key, parse_complex(val))
        elif key in ("series_tol", "generic_guard"):
            setattr(cfg, key, float(val))
        elif key in ("max_terms", "N", "seed"):
            setattr(cfg, key, int(val))
        elif key == "boundary":
            cfg.boundary = val
        elif key == "window":
            w, b = val.split(",")
            cfg.window = (int(w), int(b))
        elif key == "q_window":
            w, b = val.split(",")
            cfg.q_window = (int(w), int(b))
        elif key == "suites":
            cfg.suites = tuple(s.strip() for s in val.split(",") if s.strip())
        elif key.startswith("tol."):
            cfg.tolerances[key[4:]] = float(val)
        else:
            raise ConfigInvalid(f"unknown config key {key!r}")
    return cfg


def write_report(report: VerificationReport, path: str, fmt: str = "json") -> None:
    if fmt == "json":
        payload = json.dumps(report.to_json(), sort_keys=True, indent=1)
    elif fmt == "markdown":
        payload = report.to_markdown()
    else:
        raise ConfigInvalid(f"unknown report format {fmt!r}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(payload)


def report_from_json(path: str) -> VerificationReport:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    records = [CheckRecord(**r) for r in data["records"]]
    return VerificationReport(records=records, seed=data["seed"],
                              config=data["config"],
                              wall_time=data["wall_time"],
                              environment=data["environment"])
