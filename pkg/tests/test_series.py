"""Elliptic hypergeometric series and the Bailey transformation."""

import random

import pytest

from elliptic_qop import (WSeriesSpec, bailey_partner, bailey_residual,
                          ell_bracket, ell_binomial, ell_factorial,
                          ell_pochhammer, is_balanced, w_series)
from elliptic_qop.series import random_balanced_w10_9, w_term


def test_bracket_basics(ctx):
    assert abs(ell_bracket(0, ctx)) < 1e-12
    prod = ell_bracket(1, ctx) * ell_bracket(2, ctx) * ell_bracket(3, ctx)
    assert abs(ell_factorial(3, ctx) - prod) / abs(prod) < 1e-12
    assert ell_pochhammer(0.3 + 0.1j, 0, ctx) == 1.0
    x = 0.4 - 0.2j
    lhs = ell_pochhammer(x, 5, ctx)
    rhs = ell_pochhammer(x, 4, ctx) * ell_bracket(x + 4, ctx)
    assert abs(lhs - rhs) / abs(rhs) < 1e-12
    assert abs(ell_pochhammer(1, 4, ctx) - ell_factorial(4, ctx)) \
        / abs(ell_factorial(4, ctx)) < 1e-12
    for n, m in ((5, 2), (4, 1)):
        lhs = ell_binomial(n, m, ctx)
        rhs = ell_binomial(n, n - m, ctx)
        assert abs(lhs - rhs) / abs(rhs) < 1e-12


def test_w_series_terminating_cases(ctx):
    # n = 0: the single k = 0 term
    spec = WSeriesSpec(5, 0.8 + 0.1j, (0.2, 0.4, 0.0), 0.7, ctx, termination=0)
    assert w_series(spec) == 1.0
    # two-term closed form for a 6W5 with alpha6 = -1
    a1, a4, a5, z = 0.8 + 0.1j, 0.2 + 0.05j, 0.4 - 0.1j, 0.7 + 0.2j
    spec = WSeriesSpec(5, a1, (a4, a5, -1.0), z, ctx)
    assert spec.terminating and spec.termination_index() == 1
    # the [a1 + 2] factors cancel between [a1 + 2k] and [a1 - a6 + 1]_1
    t1 = (ell_bracket(a4, ctx) * ell_bracket(a5, ctx) * ell_bracket(-1, ctx) * z
          / (ell_bracket(1, ctx) * ell_bracket(a1 - a4 + 1, ctx)
             * ell_bracket(a1 - a5 + 1, ctx)))
    closed = 1 + t1
    val = w_series(spec)
    assert abs(val - closed) / abs(val) < 1e-12
    # brute-force four-term oracle for a terminating balanced 10W9
    rng = random.Random(9)
    a1, alphas = random_balanced_w10_9(rng, 3)
    spec = WSeriesSpec(9, a1, alphas, 1.0, ctx, termination=3)
    brute = sum(w_term(spec, k) for k in range(4))
    assert abs(w_series(spec) - brute) / abs(brute) < 1e-11


def test_terminating_sum_is_exact(ctx):
    rng = random.Random(5)
    a1, alphas = random_balanced_w10_9(rng, 4)
    v1 = w_series(WSeriesSpec(9, a1, alphas, 1.0, ctx, termination=4))
    # reversed summation order as an independent path
    spec = WSeriesSpec(9, a1, alphas, 1.0, ctx, termination=4)
    v2 = sum(w_term(spec, k) for k in reversed(range(5)))
    assert abs(v1 - v2) / abs(v1) < 1e-13


def test_balance_detection(ctx):
    rng = random.Random(3)
    a1, alphas = random_balanced_w10_9(rng, 2)
    spec = WSeriesSpec(9, a1, alphas, 1.0, ctx, termination=2)
    assert is_balanced(spec)
    bad = tuple(a + (0.1 if i == 0 else 0) for i, a in enumerate(alphas))
    assert not is_balanced(WSeriesSpec(9, a1, bad, 1.0, ctx, termination=2))
    assert not is_balanced(WSeriesSpec(9, a1, alphas, 0.9, ctx, termination=2))


def test_bracket_periodicity_invariance(ctx):
    # shifting any parameter by 1/eta leaves every coefficient unchanged
    rng = random.Random(11)
    a1, alphas = random_balanced_w10_9(rng, 2)
    shift = 1 / ctx.eta
    shifted = (alphas[0] + shift,) + alphas[1:]
    s1 = WSeriesSpec(9, a1, alphas, 1.0, ctx, termination=2)
    s2 = WSeriesSpec(9, a1, shifted, 1.0, ctx, termination=2)
    for k in range(3):
        t1, t2 = w_term(s1, k), w_term(s2, k)
        assert abs(t1 - t2) / max(abs(t1), 1e-300) < 1e-10


def test_bailey_fixed_point_and_involution(ctx):
    # the partner map fixes parameter sets with alpha4 + alpha5 + alpha6 =
    # alpha1 + 1; at the symmetric point each equals (alpha1 + 1)/3
    a1 = 1.1 + 0.2j
    sym = (a1 + 1.0) / 3
    a9 = 2 + 3 * a1 - (sym * 3 + 0.4 + 0.3) - (-2.0)
    alphas = (sym, sym, sym, 0.4, 0.3, a9, -2.0)
    b1, betas = bailey_partner(a1, alphas)
    assert abs(b1 - a1) < 1e-12
    assert all(abs(b - a) < 1e-12 for b, a in zip(betas, alphas))
    rng = random.Random(7)
    a1, alphas = random_balanced_w10_9(rng, 3)
    b1, betas = bailey_partner(a1, alphas)
    c1, gammas = bailey_partner(b1, betas)
    assert abs(c1 - a1) < 1e-12
    assert max(abs(g - a) for g, a in zip(gammas, alphas)) < 1e-12
    spec = WSeriesSpec(9, b1, betas, 1.0, ctx, termination=3)
    assert is_balanced(spec)


@pytest.mark.parametrize("n", [0, 1, 3, 5])
def test_bailey_transformation(ctx, n):
    rng = random.Random(100 + n)
    worst = 0.0
    for _ in range(10):
        a1, alphas = random_balanced_w10_9(rng, n)
        worst = max(worst, bailey_residual(a1, alphas, n, ctx))
    assert worst < 1e-9 if n <= 3 else worst < 1e-8
