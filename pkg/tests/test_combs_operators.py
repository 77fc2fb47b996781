"""Exact shift vectors, combs, pairings and the operator algebra."""

import cmath
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from elliptic_qop import (Comb, DiffOp, MultiComb, MultiDiffOp, ShiftVector,
                          comb_lincomb, operator_distance, sv, theta)
from elliptic_qop.errors import UnalignedLattices, WindowTooSmall
from elliptic_qop.operators import Term1
from elliptic_qop.shifts import SV_ETA


# -- shift vectors ---------------------------------------------------------

coeffs = st.fractions(min_value=-100, max_value=100, max_denominator=64)
gens_names = st.sampled_from(["one", "tau", "eta", "lam", "leta", "zeta1"])
vectors = st.lists(st.tuples(gens_names, coeffs), max_size=6).map(ShiftVector)


@given(vectors, vectors, vectors)
@settings(max_examples=200, deadline=None)
def test_shiftvector_module_axioms(a, b, c):
    assert (a + b) - b == a
    assert a + (b + c) == (a + b) + c
    assert a - a == ShiftVector()
    assert 2 * a - a == a
    assert hash(a + b) == hash(b + a)


def test_shiftvector_roundtrips_exact(rng):
    base = sv("lam") + Fraction(3, 7) * sv("eta")
    acc = base
    deltas = []
    for _ in range(200_000):
        d = ShiftVector.unit(rng.choice(["eta", "lam", "one"]),
                             Fraction(rng.randint(-5, 5), rng.randint(1, 9)))
        deltas.append(d)
        acc = acc + d
    for d in reversed(deltas):
        acc = acc - d
    assert acc == base


def test_eta_steps():
    assert (2 * SV_ETA).even_eta_steps() == 1
    assert (3 * SV_ETA).even_eta_steps() is None
    assert (sv("lam") + SV_ETA).even_eta_steps() is None
    assert ShiftVector().even_eta_steps() == 0


def test_numeric_value_is_linear(ctx):
    g = dict(ctx.gens)
    g["lam"] = 0.3 + 0.4j
    a = sv("lam") + Fraction(1, 2) * sv("eta")
    b = 2 * sv("eta") - sv("one")
    lhs = (a + b).value(g)
    assert abs(lhs - (a.value(g) + b.value(g))) < 1e-15


# -- combs -----------------------------------------------------------------

def test_pair_rules(ctx, gens):
    base = sv("zeta1")
    delta_a = Comb(base, {0: 1.0})
    assert delta_a.pair(delta_a) == 1.0
    # delta functions at non-matching lattice points pair to zero
    other = Comb(base - SV_ETA, {0: 1.0})
    assert delta_a.pair(other) == 0.0
    with pytest.raises(UnalignedLattices):
        delta_a.pair(other, strict=True)
    # (F(z), delta(z - a)) = F(a)
    val = delta_a.pair_function(lambda z: theta(1, 2 * z, ctx.tau, ctx), gens)
    ref = theta(1, 2 * gens["zeta1"], ctx.tau, ctx)
    assert abs(val - ref) < 1e-14


def test_open_end_safety():
    base = sv("zeta1")
    lo_open = Comb(base, {k: 1.0 for k in range(-5, 1)}, open_lo=True)
    hi_open = Comb(base, {k: 1.0 for k in range(0, 6)}, open_hi=True)
    assert lo_open.pair(hi_open) == pytest.approx(1.0)
    with pytest.raises(WindowTooSmall):
        hi_open.pair(hi_open)


def test_pruning_idempotent():
    c = Comb(sv("zeta1"), {0: 1.0, 1: 0.0, 2: 1e-200})
    once = c.pruned()
    twice = once.pruned()
    assert once.coeffs == twice.coeffs
    assert 1 not in once.coeffs


def test_lincomb_alignment(ctx, gens):
    base = sv("zeta1")
    f = Comb(base, {0: 1.0, 1: 2.0})
    g = Comb(base - 2 * SV_ETA, {0: 3.0})   # sits at index 1 in f's frame
    out = comb_lincomb([(1.0, f), (1.0, g)])
    assert out.coeff(1) == pytest.approx(2.0 + 3.0)


# -- operators -------------------------------------------------------------

def _theta_op(ctx, shift_steps, which=1):
    return DiffOp((Term1(shift_steps * SV_ETA,
                         lambda z: theta(which, 2 * z, ctx.tau, ctx), "c"),))


def test_identity_and_shift_action(ctx, gens):
    f = Comb(sv("zeta1"), {0: 1.0, 2: 0.5 + 0.1j, -3: 2.0})
    assert DiffOp.identity().apply(f, gens).coeffs == f.coeffs
    shifted = DiffOp.shift(SV_ETA).apply(f, gens)
    assert shifted.base == sv("zeta1") - SV_ETA
    assert sorted(shifted.coeffs) == sorted(f.coeffs)


def test_transpose_involution_and_pure_shift(ctx, gens):
    op = _theta_op(ctx, 2) + _theta_op(ctx, -2, which=3)
    optt = op.transpose(gens).transpose(gens)
    assert operator_distance(op, optt, ctx, gens, window=(8, 2), probes=2) < 1e-12
    pure = DiffOp.shift(SV_ETA).transpose(gens)
    assert pure.terms[0].shift == -1 * SV_ETA


def test_pair_adjointness(ctx, gens, rng):
    op = _theta_op(ctx, 2) + _theta_op(ctx, -2, which=3) + _theta_op(ctx, 0, which=4)
    base = sv("zeta1")
    f = Comb(base, {k: complex(rng.gauss(0, 1), rng.gauss(0, 1)) for k in range(-4, 5)})
    g = Comb(base, {k: complex(rng.gauss(0, 1), rng.gauss(0, 1)) for k in range(-4, 5)})
    lhs = f.pair(op.apply(g, gens))
    rhs = op.transpose(gens).apply(f, gens).pair(g)
    assert abs(lhs - rhs) / abs(lhs) < 1e-12


def test_kernel_action_consistency(ctx, gens, rng):
    op = _theta_op(ctx, 2) + _theta_op(ctx, -2, which=3)
    f = Comb(sv("zeta1"), {k: complex(rng.gauss(0, 1), rng.gauss(0, 1))
                           for k in range(-4, 5)})
    out = op.apply(f, gens)
    for k in out.indices():
        ker = op.kernel_comb(out.point(k), gens)
        val = ker.pair(f)
        assert abs(val - out.coeff(k)) / max(abs(out.coeff(k)), 1e-300) < 1e-11


def test_normal_ordering_and_associativity(ctx, gens):
    shift = DiffOp.shift(SV_ETA)
    c = DiffOp.function(lambda z: theta(3, z, ctx.tau, ctx))
    lhs = shift.compose(c, gens)
    rhs = DiffOp.shift(SV_ETA, coeff=lambda z: theta(3, z + ctx.eta, ctx.tau, ctx))
    assert operator_distance(lhs, rhs, ctx, gens, window=(8, 2), probes=2) < 1e-13
    rng = random.Random(2)

    def rand_op():
        terms = []
        for j in range(3):
            sh = (2 * rng.randint(-1, 1)) * SV_ETA
            coeff = (lambda a, b: lambda z: cmath.exp(1j * a * z) + b)(
                rng.uniform(0, 2), rng.uniform(0.5, 1.5))
            terms.append(Term1(sh, coeff, f"r{j}"))
        return DiffOp(tuple(terms))

    a, b, c3 = rand_op(), rand_op(), rand_op()
    lhs = a.compose(b, gens).compose(c3, gens)
    rhs = a.compose(b.compose(c3, gens), gens)
    assert operator_distance(lhs, rhs, ctx, gens, window=(10, 4), probes=3) < 1e-11


def test_operator_distance_discriminates(ctx, gens):
    a = _theta_op(ctx, 2)
    b = _theta_op(ctx, 2, which=3)
    assert operator_distance(a, a, ctx, gens, window=(8, 2), probes=2) < 1e-14
    assert operator_distance(a, b, ctx, gens, window=(8, 2), probes=2) > 1e-3


def test_cyclic_operator(ctx, gens):
    n = 3
    c = MultiDiffOp.cyclic(n)
    c3 = c.compose(c, gens).compose(c, gens)
    ident = MultiDiffOp.identity(n)
    assert operator_distance(c3, ident, ctx, gens, window=(5, 2), probes=2) < 1e-14


def test_multi_transpose_adjointness(ctx, gens, rng):
    op = _theta_op(ctx, 2).promote(0, 2).compose(
        _theta_op(ctx, -2, which=3).promote(1, 2), gens)
    bases = (sv("zeta1"), sv("zeta2"))
    f = MultiComb(bases, {(i, j): complex(rng.gauss(0, 1), rng.gauss(0, 1))
                          for i in range(-2, 3) for j in range(-2, 3)})
    g = MultiComb(bases, {(i, j): complex(rng.gauss(0, 1), rng.gauss(0, 1))
                          for i in range(-2, 3) for j in range(-2, 3)})
    lhs = f.pair(op.apply(g, gens))
    rhs = op.transpose(gens).apply(f, gens).pair(g)
    assert abs(lhs - rhs) / abs(lhs) < 1e-12


def test_serialization_shapes(ctx):
    op = _theta_op(ctx, 2)
    data = op.to_json()
    assert data["nvars"] == 1
    assert data["terms"][0]["shift"] == [["eta", [2, 1]]]
    c = Comb(sv("zeta1"), {0: 1.0, 2: 0.5 + 0.1j})
    blob = c.to_json()
    assert blob["coeffs"] == [[0, 1.0, 0.0], [2, 0.5, 0.1]]
    mc = MultiComb((sv("zeta1"), sv("zeta2")), {(0, 1): 1.0})
    blob = mc.to_json()
    assert blob["coeffs"] == [[[0, 1], 1.0, 0.0]]
    import json
    json.dumps(op.to_json())
    json.dumps(blob)
