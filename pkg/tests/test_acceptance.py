"""Acceptance criteria, one test per criterion.

Each test executes the corresponding verification suites at their stated
tolerances, prints one pass/fail line, and enforces the runtime budgets
where the criteria state them.
"""

import json
import time

from elliptic_qop import (ChainConfig, SpinParams, SuiteConfig,
                          operator_distance, run_suite, sklyanin_generator,
                          spin_gens, sv, write_report)
from elliptic_qop.qop import tq_residual
from elliptic_qop import vacua as vacua_mod

_cache = {}


def _run(suites, seed=20260808):
    key = (tuple(suites), seed)
    if key not in _cache:
        t0 = time.time()
        rep = run_suite(SuiteConfig(suites=tuple(suites), seed=seed))
        _cache[key] = (rep, time.time() - t0)
    return _cache[key]


def _report(name, rep, elapsed, budget=None):
    ok = rep.all_passed and (budget is None or elapsed <= budget)
    worst = max((r.residual for r in rep.records if not r.skipped), default=0.0)
    budget_txt = f", budget {budget:.0f}s" if budget else ""
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: "
          f"{len(rep.records)} checks, worst residual {worst:.2e}, "
          f"{elapsed:.1f}s{budget_txt}")
    for r in rep.records:
        if not (r.passed or r.skipped):
            print(f"    FAILING: {r.suite} / {r.anchor}: "
                  f"{r.residual:.3e} >= {r.tolerance:.0e}")
        if r.skipped:
            print(f"    SKIPPED: {r.suite} / {r.anchor}")
    # a skipped check never counts as certified at acceptance level
    assert rep.all_passed and not any(r.skipped for r in rep.records)
    if budget is not None:
        assert elapsed <= budget


def test_criterion_01_special_function_laws():
    rep, dt = _run(("theta", "gamma"))
    _report("criterion 1: special-function laws", rep, dt, budget=10.0)


def test_criterion_02_bailey_transformation():
    rep, dt = _run(("bailey",))
    _report("criterion 2: elliptic Bailey transformation", rep, dt, budget=30.0)


def test_criterion_03_sklyanin_and_rll():
    rep, dt = _run(("sklyanin", "rll"))
    _report("criterion 3: Sklyanin relations, transposition, RLL", rep, dt,
            budget=60.0)


def test_criterion_04_intertwining():
    rep, dt = _run(("intertwine", "appendixB"))
    _report("criterion 4: intertwining and theta identities", rep, dt)


def test_criterion_05_vacuum_machinery():
    rep, dt = _run(("vacua",))
    _report("criterion 5: vacuum machinery", rep, dt)


def test_criterion_06_pre_q_exchange():
    rep, dt = _run(("preq",))
    _report("criterion 6: pre-Q exchange and Bailey decomposition", rep, dt)


def test_criterion_07_q_operator_core():
    rep, dt = _run(("tq", "qq_commute"))
    _report("criterion 7: T-Q relations and commutativity grid", rep, dt,
            budget=600.0)


def test_criterion_08_special_values():
    rep, dt = _run(("special_values", "wronskian"))
    _report("criterion 8: special values, A operator, Wronskian", rep, dt)


def test_criterion_09_n1_and_xxz():
    rep, dt = _run(("n1", "xxz"))
    _report("criterion 9: one-site chain and XXZ degeneration", rep, dt)


def test_criterion_10_robustness(tmp_path):
    t0 = time.time()
    # (a) deterministic reports for a fixed seed
    rep1, _ = _run(("theta",), seed=99)
    rep2 = run_suite(SuiteConfig(suites=("theta",), seed=99))
    assert [r.to_json() for r in rep1.records] == [r.to_json() for r in rep2.records]
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    write_report(rep1, str(p1), "json")
    write_report(rep2, str(p2), "json")
    d1 = json.loads(p1.read_text())
    d2 = json.loads(p2.read_text())
    d1.pop("wall_time"), d2.pop("wall_time")
    assert d1 == d2

    # (b) fresh seed: a representative cross-section still passes
    rep3, _ = _run(("theta", "bailey", "vacua", "tq"), seed=4711)
    assert rep3.all_passed

    # (c) probe-window doubling changes no residual by more than 10x
    # (with a 1e-13 floor so machine-noise residuals do not alias)
    ctx = SuiteConfig().context()
    spin = SpinParams(0.23 + 0.11j)
    gens = spin_gens(spin, ctx)
    gens["lam"] = 0.19 + 0.05j
    floor = 1e-13

    def stable(r_small, r_big, tol):
        assert r_small < tol and r_big < tol
        assert max(r_big, floor) / max(r_small, floor) <= 10.0

    # operator identity from the algebra block
    s = [sklyanin_generator(a, spin, ctx) for a in range(4)]
    lhs = s[1].compose(s[2], gens)
    rhs_terms = s[2].compose(s[1], gens)
    from elliptic_qop.special import theta as th
    i12 = th(2, 0, ctx.tau, ctx) * th(3 + 0, 2 * ctx.eta, ctx.tau, ctx)

    def skl_res(window):
        tau, eta = ctx.tau, ctx.eta

        def i_ab(a, b):
            return th(a + 1, 0, tau, ctx) * th(b + 1, 2 * eta, tau, ctx)

        l = s[1].compose(s[0], gens).scaled(i_ab(1, 0))
        r = s[2].compose(s[3], gens).scaled(i_ab(2, 3)) \
            - s[3].compose(s[2], gens).scaled(i_ab(3, 2))
        return operator_distance(l, r, ctx, gens, window=window, probes=2, seed=5)

    stable(skl_res((8, 3)), skl_res((16, 6)), 1e-8)

    # T-Q relation from the Q block
    chain = ChainConfig(N=2, spin=spin, ctx=ctx)

    def tq_res(window):
        return tq_residual("+", sv("lam"), chain, gens, window=window,
                           probes=2, seed=6)

    stable(tq_res((2, 1)), tq_res((4, 2)), 1e-7)

    # vacuum propagation from the chain block
    zsv, xsv, lsv = sv("zeta1"), sv("zeta2"), sv("lam")
    gens.update(zeta1=0.17 + 0.06j, zeta2=-0.23 + 0.10j)

    def prop_res(window):
        return vacua_mod.pair_propagation_residual(
            "R4", "+", zsv, xsv, lsv, spin, ctx, gens, window=window)

    stable(prop_res(10), prop_res(20), 1e-8)

    print(f"[PASS] criterion 10: robustness (determinism, fresh seed, "
          f"window doubling), {time.time() - t0:.1f}s")
