"""Difference operators as finite sums of (shift, coefficient) terms.

One-variable operators (DiffOp) carry scalar coefficient functions; chain
operators (MultiDiffOp) carry per-site exact shifts, an optional coordinate
permutation (for the cyclic shift entering Q^-), and coefficient functions
of the whole site vector.  A term acts as

    (T f)(z) = coeff(z) * f(perm(z) + shifts)

with perm(z)_i = z[perm[i]].  All supports move on exact ShiftVector
lattices; numeric values enter only through a generator assignment.
Probe-based operator_distance is the certification primitive used by every
identity suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

from .combs import Comb, MultiComb, lattice_offset
from .context import ModuliContext
from .errors import (PoleProximity, TermExplosion, UnalignedLattices,
                     WindowTooSmall)
from .shifts import ShiftVector, sv

DEFAULT_TERM_CAP = 100_000


# ---------------------------------------------------------------------------
# One variable
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Term1:
    shift: ShiftVector
    coeff: Callable[[complex], complex]
    desc: str = ""


@dataclass(frozen=True)
class DiffOp:
    """Finite formal sum sum_t c_t(z) e^{shift_t d/dz}."""

    terms: tuple
    truncated: bool = False   # marks window-truncated series operators

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))

    # -- constructors ----------------------------------------------------
    @classmethod
    def identity(cls) -> "DiffOp":
        return cls((Term1(ShiftVector(), lambda z: 1.0 + 0.0j, "1"),))

    @classmethod
    def shift(cls, shift: ShiftVector, coeff=None, desc: str = "") -> "DiffOp":
        if coeff is None:
            return cls((Term1(shift, lambda z: 1.0 + 0.0j, desc or "shift"),))
        return cls((Term1(shift, coeff, desc),))

    @classmethod
    def function(cls, func: Callable[[complex], complex], desc: str = "f") -> "DiffOp":
        return cls((Term1(ShiftVector(), func, desc),))

    # -- linear structure --------------------------------------------------
    def __add__(self, other: "DiffOp") -> "DiffOp":
        merged: dict[ShiftVector, list] = {}
        for t in self.terms + other.terms:
            merged.setdefault(t.shift, []).append(t)
        out = []
        for shift, ts in merged.items():
            if len(ts) == 1:
                out.append(ts[0])
            else:
                fns = [t.coeff for t in ts]
                out.append(Term1(shift,
                                 (lambda fs: lambda z: sum(f(z) for f in fs))(fns),
                                 "+".join(t.desc for t in ts)))
        return DiffOp(tuple(out), truncated=self.truncated or other.truncated)

    def __sub__(self, other: "DiffOp") -> "DiffOp":
        return self + other.scaled(-1.0)

    def scaled(self, c: complex) -> "DiffOp":
        return DiffOp(tuple(Term1(t.shift,
                                  (lambda f, cc: lambda z: cc * f(z))(t.coeff, c),
                                  t.desc) for t in self.terms), self.truncated)

    def lmul_function(self, func: Callable[[complex], complex], desc="f*") -> "DiffOp":
        """Left multiplication by a scalar function: g(z) D."""
        return DiffOp(tuple(Term1(t.shift,
                                  (lambda f, g: lambda z: g(z) * f(z))(t.coeff, func),
                                  desc + t.desc) for t in self.terms), self.truncated)

    def rmul_function(self, func: Callable[[complex], complex],
                      gens: Mapping[str, complex], desc="*f") -> "DiffOp":
        """Right multiplication: D g(z) = sum_t c_t(z) g(z + shift_t) e^{shift_t}."""
        out = []
        for t in self.terms:
            d = t.shift.value(gens)
            out.append(Term1(t.shift,
                             (lambda f, g, dd: lambda z: f(z) * g(z + dd))(t.coeff, func, d),
                             t.desc + desc))
        return DiffOp(tuple(out), self.truncated)

    # -- algebra -----------------------------------------------------------
    def compose(self, other: "DiffOp", gens: Mapping[str, complex],
                cap: int = DEFAULT_TERM_CAP) -> "DiffOp":
        """Normal-ordered product self∘other: (AB)f = A(Bf)."""
        if len(self.terms) * len(other.terms) > cap:
            raise TermExplosion(
                f"composition would create {len(self.terms) * len(other.terms)} terms")
        out = []
        for ta in self.terms:
            sa_num = ta.shift.value(gens)
            for tb in other.terms:
                def cc(z, fa=ta.coeff, fb=tb.coeff, d=sa_num):
                    return fa(z) * fb(z + d)
                out.append(Term1(ta.shift + tb.shift, cc,
                                 f"({ta.desc})({tb.desc})"))
        return DiffOp(tuple(out), truncated=self.truncated or other.truncated)

    def transpose(self, gens: Mapping[str, complex]) -> "DiffOp":
        """(c(z) e^{a d})^t = e^{-a d} c(z) = c(z-a) e^{-a d}."""
        out = []
        for t in self.terms:
            a_num = t.shift.value(gens)
            out.append(Term1(-1 * t.shift,
                             (lambda f, a: lambda z: f(z - a))(t.coeff, a_num),
                             f"({t.desc})^t"))
        return DiffOp(tuple(out), self.truncated)

    # -- action ------------------------------------------------------------
    def apply(self, f: Comb, gens: Mapping[str, complex],
              with_scale: bool = False):
        """Left action (Df)(z) = sum_t c_t(z) f(z + shift_t) on a comb.

        Returns the output comb (with its declared-valid window shrunk at
        open ends); with_scale additionally returns the max absolute
        single-term contribution per output index, the natural scale for
        cancellation checks.
        """
        if not self.terms or not f.coeffs:
            empty = Comb(f.base, {}, f.open_lo, f.open_hi)
            return (empty, {}) if with_scale else empty
        ref = self.terms[0].shift
        offsets = []
        for t in self.terms:
            j = (t.shift - ref).even_eta_steps()
            if j is None:
                raise UnalignedLattices(
                    f"operator shifts span several lattices: {t.shift} vs {ref}")
            offsets.append(j)
        out_base = f.base - ref
        vals: dict[int, complex] = {}
        scales: dict[int, float] = {}
        for t, j in zip(self.terms, offsets):
            s_num = t.shift.value(gens)
            for k, fk in f.coeffs.items():
                n = k + j
                z_num = f.point(k).value(gens) - s_num
                contrib = t.coeff(z_num) * fk
                vals[n] = vals.get(n, 0.0 + 0.0j) + contrib
                mag = abs(contrib)
                if mag > scales.get(n, 0.0):
                    scales[n] = mag
        lo, hi = -math.inf, math.inf
        if f.open_hi:
            hi = f.kmax + min(offsets)
        if f.open_lo:
            lo = f.kmin + max(offsets)
        vals = {n: v for n, v in vals.items() if lo <= n <= hi}
        scales = {n: s for n, s in scales.items() if lo <= n <= hi}
        out = Comb(out_base, vals, open_lo=f.open_lo, open_hi=f.open_hi)
        return (out, scales) if with_scale else out

    def apply_right(self, f: Comb, gens: Mapping[str, complex],
                    with_scale: bool = False):
        """Right action (fD)(z), i.e. left action of the transpose."""
        return self.transpose(gens).apply(f, gens, with_scale)

    def apply_function(self, func: Callable[[complex], complex], z: complex,
                       gens: Mapping[str, complex]) -> tuple[complex, float]:
        """(D F)(z) for analytic F; returns (value, max term magnitude)."""
        total = 0.0 + 0.0j
        scale = 0.0
        for t in self.terms:
            contrib = t.coeff(z) * func(z + t.shift.value(gens))
            total += contrib
            scale = max(scale, abs(contrib))
        return total, scale

    def kernel_comb(self, z_point: ShiftVector, gens: Mapping[str, complex]) -> Comb:
        """Kernel D(z, zeta) at fixed z as a comb in zeta.

        D(z, zeta) = sum_t c_t(z) delta(z - zeta + shift_t), so the zeta
        support sits at z + shift_t.
        """
        z_num = z_point.value(gens)
        pts = [(z_point + t.shift, t.coeff(z_num)) for t in self.terms]
        return Comb.from_points(pts)

    # -- lifting -----------------------------------------------------------
    def promote(self, site: int, nvars: int) -> "MultiDiffOp":
        """Embed as a chain operator acting on one site."""
        terms = []
        for t in self.terms:
            shifts = tuple(t.shift if s == site else ShiftVector()
                           for s in range(nvars))
            def cc(zvec, f=t.coeff, s=site):
                return f(zvec[s])
            terms.append(TermN(shifts, cc, _ID_PERM[nvars], f"{t.desc}@{site}"))
        return MultiDiffOp(nvars, tuple(terms), truncated=self.truncated)

    def to_json(self):
        return {"nvars": 1,
                "terms": [{"shift": t.shift.to_json(), "desc": t.desc}
                          for t in self.terms]}


def transpose(op: DiffOp, gens: Mapping[str, complex]) -> DiffOp:
    return op.transpose(gens)


# ---------------------------------------------------------------------------
# Many variables
# ---------------------------------------------------------------------------

class _IdPerm(dict):
    def __missing__(self, n):
        self[n] = tuple(range(n))
        return self[n]


_ID_PERM = _IdPerm()


def _inverse(perm: tuple) -> tuple:
    inv = [0] * len(perm)
    for i, p in enumerate(perm):
        inv[p] = i
    return tuple(inv)


@dataclass(frozen=True)
class TermN:
    shifts: tuple
    coeff: Callable
    perm: tuple
    desc: str = ""


@dataclass(frozen=True)
class MultiDiffOp:
    nvars: int
    terms: tuple
    truncated: bool = False

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))

    # -- constructors ------------------------------------------------------
    @classmethod
    def identity(cls, nvars: int) -> "MultiDiffOp":
        return cls(nvars, (TermN((ShiftVector(),) * nvars,
                                 lambda z: 1.0 + 0.0j, _ID_PERM[nvars], "1"),))

    @classmethod
    def term(cls, nvars: int, shifts, coeff, perm=None, desc: str = "") -> "MultiDiffOp":
        return cls(nvars, (TermN(tuple(shifts), coeff,
                                 _ID_PERM[nvars] if perm is None else tuple(perm),
                                 desc),))

    @classmethod
    def cyclic(cls, nvars: int, half_shift_site: int | None = None) -> "MultiDiffOp":
        """(Cf)(z_1..z_N) = f(z_2,...,z_N, z_1 [+ 1/2]).

        With half_shift_site set (twisted boundary), that argument slot
        picks up the extra half period.
        """
        perm = tuple((i + 1) % nvars for i in range(nvars))
        shifts = [ShiftVector() for _ in range(nvars)]
        if half_shift_site is not None:
            shifts[half_shift_site] = sv("one", "1/2")
        return cls(nvars, (TermN(tuple(shifts), lambda z: 1.0 + 0.0j, perm, "C"),))

    # -- linear structure ----------------------------------------------------
    def __add__(self, other: "MultiDiffOp") -> "MultiDiffOp":
        if self.nvars != other.nvars:
            raise UnalignedLattices("adding operators of different arity")
        return MultiDiffOp(self.nvars, self.terms + other.terms,
                           truncated=self.truncated or other.truncated)

    def __sub__(self, other: "MultiDiffOp") -> "MultiDiffOp":
        return self + other.scaled(-1.0)

    def scaled(self, c: complex) -> "MultiDiffOp":
        return MultiDiffOp(self.nvars,
                           tuple(TermN(t.shifts,
                                       (lambda f, cc: lambda z: cc * f(z))(t.coeff, c),
                                       t.perm, t.desc) for t in self.terms),
                           self.truncated)

    def lmul_function(self, func: Callable, desc="f*") -> "MultiDiffOp":
        return MultiDiffOp(self.nvars,
                           tuple(TermN(t.shifts,
                                       (lambda f, g: lambda z: g(z) * f(z))(t.coeff, func),
                                       t.perm, desc + t.desc) for t in self.terms),
                           self.truncated)

    # -- algebra --------------------------------------------------------------
    def compose(self, other: "MultiDiffOp", gens: Mapping[str, complex],
                cap: int = DEFAULT_TERM_CAP) -> "MultiDiffOp":
        if self.nvars != other.nvars:
            raise UnalignedLattices("composing operators of different arity")
        if len(self.terms) * len(other.terms) > cap:
            raise TermExplosion(
                f"composition would create {len(self.terms) * len(other.terms)} terms")
        n = self.nvars
        out = []
        for ta in self.terms:
            sa_num = tuple(s.value(gens) for s in ta.shifts)
            for tb in other.terms:
                perm = tuple(ta.perm[tb.perm[i]] for i in range(n))
                shifts = tuple(ta.shifts[tb.perm[i]] + tb.shifts[i] for i in range(n))

                def cc(zvec, fa=ta.coeff, fb=tb.coeff, pa=ta.perm, da=sa_num):
                    yvec = tuple(zvec[pa[i]] + da[i] for i in range(len(pa)))
                    return fa(zvec) * fb(yvec)

                out.append(TermN(shifts, cc, perm, f"({ta.desc})({tb.desc})"))
        return MultiDiffOp(n, tuple(out), truncated=self.truncated or other.truncated)

    def transpose(self, gens: Mapping[str, complex]) -> "MultiDiffOp":
        """Anti-automorphism t: kernel rows and columns exchanged.

        For a term c(z) f(perm(z) + s) the transpose maps w through the
        inverse permutation with negated shifts and translates the
        coefficient accordingly.
        """
        n = self.nvars
        out = []
        for t in self.terms:
            inv = _inverse(t.perm)
            s_num = tuple(s.value(gens) for s in t.shifts)

            def cc(wvec, f=t.coeff, inv=inv, sn=s_num):
                zvec = tuple(wvec[inv[i]] - sn[inv[i]] for i in range(len(inv)))
                return f(zvec)

            shifts = tuple(-1 * t.shifts[inv[i]] for i in range(n))
            out.append(TermN(shifts, cc, inv, f"({t.desc})^t"))
        return MultiDiffOp(n, tuple(out), self.truncated)

    # -- action -----------------------------------------------------------------
    def apply(self, f: MultiComb, gens: Mapping[str, complex]) -> MultiComb:
        """(Tf)(z) = sum_t c_t(z) f(perm_t(z) + shifts_t)."""
        n = self.nvars
        if f.nvars != n:
            raise UnalignedLattices("operator arity does not match comb")
        if not self.terms or not f.coeffs:
            return MultiComb(f.bases, {}, f.open_lo, f.open_hi)
        # canonical output bases from the first term
        t0 = self.terms[0]
        inv0 = _inverse(t0.perm)
        out_bases = tuple(f.bases[inv0[s]] - t0.shifts[inv0[s]] for s in range(n))
        site_lo = [-math.inf] * n
        site_hi = [math.inf] * n
        out_open_lo = [False] * n
        out_open_hi = [False] * n
        vals: dict[tuple, complex] = {}
        ranges = [f.site_range(s) for s in range(n)]
        for t in self.terms:
            inv = _inverse(t.perm)
            offs = []
            for s in range(n):
                i = inv[s]
                j = lattice_offset(f.bases[i] - t.shifts[i], out_bases[s])
                if j is None:
                    raise UnalignedLattices(
                        "operator terms produce incompatible output lattices")
                offs.append(j)
            s_num = tuple(sh.value(gens) for sh in t.shifts)
            for kvec, fk in f.coeffs.items():
                nvec = tuple(kvec[inv[s]] - offs[s] for s in range(n))
                zvec = tuple(f.bases[inv[s]].value(gens)
                             - 2 * kvec[inv[s]] * gens["eta"] - s_num[inv[s]]
                             for s in range(n))
                vals[nvec] = vals.get(nvec, 0.0 + 0.0j) + t.coeff(zvec) * fk
            # validity bounds induced by f's open ends
            for i in range(n):
                s = t.perm[i]
                klo, khi = ranges[i]
                if f.open_hi[i]:
                    out_open_hi[s] = True
                    site_hi[s] = min(site_hi[s], khi - offs[s])
                if f.open_lo[i]:
                    out_open_lo[s] = True
                    site_lo[s] = max(site_lo[s], klo - offs[s])
        vals = {k: v for k, v in vals.items()
                if all(site_lo[s] <= k[s] <= site_hi[s] for s in range(n))}
        return MultiComb(out_bases, vals,
                         open_lo=tuple(out_open_lo), open_hi=tuple(out_open_hi))

    def apply_function(self, func: Callable, zvec: Sequence[complex],
                       gens: Mapping[str, complex]) -> tuple[complex, float]:
        """Action on an analytic function of N variables at a sample point."""
        total = 0.0 + 0.0j
        scale = 0.0
        for t in self.terms:
            wvec = tuple(zvec[t.perm[i]] + t.shifts[i].value(gens)
                         for i in range(self.nvars))
            contrib = t.coeff(tuple(zvec)) * func(wvec)
            total += contrib
            scale = max(scale, abs(contrib))
        return total, scale

    def to_json(self):
        return {"nvars": self.nvars,
                "terms": [{"shifts": [s.to_json() for s in t.shifts],
                           "perm": list(t.perm), "desc": t.desc}
                          for t in self.terms]}


def compose(a, b, gens: Mapping[str, complex], cap: int = DEFAULT_TERM_CAP):
    """Normal-ordered operator product; (a∘b) f = a(b f)."""
    return a.compose(b, gens, cap)


def compose_all(ops: Sequence, gens: Mapping[str, complex],
                cap: int = DEFAULT_TERM_CAP):
    acc = ops[0]
    for op in ops[1:]:
        acc = acc.compose(op, gens, cap)
    return acc


def promote(op: DiffOp, site: int, nvars: int) -> MultiDiffOp:
    return op.promote(site, nvars)


# ---------------------------------------------------------------------------
# Probe-based operator distance
# ---------------------------------------------------------------------------

def _as_multi(op) -> MultiDiffOp:
    if isinstance(op, DiffOp):
        return op.promote(0, 1)
    return op


def _probe_comb(nvars: int, W: int, rng, n_points: int) -> MultiComb:
    # independent per-site bases keep the supports off each other's
    # lattices (z_i - z_j not in 2 eta Z), the generic position the
    # half-integer-spin coefficients require
    bases = tuple(sv(f"nu{s}") for s in range(nvars))
    pts = set()
    while len(pts) < n_points:
        pts.add(tuple(rng.randint(-W, W) for _ in range(nvars)))
    return MultiComb(bases, {p: 1.0 + 0.0j for p in pts})


def _probe_gens(nvars: int, rng) -> dict:
    return {f"nu{s}": complex(rng.uniform(-0.45, 0.45), rng.uniform(0.02, 0.21))
            for s in range(nvars)}


def _shift_reach(op: MultiDiffOp) -> int:
    """Max lattice offset of any term shift relative to the first term."""
    reach = 0
    t0 = op.terms[0]
    for t in op.terms:
        for s in range(op.nvars):
            j = (t.shifts[s] - t0.shifts[s]).even_eta_steps()
            if j is not None:
                reach = max(reach, abs(j))
    return reach


def operator_distance(a, b, ctx: ModuliContext, gens: Mapping[str, complex] | None = None,
                      *, window: tuple[int, int] = (12, 4), probes: int = 5,
                      rng=None, n_points: int = 5, seed: int = 0,
                      check_reach: bool = True) -> float:
    """Certify an operator identity on probe combs.

    Applies both operators to random finite-support probes in [-W, W]^N and
    returns the max pointwise-relative coefficient discrepancy over the
    interior window [-W+B, W-B]^N (truncation of window-cut series cannot
    reach the interior by construction).
    """
    import random as _random

    a = _as_multi(a)
    b = _as_multi(b)
    if a.nvars != b.nvars:
        raise UnalignedLattices("comparing operators of different arity")
    W, B = window
    if not W > B:
        raise WindowTooSmall(f"need W > B_margin, got {window}")
    if check_reach:
        for op in (a, b):
            if not op.truncated and _shift_reach(op) > B:
                raise WindowTooSmall(
                    f"B_margin {B} below operator shift reach {_shift_reach(op)}")
    if rng is None:
        rng = _random.Random(seed)
    gens = dict(gens if gens is not None else ctx.gens)
    n = a.nvars
    worst = 0.0
    done = 0
    attempts = 0
    while done < probes:
        attempts += 1
        if attempts > 6 * probes:
            raise PoleProximity("could not draw a pole-free probe in 6 tries/probe")
        gens_p = dict(gens)
        gens_p.update(_probe_gens(n, rng))
        f = _probe_comb(n, W, rng, n_points)
        try:
            fa = a.apply(f, gens_p)
            fb = b.apply(f, gens_p)
        except PoleProximity:
            continue
        worst = max(worst, _interior_residual(fa, fb, W, B))
        done += 1
    return worst


def _interior_residual(fa: MultiComb, fb: MultiComb, W: int, B: int) -> float:
    """Compare output coefficients on the interior index window.

    Output bases are anchored at the first term applied to the probe base,
    so an output key equals probe index plus series offset; window-cut
    truncation can only touch indices outside [-W+B, W-B]."""
    n = fa.nvars
    offs = []
    for s in range(n):
        j = lattice_offset(fb.bases[s], fa.bases[s])
        if j is None:
            # structural mismatch unless one side is numerically empty
            return 1.0 if max(fa.max_abs(), fb.max_abs()) > 0 else 0.0
        offs.append(j)

    def interior(kvec) -> bool:
        return all(-W + B <= kvec[s] <= W - B for s in range(n))

    # fb.bases - fa.bases = 2*offs*eta, so fa index k matches fb index k + offs
    keys = {k for k in fa.coeffs if interior(k)}
    keys |= {tuple(m[s] - offs[s] for s in range(n))
             for m in fb.coeffs
             if interior(tuple(m[s] - offs[s] for s in range(n)))}
    if not keys:
        raise WindowTooSmall("no interior output support; enlarge the window")

    def at(k):
        return max(abs(fa.coeff(k)),
                   abs(fb.coeff(tuple(k[s] + offs[s] for s in range(n)))))

    def local(k):
        best = at(k)
        for s in range(n):
            for d in (-1, 1):
                best = max(best, at(k[:s] + (k[s] + d,) + k[s + 1:]))
        return best

    overall = max(max((at(k) for k in keys), default=0.0), 1e-300)
    worst = 0.0
    for k in keys:
        va = fa.coeff(k)
        vb = fb.coeff(tuple(k[s] + offs[s] for s in range(n)))
        s = local(k)
        if s <= 1e-250 * overall:
            continue
        worst = max(worst, abs(va - vb) / s)
    return worst


def proportionality_constant(a, b, ctx: ModuliContext,
                             gens: Mapping[str, complex] | None = None,
                             *, window: tuple[int, int] = (4, 2),
                             seed: int = 0, n_points: int = 4) -> complex:
    """Ratio a/b extracted from the largest interior probe coefficient."""
    import random as _random

    a = _as_multi(a)
    b = _as_multi(b)
    rng = _random.Random(seed)
    gens = dict(gens if gens is not None else ctx.gens)
    W, B = window
    for _ in range(8):
        gens_p = dict(gens)
        gens_p.update(_probe_gens(a.nvars, rng))
        f = _probe_comb(a.nvars, W, rng, n_points)
        try:
            fa = a.apply(f, gens_p)
            fb = b.apply(f, gens_p)
        except PoleProximity:
            continue
        offs = [lattice_offset(fb.bases[s], fa.bases[s]) for s in range(a.nvars)]
        if None in offs:
            raise UnalignedLattices("operators live on different lattices")
        best, ratio = 0.0, None
        for k, va in fa.coeffs.items():
            if not all(-W + B <= k[s] <= W - B for s in range(a.nvars)):
                continue
            vb = fb.coeff(tuple(k[s] + offs[s] for s in range(a.nvars)))
            if abs(vb) > best and abs(va) > 0:
                best, ratio = abs(vb), va / vb
        if ratio is not None:
            return ratio
    raise PoleProximity("no usable probe for proportionality extraction")


def matrix_operator_distance(mat_a, mat_b, ctx: ModuliContext,
                             gens: Mapping[str, complex] | None = None,
                             **kw) -> float:
    """Max entrywise operator distance for matrices of operators.

    Entries that are numerically zero on both sides (relative to the matrix
    scale) are vacuous and skipped.
    """
    import random as _random

    import zlib

    rows, cols = len(mat_a), len(mat_a[0])
    seed = kw.pop("seed", 0)
    shared = dict(kw)
    worst = 0.0
    for i in range(rows):
        for j in range(cols):
            a, b = mat_a[i][j], mat_b[i][j]
            if a is None and b is None:
                continue
            rng = _random.Random(zlib.crc32(repr((seed, i, j)).encode()))
            worst = max(worst, operator_distance(a, b, ctx, gens, rng=rng, **shared))
    return worst
