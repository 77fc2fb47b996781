"""Delta-comb states in one and many variables.

A comb is a finite-support assignment of coefficients to points of a
2*eta lattice: index k sits at the exact point base - 2*k*eta (supports are
ShiftVectors, never floats).  Half-infinite vacuum combs are stored as a
finite window plus open-end flags; any operation that would need unknown
coefficients either shrinks its declared-valid window or refuses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Iterable, Mapping, Sequence

from .errors import UnalignedLattices, WindowTooSmall
from .shifts import SV_ETA, ShiftVector

_TWO_ETA = 2 * SV_ETA


def _prune(coeffs: Mapping, tol: float = 0.0) -> dict:
    if tol <= 0.0:
        return {k: complex(v) for k, v in coeffs.items() if v != 0}
    cap = max((abs(v) for v in coeffs.values()), default=0.0) * tol
    return {k: complex(v) for k, v in coeffs.items() if abs(v) > cap}


def lattice_offset(a: ShiftVector, b: ShiftVector) -> int | None:
    """j such that a - b = 2*j*eta, or None when off-lattice."""
    return (a - b).even_eta_steps()


@dataclass(frozen=True)
class Comb:
    """One-variable comb: coefficient f_k at the point base - 2*k*eta."""

    base: ShiftVector
    coeffs: dict
    open_lo: bool = False   # unknown tail at k below the stored window
    open_hi: bool = False   # unknown tail at k above the stored window

    def __post_init__(self):
        coeffs = dict(self.coeffs)
        object.__setattr__(self, "coeffs", coeffs)
        ks = coeffs.keys()
        object.__setattr__(self, "_kmin", min(ks) if ks else 0)
        object.__setattr__(self, "_kmax", max(ks) if ks else 0)

    # -- geometry --------------------------------------------------------
    def point(self, k: int) -> ShiftVector:
        return self.base - 2 * k * SV_ETA

    def indices(self):
        return sorted(self.coeffs)

    @property
    def kmin(self) -> int:
        return self._kmin

    @property
    def kmax(self) -> int:
        return self._kmax

    def known(self, k: int) -> bool:
        if self.open_hi and self.coeffs and k > self.kmax:
            return False
        if self.open_lo and self.coeffs and k < self.kmin:
            return False
        return True

    def coeff(self, k: int) -> complex:
        return self.coeffs.get(k, 0.0 + 0.0j)

    def pruned(self, tol: float = 0.0) -> "Comb":
        return replace(self, coeffs=_prune(self.coeffs, tol))

    def scaled(self, c: complex) -> "Comb":
        return replace(self, coeffs={k: c * v for k, v in self.coeffs.items()})

    def max_abs(self) -> float:
        return max((abs(v) for v in self.coeffs.values()), default=0.0)

    def rebase(self, new_base: ShiftVector) -> "Comb":
        j = lattice_offset(self.base, new_base)
        if j is None:
            raise UnalignedLattices("rebase target is off this comb's lattice")
        # base - 2k eta = new_base - 2(k - j) eta
        return Comb(new_base, {k - j: v for k, v in self.coeffs.items()},
                    self.open_lo, self.open_hi)

    @classmethod
    def from_points(cls, points: Iterable[tuple[ShiftVector, complex]]) -> "Comb":
        pts = list(points)
        if not pts:
            return cls(ShiftVector(), {})
        base = pts[0][0]
        coeffs: dict[int, complex] = {}
        for p, v in pts:
            j = lattice_offset(base, p)
            if j is None:
                raise UnalignedLattices(f"support {p} off lattice of {base}")
            coeffs[j] = coeffs.get(j, 0.0 + 0.0j) + v
        return cls(base, coeffs)

    # -- pairing ----------------------------------------------------------
    def pair(self, other: "Comb", strict: bool = False) -> complex:
        """Bilinear pairing sum_k f_k g_m over exactly matching supports."""
        j = lattice_offset(self.base, other.base)
        if j is None:
            if strict:
                raise UnalignedLattices(
                    f"comb bases differ by non-lattice vector: {self.base - other.base}")
            return 0.0 + 0.0j
        if (self.open_hi and other.open_hi) or (self.open_lo and other.open_lo):
            raise WindowTooSmall(
                "pairing of two combs open in the same lattice direction")
        # self index k matches other index k - j
        total = 0.0 + 0.0j
        for k, fk in self.coeffs.items():
            m = k - j
            if not other.known(m):
                if fk != 0:
                    raise WindowTooSmall(
                        "pairing touches the unknown tail of a truncated comb")
                continue
            total += fk * other.coeff(m)
        # unknown tail of self overlapping stored support of other
        for m, gm in other.coeffs.items():
            if gm != 0 and not self.known(m + j):
                raise WindowTooSmall(
                    "pairing touches the unknown tail of a truncated comb")
        return total

    def pair_function(self, func: Callable[[complex], complex],
                      gens: Mapping[str, complex]) -> complex:
        """(F(z), f) = sum_k F(point_k) f_k for an analytic F."""
        if self.open_lo or self.open_hi:
            raise WindowTooSmall("cannot pair an analytic function with an "
                                 "open-ended comb")
        total = 0.0 + 0.0j
        for k, fk in self.coeffs.items():
            total += func(self.point(k).value(gens)) * fk
        return total

    def to_json(self):
        return {"base": self.base.to_json(),
                "open": [self.open_lo, self.open_hi],
                "coeffs": [[k, v.real, v.imag]
                           for k, v in sorted(self.coeffs.items())]}


def comb_lincomb(parts: Sequence[tuple[complex, Comb]]) -> Comb:
    """Linear combination of lattice-aligned combs, honouring open ends."""
    parts = [(c, f) for c, f in parts]
    if not parts:
        return Comb(ShiftVector(), {})
    base = parts[0][1].base
    out: dict[int, complex] = {}
    lo, hi = -math.inf, math.inf
    open_lo = open_hi = False
    for c, f in parts:
        j = lattice_offset(f.base, base)
        if j is None:
            raise UnalignedLattices("lincomb over unaligned combs")
        # f.base - base = 2*j*eta, so f index k sits at base-frame index k - j
        for k, v in f.coeffs.items():
            out[k - j] = out.get(k - j, 0.0 + 0.0j) + c * v
        if f.open_lo:
            open_lo = True
            lo = max(lo, f.kmin - j)
        if f.open_hi:
            open_hi = True
            hi = min(hi, f.kmax - j)
    res = {k: v for k, v in out.items() if lo <= k <= hi}
    return Comb(base, res, open_lo=open_lo, open_hi=open_hi)


def comb_residual(lhs: Comb, rhs: Comb, *, floor_rel: float = 1e-250) -> float:
    """Max difference over the commonly known window, relative to the max
    local magnitude (the point itself and its lattice neighbours)."""
    j = lattice_offset(lhs.base, rhs.base)
    if j is None:
        scale = max(lhs.max_abs(), rhs.max_abs())
        return 1.0 if scale > 0 else 0.0
    keys = set(lhs.coeffs) | {m + j for m in rhs.coeffs}
    overall = max(lhs.max_abs(), rhs.max_abs(), 1e-300)

    def local(k):
        return max(abs(lhs.coeff(k)), abs(rhs.coeff(k - j)))

    worst = 0.0
    compared = 0
    for k in keys:
        if not (lhs.known(k) and rhs.known(k - j)):
            continue
        s = max(local(k - 1), local(k), local(k + 1))
        if s <= floor_rel * overall:
            continue
        compared += 1
        worst = max(worst, abs(lhs.coeff(k) - rhs.coeff(k - j)) / s)
    if compared == 0:
        raise WindowTooSmall("no commonly known support to compare")
    return worst


# ---------------------------------------------------------------------------
# Many variables
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MultiComb:
    """N-variable comb; coefficient at index vector k sits at the point
    (bases[s] - 2*k[s]*eta) per site."""

    bases: tuple
    coeffs: dict
    open_lo: tuple = None
    open_hi: tuple = None

    def __post_init__(self):
        n = len(self.bases)
        coeffs = dict(self.coeffs)
        object.__setattr__(self, "coeffs", coeffs)
        if self.open_lo is None:
            object.__setattr__(self, "open_lo", (False,) * n)
        if self.open_hi is None:
            object.__setattr__(self, "open_hi", (False,) * n)
        ranges = []
        for s in range(n):
            ks = [k[s] for k in coeffs]
            ranges.append((min(ks), max(ks)) if ks else (0, 0))
        object.__setattr__(self, "_ranges", tuple(ranges))

    @property
    def nvars(self) -> int:
        return len(self.bases)

    def point(self, kvec) -> tuple:
        return tuple(self.bases[s] - 2 * kvec[s] * SV_ETA for s in range(self.nvars))

    def site_range(self, s: int) -> tuple[int, int]:
        return self._ranges[s]

    def known(self, kvec) -> bool:
        for s in range(self.nvars):
            lo, hi = self.site_range(s)
            if self.open_hi[s] and kvec[s] > hi:
                return False
            if self.open_lo[s] and kvec[s] < lo:
                return False
        return True

    def coeff(self, kvec) -> complex:
        return self.coeffs.get(tuple(kvec), 0.0 + 0.0j)

    def max_abs(self) -> float:
        return max((abs(v) for v in self.coeffs.values()), default=0.0)

    def scaled(self, c: complex) -> "MultiComb":
        return replace(self, coeffs={k: c * v for k, v in self.coeffs.items()})

    def pruned(self, tol: float = 0.0) -> "MultiComb":
        return replace(self, coeffs=_prune(self.coeffs, tol))

    @classmethod
    def from_product(cls, factors: Sequence[Comb]) -> "MultiComb":
        """Tensor product of one-variable combs (factorized constructor)."""
        bases = tuple(f.base for f in factors)
        coeffs = {(): 1.0 + 0.0j}
        for f in factors:
            coeffs = {k + (i,): v * w for k, v in coeffs.items()
                      for i, w in f.coeffs.items()}
        return cls(bases, coeffs,
                   open_lo=tuple(f.open_lo for f in factors),
                   open_hi=tuple(f.open_hi for f in factors))

    def to_json(self):
        return {"bases": [b.to_json() for b in self.bases],
                "open": [list(self.open_lo), list(self.open_hi)],
                "coeffs": [[list(k), v.real, v.imag]
                           for k, v in sorted(self.coeffs.items())]}

    def pair(self, other: "MultiComb", strict: bool = False) -> complex:
        """Full contraction over all sites with exact support matching."""
        if self.nvars != other.nvars:
            raise UnalignedLattices("pairing combs of different arity")
        offs = []
        for s in range(self.nvars):
            j = lattice_offset(self.bases[s], other.bases[s])
            if j is None:
                if strict:
                    raise UnalignedLattices(f"site {s} lattices unaligned")
                return 0.0 + 0.0j
            offs.append(j)
            if (self.open_hi[s] and other.open_hi[s]) or \
                    (self.open_lo[s] and other.open_lo[s]):
                raise WindowTooSmall(
                    f"site {s}: pairing combs open in the same direction")
        total = 0.0 + 0.0j
        for k, fk in self.coeffs.items():
            m = tuple(k[s] - offs[s] for s in range(self.nvars))
            if other.known(m):
                total += fk * other.coeff(m)
            elif fk != 0:
                raise WindowTooSmall("multi-pairing touches an unknown tail")
        for m, gm in other.coeffs.items():
            k = tuple(m[s] + offs[s] for s in range(self.nvars))
            if gm != 0 and not self.known(k):
                raise WindowTooSmall("multi-pairing touches an unknown tail")
        return total


def multicomb_lincomb(parts: Sequence[tuple[complex, MultiComb]]) -> MultiComb:
    if not parts:
        return MultiComb((), {})
    ref = parts[0][1]
    n = ref.nvars
    out: dict[tuple, complex] = {}
    lo = [-math.inf] * n
    hi = [math.inf] * n
    open_lo = [False] * n
    open_hi = [False] * n
    for c, f in parts:
        offs = []
        for s in range(n):
            j = lattice_offset(f.bases[s], ref.bases[s])
            if j is None:
                raise UnalignedLattices("lincomb over unaligned multicombs")
            offs.append(j)
        # f index k sits at ref-frame index k - offs
        for k, v in f.coeffs.items():
            kk = tuple(k[s] - offs[s] for s in range(n))
            out[kk] = out.get(kk, 0.0 + 0.0j) + c * v
        for s in range(n):
            flo, fhi = f.site_range(s)
            if f.open_lo[s]:
                open_lo[s] = True
                lo[s] = max(lo[s], flo - offs[s])
            if f.open_hi[s]:
                open_hi[s] = True
                hi[s] = min(hi[s], fhi - offs[s])
    res = {k: v for k, v in out.items()
           if all(lo[s] <= k[s] <= hi[s] for s in range(n))}
    return MultiComb(ref.bases, res, tuple(open_lo), tuple(open_hi))


def multicomb_residual(lhs: MultiComb, rhs: MultiComb, *,
                       floor_rel: float = 1e-250) -> float:
    """Max difference relative to the max local (axis-neighbour) magnitude."""
    n = lhs.nvars
    offs = []
    for s in range(n):
        j = lattice_offset(lhs.bases[s], rhs.bases[s])
        if j is None:
            return 1.0 if max(lhs.max_abs(), rhs.max_abs()) > 0 else 0.0
        offs.append(j)
    keys = set(lhs.coeffs) | {tuple(m[s] + offs[s] for s in range(n))
                              for m in rhs.coeffs}
    overall = max(lhs.max_abs(), rhs.max_abs(), 1e-300)

    def local(k):
        m = tuple(k[s] - offs[s] for s in range(n))
        best = max(abs(lhs.coeff(k)), abs(rhs.coeff(m)))
        for s in range(n):
            for d in (-1, 1):
                kk = k[:s] + (k[s] + d,) + k[s + 1:]
                mm = tuple(kk[t] - offs[t] for t in range(n))
                best = max(best, abs(lhs.coeff(kk)), abs(rhs.coeff(mm)))
        return best

    worst = 0.0
    compared = 0
    for k in keys:
        m = tuple(k[s] - offs[s] for s in range(n))
        if not (lhs.known(k) and rhs.known(m)):
            continue
        s = local(k)
        if s <= floor_rel * overall:
            continue
        compared += 1
        worst = max(worst, abs(lhs.coeff(k) - rhs.coeff(m)) / s)
    if compared == 0:
        raise WindowTooSmall("no commonly known support to compare")
    return worst
