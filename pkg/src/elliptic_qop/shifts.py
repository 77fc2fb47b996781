"""Exact symbolic shift vectors.

Delta-comb supports must be matched analytically, never by floating
comparison: a support point is a rational combination of registered
generators (1, tau, eta, lambda, ell*eta, per-site edge constants, ...).
ShiftVector is an immutable rational coordinate vector over generator ids
with exact arithmetic and a numeric evaluation hook.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping


def _norm(coords: Iterable[tuple[str, Fraction]]) -> tuple:
    acc: dict[str, Fraction] = {}
    for gen, coeff in coords:
        coeff = Fraction(coeff)
        if coeff:
            acc[gen] = acc.get(gen, Fraction(0)) + coeff
    return tuple(sorted((g, c) for g, c in acc.items() if c))


class ShiftVector:
    """Exact rational vector over named shift generators."""

    __slots__ = ("coords", "_hash")

    def __init__(self, coords: Iterable[tuple[str, Fraction]] = ()):
        object.__setattr__(self, "coords", _norm(coords))
        object.__setattr__(self, "_hash", hash(self.coords))

    def __setattr__(self, *_):
        raise AttributeError("ShiftVector is immutable")

    # -- construction ---------------------------------------------------
    @classmethod
    def unit(cls, gen: str, coeff=1) -> "ShiftVector":
        return cls(((gen, Fraction(coeff)),))

    # -- algebra ---------------------------------------------------------
    def __add__(self, other: "ShiftVector") -> "ShiftVector":
        return ShiftVector(self.coords + other.coords)

    def __sub__(self, other: "ShiftVector") -> "ShiftVector":
        return self + (-other)

    def __neg__(self) -> "ShiftVector":
        return ShiftVector(tuple((g, -c) for g, c in self.coords))

    def __mul__(self, k) -> "ShiftVector":
        k = Fraction(k)
        return ShiftVector(tuple((g, c * k) for g, c in self.coords))

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, ShiftVector) and self.coords == other.coords

    def __hash__(self) -> int:
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.coords)

    def __repr__(self) -> str:
        if not self.coords:
            return "SV(0)"
        parts = []
        for g, c in self.coords:
            parts.append(f"{c}*{g}" if c != 1 else g)
        return "SV(" + " + ".join(parts) + ")"

    # -- queries ----------------------------------------------------------
    def coeff(self, gen: str) -> Fraction:
        for g, c in self.coords:
            if g == gen:
                return c
        return Fraction(0)

    def is_zero(self) -> bool:
        return not self.coords

    def eta_steps(self) -> Fraction | None:
        """If the vector is c*eta (possibly zero), return c, else None."""
        if not self.coords:
            return Fraction(0)
        if len(self.coords) == 1 and self.coords[0][0] == "eta":
            return self.coords[0][1]
        return None

    def even_eta_steps(self) -> int | None:
        """If the vector equals 2*j*eta with integer j, return j."""
        c = self.eta_steps()
        if c is None:
            return None
        half = c / 2
        return int(half) if half.denominator == 1 else None

    def value(self, gens: Mapping[str, complex]) -> complex:
        """Numeric value under a generator assignment."""
        total = 0j
        for g, c in self.coords:
            total += complex(gens[g]) * (c.numerator / c.denominator)
        return total

    def to_json(self):
        return [[g, [c.numerator, c.denominator]] for g, c in self.coords]


SV_ZERO = ShiftVector()
SV_ONE = ShiftVector.unit("one")
SV_TAU = ShiftVector.unit("tau")
SV_ETA = ShiftVector.unit("eta")


def sv(gen: str, coeff=1) -> ShiftVector:
    return ShiftVector.unit(gen, coeff)
