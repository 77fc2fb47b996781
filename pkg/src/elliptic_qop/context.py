"""Global moduli / precision context.

A :class:`ModuliContext` bundles the two elliptic moduli (tau, eta), the
truncation policy for all series and products, the generic-position guard
radius, and the registry of named shift generators used for exact
delta-support bookkeeping.  Contexts are immutable; deriving a new one with
extra generators is cheap.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace
from types import MappingProxyType
from typing import Mapping

from .errors import ConfigInvalid

TWO_PI_I = 2j * math.pi

# Harness defaults; both nomes are well inside the unit disk so every
# series here converges geometrically.
DEFAULT_TAU = 0.10 + 1.00j
DEFAULT_ETA = 0.07 + 0.31j


def _as_mapping(gens) -> Mapping[str, complex]:
    return MappingProxyType(dict(gens))


@dataclass(frozen=True)
class ModuliContext:
    """Immutable parameter record shared by every evaluation.

    tau, eta        -- elliptic module and quantum shift, Im > 0 each
    series_tol      -- relative truncation target for adaptive series
    max_terms       -- hard cap on adaptive loops
    generic_guard   -- minimal admissible distance to pole/zero lattices
    gens            -- generator registry: id -> numeric value; always
                       contains "one", "tau", "eta"
    """

    tau: complex = DEFAULT_TAU
    eta: complex = DEFAULT_ETA
    series_tol: float = 1e-12
    max_terms: int = 256
    generic_guard: float = 1e-4
    gens: Mapping[str, complex] = field(default=None, compare=False)

    def __post_init__(self):
        if self.tau.imag <= 0:
            raise ConfigInvalid(f"Im(tau) must be positive, got {self.tau}")
        if self.eta.imag <= 0:
            raise ConfigInvalid(f"Im(eta) must be positive, got {self.eta}")
        if not (0.0 < self.series_tol <= 1e-6):
            raise ConfigInvalid(f"series_tol out of range: {self.series_tol}")
        if self.max_terms < 64:
            raise ConfigInvalid(f"max_terms must be >= 64, got {self.max_terms}")
        base = {"one": 1.0 + 0.0j, "tau": complex(self.tau), "eta": complex(self.eta)}
        if self.gens is not None:
            for key, val in self.gens.items():
                if key in base and complex(val) != base[key]:
                    raise ConfigInvalid(f"generator {key!r} conflicts with moduli")
                base[key] = complex(val)
        object.__setattr__(self, "gens", _as_mapping(base))

    # -- derived nomes -------------------------------------------------
    @property
    def q_tau(self) -> complex:
        return cmath.exp(TWO_PI_I * self.tau)

    @property
    def q_eta(self) -> complex:
        """Nome of the second gamma period 2*eta."""
        return cmath.exp(2 * TWO_PI_I * self.eta)

    # -- generator registry --------------------------------------------
    def extended(self, **values: complex) -> "ModuliContext":
        """New context with additional named generators registered."""
        merged = dict(self.gens)
        for key, val in values.items():
            if key in ("one", "tau", "eta") and complex(val) != merged[key]:
                raise ConfigInvalid(f"cannot rebind reserved generator {key!r}")
            merged[key] = complex(val)
        return replace(self, gens=merged)

    def value_of(self, gen: str) -> complex:
        try:
            return self.gens[gen]
        except KeyError:
            raise ConfigInvalid(f"generator {gen!r} is not registered") from None
