import random

import pytest

from elliptic_qop import ModuliContext, SpinParams, spin_gens


@pytest.fixture(scope="session")
def ctx():
    return ModuliContext()


@pytest.fixture(scope="session")
def spin():
    return SpinParams(0.23 + 0.11j)


@pytest.fixture()
def rng():
    return random.Random(1234)


@pytest.fixture()
def gens(ctx, spin):
    g = spin_gens(spin, ctx)
    g.update(lam=0.19 + 0.05j, mu=-0.13 + 0.08j,
             zeta1=0.17 + 0.06j, zeta2=-0.23 + 0.10j, zetap=0.05 - 0.09j)
    return g
