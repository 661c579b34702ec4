"""Shared samplers and fixtures.

Every test seeds its own generator (or uses the ``rng`` fixture) so the
suite is order-independent and reproducible.
"""

import numpy as np
import pytest

from discordlab.qstate import BellDiagonalParams, TwoQubitState, XStateParams


@pytest.fixture
def rng():
    return np.random.default_rng(20250814)


def ginibre_state(rng, rank=4):
    """Random full-rank density matrix, G G^dag / tr."""
    g = rng.normal(size=(4, rank)) + 1j * rng.normal(size=(4, rank))
    m = g @ g.conj().T
    return TwoQubitState(m / m.trace().real)


def haar_unitary(rng, dim=2):
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_x_params(rng):
    """Valid X-state parameters: Dirichlet diagonal, coherences below the
    positivity ceiling, phases uniform."""
    a, b, c, d = rng.dirichlet(np.ones(4))
    return XStateParams(
        a=a,
        b=b,
        c=c,
        d=d,
        u=rng.uniform() * np.sqrt(a * d),
        v=rng.uniform() * np.sqrt(b * c),
        mu=rng.uniform(0.0, 2.0 * np.pi),
        nu=rng.uniform(0.0, 2.0 * np.pi),
    )


def random_bell_diagonal(rng):
    while True:
        t1, t2, t3 = rng.uniform(-1.0, 1.0, size=3)
        if 1.0 + t3 >= abs(t1 - t2) and 1.0 - t3 >= abs(t1 + t2):
            return BellDiagonalParams(t1=t1, t2=t2, t3=t3)


def random_direction(rng):
    n = rng.normal(size=3)
    return n / np.linalg.norm(n)
