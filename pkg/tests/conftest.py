import itertools
import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from calibrax import Triple, standard_frame

settings.register_profile(
    "calibrax", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("calibrax")

E = np.eye(8)


def span(*idx):
    return np.column_stack([E[i] for i in idx])


def quat_mul(p, q):
    """Hamilton product on (1, i, j, k) coordinates, written out by hand."""
    a1, b1, c1, d1 = p
    a2, b2, c2, d2 = q
    return np.array([
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    ])


def left_action_oracle(q):
    """8x8 matrix of x -> (q x_1, q x_2) on H^2, column by column."""
    M = np.zeros((8, 8))
    for col in range(8):
        x = E[col]
        M[:, col] = np.concatenate([quat_mul(q, x[:4]), quat_mul(q, x[4:])])
    return M


def perm_sign(p):
    sign, seen = 1, list(p)
    for i in range(len(seen)):
        while seen[i] != i:
            j = seen[i]
            seen[i], seen[j] = seen[j], seen[i]
            sign = -sign
    return sign


def wedge_oracle(a, b, vecs):
    """(a ^ b)(v1..v4) by the alternating sum over S4, with 2-forms as matrices."""
    total = 0.0
    for p in itertools.permutations(range(4)):
        v = [vecs[i] for i in p]
        total += perm_sign(p) * (v[0] @ a @ v[1]) * (v[2] @ b @ v[3])
    return total / 4.0


def pfaffian_oracle(m):
    """Sum over perfect matchings of {0,1,2,3}."""
    return m[0, 1] * m[2, 3] - m[0, 2] * m[1, 3] + m[0, 3] * m[1, 2]


def random_frame(rng):
    Q, R = np.linalg.qr(rng.standard_normal((8, 4)))
    return Q * np.sign(np.diag(R))


def random_unit3(rng):
    u = rng.standard_normal(3)
    return u / np.linalg.norm(u)


@pytest.fixture(scope="session")
def H():
    return standard_frame()


@pytest.fixture(scope="session")
def TK():
    return Triple.preset("K")


@pytest.fixture
def rng():
    return np.random.default_rng(2024)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(mod.LINES):
            terminalreporter.write_line(line)
