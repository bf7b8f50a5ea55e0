import sys

import numpy as np
import pytest

from conevol import shapes


@pytest.fixture(scope="session")
def named():
    return {name: shapes.generate(name) for name in shapes.NAMED_SPECS}


@pytest.fixture(scope="session")
def random_hulls():
    return [shapes.random_inscribed(3, int(k), seed)
            for seed, k in enumerate(np.random.default_rng(7).integers(4, 20, size=40))]


def random_rotation(rng):
    q, r = np.linalg.qr(rng.standard_normal((3, 3)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULT_LINES", None)
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(lines):
        terminalreporter.write_line(lines[n])
