import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from kappa_lp.lp_core import LPInstance

settings.register_profile("repo", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")


def small_instance(A, x0, c, u, name="t"):
    A = np.asarray(A, dtype=float)
    return LPInstance(A, A @ np.asarray(x0, dtype=float), c, u, name=name)


@pytest.fixture
def identity2():
    return LPInstance(np.eye(2), [1.0, 1.0], [1.0, 1.0], [2.0, 2.0])


@pytest.fixture
def simplex3():
    return LPInstance([[1.0, 1.0, 1.0]], [1.0], [0.0, 1.0, 2.0], [1.0, 1.0, 1.0])


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        title, ok = results[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {title}")
