import numpy as np
import pytest

from moebius_motions.kinetic_metric import QuadratureRule


@pytest.fixture(scope="session")
def quad():
    return QuadratureRule(256)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = next((m for name, m in sys.modules.items() if name.endswith("test_acceptance")), None)
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(results):
        cases = results[crit]
        ok = all(p for _, p, _ in cases)
        failing = [f"{case}: {text}" for case, p, text in cases if not p]
        shown = failing if failing else [f"{case}: {text}" for case, _, text in cases[-1:]]
        terminalreporter.write_line(f"criterion {crit:2d}: {'PASS' if ok else 'FAIL'}  " + " | ".join(shown))
