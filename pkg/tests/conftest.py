from functools import lru_cache

import numpy as np
import pytest

from stabadams.synth import synthesize


@lru_cache(maxsize=None)
def method(k, p, epsilon=0.0):
    """Synthesized methods are deterministic, so share them across tests."""
    return synthesize(k, p, epsilon)


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
