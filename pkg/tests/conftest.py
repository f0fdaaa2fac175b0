import os
import sys

import pytest

SRC_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "src")
if SRC_DIR not in sys.path:
    sys.path.insert(0, SRC_DIR)


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running solver and brute-force checks")


@pytest.fixture
def solve_config():
    from u3cubature.core.config import SolveConfig

    return SolveConfig(seed=1, restarts=100, workers=2)
