import sys
from pathlib import Path

import pytest

FIXTURES = Path(__file__).resolve().parent / "fixtures"
sys.path.insert(0, str(FIXTURES))

STUB_ENGINE = FIXTURES / "stub_engine.py"

# filled by test_acceptance.py, printed at the end of the session
ACCEPTANCE = {}


@pytest.fixture
def stub_engine():
    return str(STUB_ENGINE)


@pytest.fixture
def rng():
    import numpy as np

    return np.random.default_rng(20110702)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
