import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from vbsfusion.io import load_model  # noqa: E402


@pytest.fixture
def diabetes():
    return load_model("diabetes.vbs")


@pytest.fixture
def medical():
    return load_model("medical.vbs")


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if not test_acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in test_acceptance.RESULTS:
        line = f"{'PASS' if ok else 'FAIL'}  {name}"
        if detail:
            line += f"  [{detail}]"
        terminalreporter.write_line(line)
