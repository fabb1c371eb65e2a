import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from autonil.catalog import builtin_catalog  # noqa: E402

ACCEPTANCE: dict[str, tuple[bool, str]] = {}


@pytest.fixture(scope="session")
def catalog48():
    return builtin_catalog(48)


@pytest.fixture(scope="session")
def catalog16(catalog48):
    return [e for e in catalog48 if e.group.order <= 16]


@pytest.fixture(scope="session")
def catalog12(catalog48):
    return [e for e in catalog48 if e.group.order <= 12]


@pytest.fixture
def record():
    """Register one acceptance line; the test body still asserts."""

    def _record(key: str, passed: bool, detail: str = "") -> None:
        ACCEPTANCE[key] = (passed, detail)

    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: int(k.split()[0][2:])):
        passed, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {key}  {detail}")
