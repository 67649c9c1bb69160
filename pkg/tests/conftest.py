import csv
from pathlib import Path

import pytest

DATA = Path(__file__).parent / "data"


def _pad(value: str) -> str:
    # the published table prints 0.75 without trailing zeros
    whole, frac = value.split(".")
    return f"{whole}.{frac:0<4}"


@pytest.fixture(scope="session")
def reference_table():
    """Transcribed threshold table: {k: (m_prime, {r: (text, flagged)})}."""
    out = {}
    with open(DATA / "table1.csv", newline="") as fh:
        for row in csv.DictReader(fh):
            k = int(row["k"])
            cells = {}
            for r in range(2, 11):
                raw = row[f"f_r{r}"]
                cells[r] = (_pad(raw.rstrip("*")), raw.endswith("*"))
            out[k] = (_pad(row["m_prime"]), cells)
    return out


ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def criterion(request):
    """Record one acceptance criterion's verdict for the terminal summary."""
    number = request.node.get_closest_marker("criterion").args[0]
    ACCEPTANCE[number] = (False, request.node.name)
    yield number
    rep = getattr(request.node, "rep_call", None)
    if rep is not None:
        ACCEPTANCE[number] = (rep.passed, request.node.name)


@pytest.hookimpl(hookwrapper=True, tryfirst=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        passed, name = ACCEPTANCE[number]
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  criterion {number:2d}  {name}")
