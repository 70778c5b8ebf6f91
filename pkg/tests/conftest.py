from __future__ import annotations

import sys
from pathlib import Path

from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

# Deterministic runs: the same examples every time, no example database.
settings.register_profile(
    "repro",
    derandomize=True,
    database=None,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repro")

# Acceptance tests run last so that they can reuse the outcome of the
# property-law suite collected in the same session.
LAW_MODULE = "test_domain_laws.py"
ACCEPTANCE_MODULE = "test_acceptance.py"
LAW_OUTCOMES: dict = {}
ACCEPTANCE_LINES: list = []


def pytest_collection_modifyitems(session, config, items):
    items.sort(key=lambda item: item.nodeid.split("::")[0].endswith(ACCEPTANCE_MODULE))
    session.config._law_items = [i.nodeid for i in items if i.nodeid.split("::")[0].endswith(LAW_MODULE)]


def pytest_runtest_logreport(report):
    if report.nodeid.split("::")[0].endswith(LAW_MODULE):
        if report.when == "call" or report.failed:
            ok = report.passed and LAW_OUTCOMES.get(report.nodeid, True)
            LAW_OUTCOMES[report.nodeid] = ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
