import sys
from pathlib import Path

import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

_CRITERIA = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if not item.name.startswith("test_criterion_"):
        return
    if rep.when == "call" or rep.failed:
        label = (item.function.__doc__ or "").strip().splitlines()[0]
        prev = _CRITERIA.get(item.name, (label, True))
        _CRITERIA[item.name] = (label, prev[1] and rep.passed)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for name in sorted(_CRITERIA):
        label, ok = _CRITERIA[name]
        num = int(name.rsplit("_", 1)[1])
        tr.write_line(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {label}")
