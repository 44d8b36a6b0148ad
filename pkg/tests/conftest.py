from __future__ import annotations

import numpy as np
import pytest

from linkframe import kernels

_ACCEPTANCE: list[tuple[str, str, str]] = []


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


@pytest.fixture(params=kernels.available_backends())
def backend(request, monkeypatch):
    monkeypatch.setattr(kernels, "BACKEND", request.param)
    return request.param


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        why = ""
        if report.failed:
            crash = getattr(report.longrepr, "reprcrash", None)
            why = crash.message.splitlines()[0] if crash else report.longreprtext.splitlines()[-1]
        _ACCEPTANCE.append((name, report.outcome, why))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome, why in _ACCEPTANCE:
        line = f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}"
        if why:
            line += f"  -- {why.strip()[:240]}"
        terminalreporter.write_line(line)
