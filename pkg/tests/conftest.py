from __future__ import annotations

import numpy as np
import pytest

from bandrelevance.signal import Signal
from bandrelevance.synth import case1_corpus

FS = 20480.0
N = 20480

_acceptance_lines: list[str] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(num, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is not None and rep.when == "call":
        num, title = marker.args
        verdict = "PASS" if rep.passed else "FAIL"
        _acceptance_lines.append(f"[{verdict}] criterion {num}: {title} ({rep.duration:.2f} s)")


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_acceptance_lines, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def corpus0():
    return case1_corpus(0)


@pytest.fixture(scope="session")
def medium0(corpus0):
    return corpus0["medium"]


@pytest.fixture
def unit_sine():
    t = np.arange(N) / FS
    return Signal(np.sin(2 * np.pi * 100.0 * t), FS)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
