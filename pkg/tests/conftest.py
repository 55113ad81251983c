import numpy as np
import pytest

from hybridom.params import TWO_PI, SystemParams, reference_params


@pytest.fixture
def base() -> SystemParams:
    return reference_params()


@pytest.fixture
def atom_off() -> SystemParams:
    return reference_params(g_ac=0.0)


def relaxed(**hz) -> SystemParams:
    """Stable-by-construction relaxed-damping parameters, values as X/2pi in Hz."""
    vals = dict(omega_m=10e6, gamma_m=50e3, kappa=215e3, delta_c=10e6, g0=1.2e6,
                g_ac=0.0, gamma_a=200e3, delta_a=-10e6)
    vals.update(hz)
    return SystemParams.from_hz(**vals)


def rel(a, b):
    return np.abs(np.asarray(a) - np.asarray(b)) / np.abs(np.asarray(b))


PUMP = TWO_PI * 2e6


ACCEPTANCE_LINES = {}


@pytest.fixture
def criterion(request):
    """Record one pass/fail line for an acceptance criterion."""

    def record(number: int, title: str, ok: bool, detail: str):
        line = f"criterion {number:>2} [{'PASS' if ok else 'FAIL'}] {title}: {detail}"
        ACCEPTANCE_LINES[number] = line
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])
