"""Shared fixtures, random-topology samplers and acceptance reporting."""

from __future__ import annotations

import numpy as np
import pytest

from cogmc import MediumParams, Topology, derive_geometry


def fig3_topology() -> Topology:
    return Topology(
        x_P=[0.0, 0.0, 0.0],
        x_S=[0.0, 0.0, 0.0],
        y_P=[-30.0, -20.0, 0.0],
        y_S=[25.0, 10.0, 0.0],
        a_P=3.0,
        a_S=5.0,
    )


@pytest.fixture
def fig3_topo() -> Topology:
    return fig3_topology()


@pytest.fixture
def fig3_medium() -> MediumParams:
    return MediumParams(D=100.0, mu=0.0, Tb=1.0)


def _random_unit(rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def sample_topology(
    rng: np.random.Generator,
    a_lo: float = 0.5,
    a_hi: float = 2.5,
    r_lo: float = 8.0,
    r_hi: float = 30.0,
    sep_factor: float = 3.5,
) -> Topology:
    """Random far-field topology with the transmitters at the origin."""
    for _ in range(1000):
        a_p = rng.uniform(a_lo, a_hi)
        a_s = rng.uniform(a_lo, a_hi)
        y_p = _random_unit(rng) * rng.uniform(max(3.0 * a_p, r_lo), r_hi)
        y_s = _random_unit(rng) * rng.uniform(max(3.0 * a_s, r_lo), r_hi)
        if np.linalg.norm(y_p - y_s) < sep_factor * max(a_p, a_s):
            continue
        try:
            return Topology(
                x_P=[0.0, 0.0, 0.0],
                x_S=[0.0, 0.0, 0.0],
                y_P=y_p,
                y_S=y_s,
                a_P=a_p,
                a_S=a_s,
            )
        except ValueError:
            continue
    raise RuntimeError("could not sample a valid topology")


def sample_geometry(rng: np.random.Generator, **kwargs):
    """Random (geometry, D) pair for a random transmitter/target choice."""
    topo = sample_topology(rng, **kwargs)
    tx = rng.choice(["P", "S"])
    target = rng.choice(["P", "S"])
    return derive_geometry(topo, tx, target), float(rng.uniform(50.0, 500.0))


# ---------------------------------------------------------------------------
# acceptance-criteria reporting: one visible pass/fail line per criterion

_ACCEPTANCE_RESULTS: dict[str, str] = {}


def record_acceptance(criterion: str, detail: str = "") -> None:
    _ACCEPTANCE_RESULTS.setdefault(criterion, detail)


def pytest_runtest_logreport(report):
    if report.when != "call" or "test_acceptance" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    _ACCEPTANCE_RESULTS[name] = report.outcome.upper()


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for name in sorted(_ACCEPTANCE_RESULTS):
        outcome = _ACCEPTANCE_RESULTS[name]
        terminalreporter.write_line(f"{name}: {outcome}")
