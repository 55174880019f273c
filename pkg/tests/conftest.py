"""Shared fixtures: one dataset and one reference design per benchmark.

Everything here is deterministic (fixed seeds), so expensive synthesis runs
are session-scoped and reused across test modules.
"""

import numpy as np
import pytest

from etcsparse.data import NoiseBounds, collect_data, sample_ball
from etcsparse.synthesis import algorithm1, algorithm2, algorithm3
from etcsparse.systems import BENCHMARKS, EtcParams
from etcsparse.uncertainty import build_uncertainty

# Benchmark operating points used throughout the suite.
REA1_POINT = dict(sigma_x=0.1581, sigma_u=0.01, beta=0.999, eps_d=0.0,
                  x0=(-1.0, -2.0, 2.0, -2.0), T_p=60)
SPRING_POINT = dict(sigma_x=0.1414, sigma_u=0.3162, beta=0.999, eps_d=0.1,
                    alpha1=0.05, x0=(1.0, -2.0, 2.0, -1.0), T_p=100)
HE1_POINT = dict(sigma_x=0.1414, sigma_u=0.4472, eps_d=0.1, T_p=100)

DATA_LEN = 100
SEED = 0


def make_setup(name, point):
    sys_ = BENCHMARKS[name]
    bounds = NoiseBounds(eps_d=point["eps_d"], eps_x=1e-3, eps_u=1e-3)
    data = collect_data(sys_, DATA_LEN, bounds, seed=SEED)
    unc = build_uncertainty(data, sys_.E)
    etc = EtcParams(sigma_x=point["sigma_x"], sigma_u=point["sigma_u"],
                    beta=point.get("beta"))
    return sys_, bounds, unc, etc


@pytest.fixture(scope="session")
def rea1_setup():
    return make_setup("rea1", REA1_POINT)


@pytest.fixture(scope="session")
def spring_setup():
    return make_setup("massspring2", SPRING_POINT)


@pytest.fixture(scope="session")
def he1_setup():
    return make_setup("he1", HE1_POINT)


@pytest.fixture(scope="session")
def rea1_design(rea1_setup):
    _, _, unc, etc = rea1_setup
    res = algorithm1(unc, etc)
    assert res.ok, res.notes
    return res


@pytest.fixture(scope="session")
def spring_design(spring_setup):
    _, _, unc, etc = spring_setup
    res = algorithm2(unc, etc, eps_d=SPRING_POINT["eps_d"],
                     alpha1=SPRING_POINT["alpha1"])
    assert res.ok, res.notes
    return res


@pytest.fixture(scope="session")
def he1_design(he1_setup):
    sys_, _, unc, etc = he1_setup
    res = algorithm3(unc, etc, sys_.C, sys_.D)
    assert res.ok, res.notes
    return res


def he1_disturbance_profiles(n_profiles=100, active=60, radius=0.1,
                             horizon=100, n_d=2, seed=23):
    """Admissible disturbance set: ball-bounded for an initial window, then
    off, so every profile has finite energy."""
    rng = np.random.default_rng(seed)
    profiles = []
    for _ in range(n_profiles):
        d = np.zeros((n_d, horizon))
        d[:, :active] = sample_ball(rng, n_d, radius, active)
        profiles.append(d)
    return profiles


# -- acceptance reporting ---------------------------------------------------

_ACCEPTANCE: list[tuple[int, bool, str]] = []


@pytest.fixture(scope="session")
def record_criterion():
    def _record(num: int, ok: bool, detail: str) -> None:
        _ACCEPTANCE.append((num, ok, detail))
    return _record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num, ok, detail in sorted(_ACCEPTANCE):
        verdict = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"criterion {num}: {verdict} - {detail}")
