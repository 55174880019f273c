"""System containers, benchmark definitions, stacking, and file round-trips."""

import numpy as np
import pytest

from etcsparse.systems import (BENCHMARKS, EtcParams, LtiSystem, load_system,
                               save_system, stack_systems)


def test_benchmark_dimensions():
    rea1 = BENCHMARKS["rea1"]
    assert (rea1.n_x, rea1.n_u) == (4, 2)
    assert np.count_nonzero(rea1.E) == 0  # no process-noise path
    spring = BENCHMARKS["massspring2"]
    assert (spring.n_x, spring.n_u) == (4, 2)
    he1 = BENCHMARKS["he1"]
    assert (he1.n_x, he1.n_u, he1.n_y) == (4, 2, 2)


def test_spring_disturbance_enters_through_inputs():
    spring = BENCHMARKS["massspring2"]
    assert np.array_equal(spring.E, spring.B)


def test_step_applies_output_map():
    sys_ = BENCHMARKS["he1"]
    x = np.array([1.0, -0.5, 0.25, 2.0])
    u = np.array([0.3, -0.7])
    d = np.zeros(sys_.n_d)
    xn, y = sys_.step(x, u, d)
    assert np.allclose(xn, sys_.A @ x + sys_.B @ u)
    assert np.allclose(y, sys_.C @ x + sys_.D @ u)


def test_step_injects_disturbance():
    sys_ = BENCHMARKS["massspring2"]
    x = np.ones(4)
    u = np.zeros(2)
    d = np.array([0.1, -0.2])
    xn, _ = sys_.step(x, u, d)
    assert np.allclose(xn, sys_.A @ x + sys_.E @ d)


def test_stack_systems_structure():
    base = BENCHMARKS["massspring2"]
    sys3 = stack_systems(base, 3)
    assert (sys3.n_x, sys3.n_u) == (3 * base.n_x, 3 * base.n_u)
    # A and B are block-diagonal copies, E a vertical stack sharing one
    # disturbance across the subsystems.
    assert np.array_equal(sys3.A[:4, :4], base.A)
    assert np.array_equal(sys3.A[4:8, 4:8], base.A)
    assert np.count_nonzero(sys3.A[:4, 4:]) == 0
    assert sys3.E.shape == (3 * base.n_x, base.n_d)
    assert np.array_equal(sys3.E[8:], base.E)


def test_stack_systems_identity_for_one():
    base = BENCHMARKS["rea1"]
    assert stack_systems(base, 1) is base
    with pytest.raises(ValueError):
        stack_systems(base, 0)


def test_system_roundtrip(tmp_path):
    sys_ = BENCHMARKS["he1"]
    path = tmp_path / "he1.json"
    save_system(sys_, path)
    back = load_system(path)
    for field in ("A", "B", "C", "D", "E"):
        assert np.array_equal(getattr(back, field), getattr(sys_, field))
    assert back.name == sys_.name


def test_etc_params_validation():
    EtcParams(sigma_x=0.1, sigma_u=0.2, beta=0.999)
    EtcParams(sigma_x=0.1, sigma_u=0.2)  # beta optional
    with pytest.raises(ValueError):
        EtcParams(sigma_x=-0.1, sigma_u=0.2)
    with pytest.raises(ValueError):
        EtcParams(sigma_x=0.1, sigma_u=0.2, beta=1.0)
    with pytest.raises(ValueError):
        EtcParams(sigma_x=0.1, sigma_u=0.2, beta=0.0)
