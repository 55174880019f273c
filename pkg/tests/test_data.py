"""Data collection: bounded noise, deterministic streams, recorded shapes."""

import numpy as np
import pytest

from etcsparse.data import NoiseBounds, collect_data, run_experiment, sample_ball
from etcsparse.systems import BENCHMARKS

SPRING = BENCHMARKS["massspring2"]
BOUNDS = NoiseBounds(eps_d=0.1, eps_x=1e-3, eps_u=1e-3)


def test_dataset_shapes():
    ds = collect_data(SPRING, 50, BOUNDS, seed=3)
    assert ds.X.shape == (4, 51)
    assert ds.U.shape == (2, 50)
    assert ds.X_plus.shape == (4, 50)
    assert ds.T == 50


def test_same_seed_same_data():
    a = collect_data(SPRING, 40, BOUNDS, seed=11)
    b = collect_data(SPRING, 40, BOUNDS, seed=11)
    assert np.array_equal(a.X, b.X)
    assert np.array_equal(a.U, b.U)
    c = collect_data(SPRING, 40, BOUNDS, seed=12)
    assert not np.array_equal(a.X, c.X)


def test_measurement_noise_within_bounds():
    exp = run_experiment(SPRING, 100, BOUNDS, seed=5)
    assert np.all(np.linalg.norm(exp.delta_x, axis=0) <= BOUNDS.eps_x + 1e-15)
    assert np.all(np.linalg.norm(exp.delta_u, axis=0) <= BOUNDS.eps_u + 1e-15)
    assert np.all(np.linalg.norm(exp.d, axis=0) <= BOUNDS.eps_d + 1e-15)


def test_measured_equals_true_plus_noise():
    exp = run_experiment(SPRING, 30, BOUNDS, seed=9)
    ds = exp.dataset
    assert np.allclose(ds.X, exp.x_true + exp.delta_x)
    # The plant itself evolves on the true signals.
    for k in range(5):
        xn = SPRING.A @ exp.x_true[:, k] + SPRING.B @ exp.u_true[:, k] \
            + SPRING.E @ exp.d[:, k]
        assert np.allclose(xn, exp.x_true[:, k + 1])


def test_zero_noise_bounds_give_exact_data():
    clean = NoiseBounds(eps_d=0.0, eps_x=0.0, eps_u=0.0)
    exp = run_experiment(SPRING, 20, clean, seed=2)
    assert np.count_nonzero(exp.delta_x) == 0
    assert np.count_nonzero(exp.d) == 0


def test_sample_ball_radius_and_shape():
    rng = np.random.default_rng(0)
    pts = sample_ball(rng, 3, 0.5, 1000)
    assert pts.shape == (3, 1000)
    assert np.all(np.linalg.norm(pts, axis=0) <= 0.5 + 1e-15)
    assert np.all(sample_ball(rng, 3, 0.0, 10) == 0)
    with pytest.raises(ValueError):
        sample_ball(rng, 3, -1.0, 10)


def test_noise_bounds_validation():
    with pytest.raises(ValueError):
        NoiseBounds(eps_d=-0.1, eps_x=0.0, eps_u=0.0)
