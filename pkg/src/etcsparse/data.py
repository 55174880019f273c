"""Experiment data collection with bounded measurement and process noise."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .systems import LtiSystem


@dataclass(frozen=True)
class NoiseBounds:
    """Euclidean-norm bounds on process disturbance and state/input measurement noise."""

    eps_d: float = 0.0
    eps_x: float = 0.0
    eps_u: float = 0.0

    def __post_init__(self):
        if min(self.eps_d, self.eps_x, self.eps_u) < 0:
            raise ValueError("noise bounds must be nonnegative")


@dataclass(frozen=True)
class DataSet:
    """Measured trajectory data.

    Columns of X_plus are successor-state measurements x_m(k+1), X_minus and
    U_minus hold the matching state and input measurements, and `bounds` are
    the norm bounds the noise realizations respected.
    """

    X_plus: np.ndarray
    X_minus: np.ndarray
    U_minus: np.ndarray
    bounds: NoiseBounds

    def __post_init__(self):
        ok = (self.X_plus.shape == self.X_minus.shape
              and self.X_plus.shape[1] == self.U_minus.shape[1])
        if not ok:
            raise ValueError("X_plus, X_minus, U_minus must share the sample count")

    @property
    def T(self) -> int:
        return self.X_plus.shape[1]

    @property
    def n_x(self) -> int:
        return self.X_plus.shape[0]

    @property
    def n_u(self) -> int:
        return self.U_minus.shape[0]


@dataclass(frozen=True)
class Experiment:
    """A collected dataset together with the hidden true trajectory.

    The truth fields exist only so validation can audit the collection; nothing
    downstream of the measured DataSet may read them.
    """

    data: DataSet
    X_true: np.ndarray
    U_true: np.ndarray
    D_true: np.ndarray


def sample_ball(rng: np.random.Generator, dim: int, radius: float, count: int) -> np.ndarray:
    """Sample `count` points uniformly from the closed Euclidean ball of given
    radius, returned as a (dim, count) array."""
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    if radius == 0 or dim == 0:
        return np.zeros((dim, count))
    dirs = rng.standard_normal((dim, count))
    norms = np.linalg.norm(dirs, axis=0)
    norms[norms == 0] = 1.0
    radii = radius * rng.random(count) ** (1.0 / dim)
    return dirs / norms * radii


def run_experiment(sys: LtiSystem, T: int, bounds: NoiseBounds, seed: int = 0,
                   x0: np.ndarray | None = None,
                   input_law: Callable[[int, np.random.Generator], np.ndarray] | None = None,
                   ) -> Experiment:
    """Run an open-loop experiment of length T and return measured data plus truth.

    The default excitation draws each input component i.i.d. uniform on [-1, 1]
    per step; pass `input_law(k, rng)` to override. The process disturbance and
    the additive state and input measurement noises are uniform on norm balls of
    the radii in `bounds`. Each random source gets an independent substream of
    `seed`, so e.g. changing eps_d does not reshuffle the input sequence.
    """
    if T < 1:
        raise ValueError("T must be positive")
    ss = np.random.SeedSequence(seed)
    rng_u, rng_d, rng_nx, rng_nu = (np.random.default_rng(s) for s in ss.spawn(4))

    if input_law is None:
        U = rng_u.uniform(-1.0, 1.0, size=(sys.n_u, T))
    else:
        U = np.column_stack([np.asarray(input_law(k, rng_u), dtype=float).ravel()
                             for k in range(T)])
    D = sample_ball(rng_d, sys.n_d, bounds.eps_d, T)
    Nx = sample_ball(rng_nx, sys.n_x, bounds.eps_x, T + 1)
    Nu = sample_ball(rng_nu, sys.n_u, bounds.eps_u, T)

    X = np.zeros((sys.n_x, T + 1))
    if x0 is not None:
        X[:, 0] = np.asarray(x0, dtype=float).ravel()
    for k in range(T):
        X[:, k + 1] = sys.A @ X[:, k] + sys.B @ U[:, k] + sys.E @ D[:, k]

    Xmeas = X + Nx
    data = DataSet(X_plus=Xmeas[:, 1:], X_minus=Xmeas[:, :-1],
                   U_minus=U + Nu, bounds=bounds)
    return Experiment(data=data, X_true=X, U_true=U, D_true=D)


def collect_data(sys: LtiSystem, T: int, bounds: NoiseBounds, seed: int = 0,
                 x0: np.ndarray | None = None,
                 input_law: Callable[[int, np.random.Generator], np.ndarray] | None = None,
                 ) -> DataSet:
    """Collect measured data only; see run_experiment for the sampling scheme."""
    return run_experiment(sys, T, bounds, seed, x0=x0, input_law=input_law).data
