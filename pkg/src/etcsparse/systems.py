"""Discrete-time plant models, benchmark instances, and system file I/O."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


@dataclass(frozen=True)
class LtiSystem:
    """Discrete-time plant x+ = A x + B u + E d with output y = C x + D u."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray
    E: np.ndarray
    name: str = ""

    def __post_init__(self):
        for f in ("A", "B", "C", "D", "E"):
            object.__setattr__(self, f, np.atleast_2d(np.asarray(getattr(self, f), dtype=float)))
        nx = self.A.shape[0]
        if self.A.shape != (nx, nx):
            raise ValueError(f"A must be square, got {self.A.shape}")
        if self.B.shape[0] != nx:
            raise ValueError("B row count must match A")
        if self.E.shape[0] != nx:
            raise ValueError("E row count must match A")
        if self.C.shape[1] != nx:
            raise ValueError("C column count must match A")
        if self.D.shape != (self.C.shape[0], self.B.shape[1]):
            raise ValueError("D must be n_y x n_u")

    @property
    def n_x(self) -> int:
        return self.A.shape[0]

    @property
    def n_u(self) -> int:
        return self.B.shape[1]

    @property
    def n_y(self) -> int:
        return self.C.shape[0]

    @property
    def n_d(self) -> int:
        return self.E.shape[1]

    def step(self, x: np.ndarray, u: np.ndarray, d: np.ndarray | None = None):
        """One plant update; returns (x_next, y)."""
        x = np.asarray(x, dtype=float).ravel()
        u = np.asarray(u, dtype=float).ravel()
        xn = self.A @ x + self.B @ u
        if d is not None:
            xn = xn + self.E @ np.asarray(d, dtype=float).ravel()
        y = self.C @ x + self.D @ u
        return xn, y


@dataclass(frozen=True)
class EtcParams:
    """Event-trigger thresholds and the decay rate used by the synthesis problems.

    sigma_x and sigma_u gate the sensor-to-controller and controller-to-actuator
    channels; beta is the Lyapunov decay rate and is unused by the disturbance
    attenuation design.
    """

    sigma_x: float
    sigma_u: float
    beta: float | None = None

    def __post_init__(self):
        if not (self.sigma_x >= 0 and self.sigma_u >= 0):
            raise ValueError("trigger thresholds must be nonnegative")
        if self.beta is not None and not (0 < self.beta < 1):
            raise ValueError("beta must lie in (0, 1)")


def _sys(name, A, B, E=None, C=None, D=None) -> LtiSystem:
    A = np.array(A, dtype=float)
    B = np.array(B, dtype=float)
    nx, nu = B.shape
    if E is None:
        E = np.zeros((nx, 1))
    if C is None:
        C = np.eye(nx)
    C = np.atleast_2d(np.asarray(C, dtype=float))
    if D is None:
        D = np.zeros((C.shape[0], nu))
    return LtiSystem(A=A, B=B, C=C, D=D, E=np.array(E, dtype=float), name=name)


# Chemical reactor, sampled at 0.1s. Open-loop unstable; no process noise channel.
REA1 = _sys(
    "rea1",
    A=[[1.1782, 0.0015, 0.5116, -0.4033],
       [-0.0515, 0.6619, -0.0110, 0.0613],
       [0.0762, 0.3351, 0.5606, 0.3824],
       [-0.0006, 0.3353, 0.0893, 0.8494]],
    B=[[0.0045, -0.0876],
       [0.4672, 0.0012],
       [0.2132, -0.2353],
       [0.2131, -0.0161]],
)

# Two-mass spring chain, sampled at 0.1s; disturbance enters through the input matrix.
MASSSPRING2 = _sys(
    "massspring2",
    A=[[0.9900, 0.0050, 0.0997, 0.0002],
       [0.0050, 0.9900, 0.0002, 0.0997],
       [-0.1992, 0.0993, 0.9900, 0.0050],
       [0.0993, -0.1992, 0.0050, 0.9900]],
    B=[[0.0050, 0.0000],
       [0.0000, 0.0050],
       [0.0997, 0.0002],
       [0.0002, 0.0997]],
    E=[[0.0050, 0.0000],
       [0.0000, 0.0050],
       [0.0997, 0.0002],
       [0.0002, 0.0997]],
)

# Helicopter longitudinal dynamics, sampled at 0.1s, with a weighted performance output.
HE1 = _sys(
    "he1",
    A=[[0.9964, 0.0026, -0.0004, -0.0460],
       [0.0045, 0.9037, -0.0188, -0.3834],
       [0.0098, 0.0339, 0.9383, 0.1302],
       [0.0005, 0.0017, 0.0968, 1.0067]],
    B=[[0.0445, 0.0167],
       [0.3407, -0.7249],
       [-0.5278, 0.4214],
       [-0.0268, 0.0215]],
    E=[[0.0047, 0.0000],
       [0.0048, 0.0009],
       [0.0042, 0.0001],
       [-0.0020, 0.0000]],
    C=[[1.4142, 0.0, 0.0, 0.0],
       [0.0, 0.7071, 0.0, 0.0]],
    D=[[0.7071, 0.0],
       [0.0, 0.7071]],
)

BENCHMARKS = {"rea1": REA1, "massspring2": MASSSPRING2, "he1": HE1}


def stack_systems(sys: LtiSystem, n: int) -> LtiSystem:
    """Stack n independent copies: A, B, C, D block-diagonal, E stacked vertically."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    if n == 1:
        return sys
    from scipy.linalg import block_diag

    return LtiSystem(
        A=block_diag(*[sys.A] * n),
        B=block_diag(*[sys.B] * n),
        C=block_diag(*[sys.C] * n),
        D=block_diag(*[sys.D] * n),
        E=np.vstack([sys.E] * n),
        name=f"{sys.name}x{n}" if sys.name else f"stacked{n}",
    )


def save_system(sys: LtiSystem, path: str | Path) -> None:
    """Write a system definition file (JSON with dims and row-major matrices)."""
    payload = {
        "n_x": sys.n_x, "n_u": sys.n_u, "n_y": sys.n_y, "n_d": sys.n_d,
        "A": sys.A.tolist(), "B": sys.B.tolist(), "C": sys.C.tolist(),
        "D": sys.D.tolist(), "E": sys.E.tolist(),
    }
    if sys.name:
        payload["name"] = sys.name
    Path(path).write_text(json.dumps(payload, indent=2) + "\n")


def load_system(source: str | Path) -> LtiSystem:
    """Resolve a benchmark name or load a system definition file.

    Benchmark names are matched case-insensitively. A path must point to a
    JSON file with keys n_x, n_u, n_y, n_d and row-major arrays A, B, C, D, E.
    """
    key = str(source).lower()
    if key in BENCHMARKS:
        return BENCHMARKS[key]
    path = Path(source)
    if not path.exists():
        raise ValueError(f"unknown system {source!r}: not a benchmark name or a file")
    raw = json.loads(path.read_text())
    try:
        sys = LtiSystem(
            A=np.array(raw["A"], dtype=float),
            B=np.array(raw["B"], dtype=float),
            C=np.array(raw["C"], dtype=float),
            D=np.array(raw["D"], dtype=float),
            E=np.array(raw["E"], dtype=float),
            name=str(raw.get("name", path.stem)),
        )
    except KeyError as exc:
        raise ValueError(f"system file {path} is missing key {exc}") from exc
    for dim in ("n_x", "n_u", "n_y", "n_d"):
        if dim in raw and int(raw[dim]) != getattr(sys, dim):
            raise ValueError(f"system file {path}: declared {dim}={raw[dim]} "
                             f"does not match matrix shapes ({getattr(sys, dim)})")
    return sys
