"""Event-triggered closed-loop execution and empirical property checks.

Both channels share the same relative-threshold logic: a sample is sent only
when the held value drifts too far from the current one, and step 0 always
transmits on both channels so the loop starts synchronized. Within one step
the order is fixed: state detector, controller, input detector, plant. The
input detector is evaluated every step even though u can only change when a
state transmission occurred; the detector conditions are compared strictly,
so ties do not transmit.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .systems import EtcParams, LtiSystem

UUB_SLACK = 1e-9


@dataclass(frozen=True)
class ClosedLoopTrace:
    """One executed run. States carry the terminal sample, so x has one more
    column than the per-step sequences."""

    x: np.ndarray        # (n_x, T_p + 1)
    u: np.ndarray        # (n_u, T_p)
    x_hat: np.ndarray    # (n_x, T_p)
    u_hat: np.ndarray    # (n_u, T_p)
    e_x: np.ndarray      # (n_x, T_p)
    e_u: np.ndarray      # (n_u, T_p)
    d: np.ndarray        # (n_d, T_p)
    y: np.ndarray        # (n_y, T_p)
    trig_x: np.ndarray   # (T_p,) bool
    trig_u: np.ndarray   # (T_p,) bool

    @property
    def horizon(self) -> int:
        return self.u.shape[1]


@dataclass(frozen=True)
class ChannelStats:
    r_x: float
    r_u: float
    intervals_x: np.ndarray
    intervals_u: np.ndarray


def run_closed_loop(sys: LtiSystem, K: np.ndarray, etc: EtcParams,
                    x0: np.ndarray, d_seq: np.ndarray | None,
                    T_p: int) -> ClosedLoopTrace:
    """Simulate the dual-channel event-triggered loop for T_p steps.

    d_seq is (n_d, T_p); None means no disturbance. Deterministic: the trace
    is a pure function of the inputs.
    """
    if T_p < 1:
        raise ValueError("horizon must be at least 1")
    K = np.atleast_2d(np.asarray(K, dtype=float))
    x = np.asarray(x0, dtype=float).reshape(sys.n_x)
    if d_seq is None:
        d_seq = np.zeros((sys.n_d, T_p))
    d_seq = np.asarray(d_seq, dtype=float).reshape(sys.n_d, T_p)

    xs = np.empty((sys.n_x, T_p + 1))
    us = np.empty((sys.n_u, T_p))
    xh = np.empty((sys.n_x, T_p))
    uh = np.empty((sys.n_u, T_p))
    ys = np.empty((sys.n_y, T_p))
    tx = np.zeros(T_p, dtype=bool)
    tu = np.zeros(T_p, dtype=bool)

    x_hat = np.zeros(sys.n_x)
    u_hat = np.zeros(sys.n_u)
    for k in range(T_p):
        xs[:, k] = x
        if k == 0 or np.linalg.norm(x - x_hat) > etc.sigma_x * np.linalg.norm(x):
            x_hat = x.copy()
            tx[k] = True
        u = K @ x_hat
        if k == 0 or np.linalg.norm(u - u_hat) > etc.sigma_u * np.linalg.norm(u):
            u_hat = u.copy()
            tu[k] = True
        xh[:, k] = x_hat
        uh[:, k] = u_hat
        us[:, k] = u
        # non-transmission certifies the relative bound at this exact state
        assert np.linalg.norm(x - x_hat) <= etc.sigma_x * np.linalg.norm(x) or tx[k]
        assert np.linalg.norm(u - u_hat) <= etc.sigma_u * np.linalg.norm(u) or tu[k]
        x, ys[:, k] = sys.step(x, u_hat, d_seq[:, k])
    xs[:, T_p] = x

    return ClosedLoopTrace(x=xs, u=us, x_hat=xh, u_hat=uh,
                           e_x=xs[:, :T_p] - xh, e_u=us - uh,
                           d=d_seq, y=ys, trig_x=tx, trig_u=tu)


def rates(trace: ClosedLoopTrace) -> ChannelStats:
    """Transmission rates and inter-event gaps; the mandatory step-0
    transmissions are counted."""
    T_p = trace.horizon

    def gaps(flags: np.ndarray) -> np.ndarray:
        idx = np.flatnonzero(flags)
        return np.diff(idx) if idx.size > 1 else np.empty(0, dtype=int)

    return ChannelStats(r_x=float(trace.trig_x.sum()) / T_p,
                        r_u=float(trace.trig_u.sum()) / T_p,
                        intervals_x=gaps(trace.trig_x),
                        intervals_u=gaps(trace.trig_u))


def verify_uub(trace: ClosedLoopTrace, P: np.ndarray,
               settle_fraction: float = 0.5) -> tuple[bool, int | None]:
    """Check entry into and containment in {x : x'Px <= 1}.

    Returns (ok, first step from which the trajectory never leaves the set);
    ok requires that step to occur within settle_fraction of the horizon.
    """
    P = np.asarray(P, dtype=float)
    if np.linalg.eigvalsh(0.5 * (P + P.T))[0] <= 0:
        raise ValueError("P must be positive definite")
    V = np.einsum("it,ij,jt->t", trace.x, P, trace.x)
    inside = V <= 1.0 + UUB_SLACK
    if not inside[-1]:
        return False, None
    # walk back over the trailing run of contained samples
    entry = len(inside) - 1
    while entry > 0 and inside[entry - 1]:
        entry -= 1
    return entry <= settle_fraction * trace.horizon, entry


def empirical_hinf(sys: LtiSystem, K: np.ndarray, etc: EtcParams,
                   d_profiles: list[np.ndarray], T_p: int) -> float:
    """Worst observed output-to-disturbance energy ratio from rest.

    All-zero profiles are excluded (their ratio is undefined); at least one
    informative profile is required.
    """
    worst = None
    x0 = np.zeros(sys.n_x)
    for d_seq in d_profiles:
        d_seq = np.asarray(d_seq, dtype=float)
        energy_d = float(np.sum(d_seq ** 2))
        if energy_d == 0.0:
            continue
        tr = run_closed_loop(sys, K, etc, x0, d_seq, T_p)
        ratio = float(np.sum(tr.y ** 2)) / energy_d
        worst = ratio if worst is None else max(worst, ratio)
    if worst is None:
        raise ValueError("no disturbance profile with positive energy")
    return worst


def export_trace(trace: ClosedLoopTrace, path: str | Path,
                 P: np.ndarray) -> None:
    """Write the per-step trace as CSV, with the Lyapunov value of each
    visited state in the last column."""
    P = np.asarray(P, dtype=float)
    n_x, n_u, n_y = trace.x.shape[0], trace.u.shape[0], trace.y.shape[0]
    header = (["k"]
              + [f"x_{i + 1}" for i in range(n_x)]
              + [f"u_{i + 1}" for i in range(n_u)]
              + [f"uhat_{i + 1}" for i in range(n_u)]
              + ["trig_x", "trig_u"]
              + [f"y_{i + 1}" for i in range(n_y)]
              + ["V"])
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for k in range(trace.horizon):
            xk = trace.x[:, k]
            writer.writerow(
                [k]
                + [f"{v:.12g}" for v in xk]
                + [f"{v:.12g}" for v in trace.u[:, k]]
                + [f"{v:.12g}" for v in trace.u_hat[:, k]]
                + [int(trace.trig_x[k]), int(trace.trig_u[k])]
                + [f"{v:.12g}" for v in trace.y[:, k]]
                + [f"{float(xk @ P @ xk):.12g}"])
