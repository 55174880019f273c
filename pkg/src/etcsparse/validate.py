"""Sampling-based verification of synthesized designs.

The synthesis certificates are solver artifacts; these checks confront them
with brute force. Plants are drawn from the data-consistency set (biased to
its boundary, where certificates are tightest), trigger errors and
disturbances from their admissible balls, and the claimed pointwise
inequality is evaluated on every plant/signal pair. A design passes when the
worst slack stays above -tol with zero violations.

Signal conventions match the simulator: x_hat = x - e_x, u = K x_hat,
u_hat = u - e_u, and the trigger bounds ||e_x|| <= sigma_x ||x|| and
||e_u|| <= sigma_u ||u|| hold by construction of the samples.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import NoiseBounds
from .synthesis import assemble_thm2, SynthesisError
from .systems import EtcParams
from .uncertainty import UncertaintySet, build_pi, sample_members

DEFAULT_TOL = 1e-8


@dataclass(frozen=True)
class SampledCheck:
    name: str
    n_systems: int
    n_signals: int
    worst_slack: float
    violations: int
    tol: float

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def __str__(self) -> str:
        verdict = "pass" if self.ok else f"FAIL ({self.violations} violations)"
        return (f"{self.name}: {verdict}, worst slack {self.worst_slack:.3e} "
                f"over {self.n_systems}x{self.n_signals} samples")


def _ball_columns(rng: np.random.Generator, dim: int,
                  radii: np.ndarray) -> np.ndarray:
    """One point per column, uniform in the ball of that column's radius."""
    count = radii.size
    dirs = rng.standard_normal((dim, count))
    norms = np.linalg.norm(dirs, axis=0)
    norms[norms == 0] = 1.0
    scale = radii * rng.random(count) ** (1.0 / dim)
    return dirs / norms * scale


def _trigger_signals(rng: np.random.Generator, K: np.ndarray,
                     etc: EtcParams, X: np.ndarray
                     ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Trigger-consistent (e_x, u_hat columns) for the given states."""
    Ex = _ball_columns(rng, X.shape[0], etc.sigma_x * np.linalg.norm(X, axis=0))
    U = K @ (X - Ex)
    Eu = _ball_columns(rng, K.shape[0], etc.sigma_u * np.linalg.norm(U, axis=0))
    return Ex, U, U - Eu


def _run_check(name, unc, n_systems, n_signals, seed, tol, slack_fn):
    rng = np.random.default_rng(seed)
    members = sample_members(unc, n_systems, rng)
    worst = np.inf
    violations = 0
    for A, B in members:
        slacks = slack_fn(rng, A, B)
        worst = min(worst, float(slacks.min()))
        violations += int((slacks < -tol).sum())
    return SampledCheck(name=name, n_systems=n_systems, n_signals=n_signals,
                        worst_slack=worst, violations=violations, tol=tol)


def sampled_decrease(unc: UncertaintySet, etc: EtcParams, K: np.ndarray,
                     P: np.ndarray, n_systems: int = 200,
                     n_signals: int = 200, seed: int = 0,
                     tol: float = DEFAULT_TOL) -> SampledCheck:
    """Disturbance-free decay: x+' P x+ <= beta x' P x on unit-norm states.

    The inequality is homogeneous in x jointly with the trigger balls, so
    unit-norm states lose no generality and make tol an absolute margin.
    """
    if etc.beta is None:
        raise ValueError("decrease check needs a decay rate beta")
    K = np.asarray(K, dtype=float)
    P = np.asarray(P, dtype=float)

    def slack(rng, A, B):
        X = rng.standard_normal((unc.n_x, n_signals))
        X /= np.linalg.norm(X, axis=0)
        _, _, Uhat = _trigger_signals(rng, K, etc, X)
        Xp = A @ X + B @ Uhat
        return (etc.beta * np.einsum("it,ij,jt->t", X, P, X)
                - np.einsum("it,ij,jt->t", Xp, P, Xp))

    return _run_check("robust-decrease", unc, n_systems, n_signals, seed,
                      tol, slack)


def sampled_uub(unc: UncertaintySet, etc: EtcParams, K: np.ndarray,
                P: np.ndarray, eps_d: float | None = None,
                n_systems: int = 200, n_signals: int = 200, seed: int = 0,
                tol: float = DEFAULT_TOL) -> SampledCheck:
    """Boundedness step conditions under admissible disturbance.

    Outside the unit sublevel set of x'Px the value must decay by beta;
    inside, the next state must stay in the set. States are drawn across
    levels on both sides of the boundary.
    """
    if etc.beta is None:
        raise ValueError("boundedness check needs a decay rate beta")
    if eps_d is None:
        eps_d = unc.data.bounds.eps_d
    K = np.asarray(K, dtype=float)
    P = np.asarray(P, dtype=float)
    E = unc.E

    def slack(rng, A, B):
        dirs = rng.standard_normal((unc.n_x, n_signals))
        levels = rng.uniform(0.2, 4.0, n_signals)
        X = dirs * np.sqrt(levels / np.einsum("it,ij,jt->t", dirs, P, dirs))
        _, _, Uhat = _trigger_signals(rng, K, etc, X)
        D = _ball_columns(rng, E.shape[1], np.full(n_signals, eps_d))
        Xp = A @ X + B @ Uhat + E @ D
        V = np.einsum("it,ij,jt->t", X, P, X)
        Vp = np.einsum("it,ij,jt->t", Xp, P, Xp)
        return np.where(V >= 1.0, etc.beta * V - Vp, 1.0 - Vp)

    return _run_check("uub-step", unc, n_systems, n_signals, seed, tol, slack)


def sampled_dissipation(unc: UncertaintySet, etc: EtcParams, K: np.ndarray,
                        P: np.ndarray, gamma: float, C: np.ndarray,
                        D: np.ndarray, eps_d: float | None = None,
                        n_systems: int = 200, n_signals: int = 200,
                        seed: int = 0, tol: float = DEFAULT_TOL) -> SampledCheck:
    """Per-step dissipation V(x+) - V(x) <= gamma^2 ||d||^2 - ||y||^2."""
    if eps_d is None:
        eps_d = unc.data.bounds.eps_d
    K = np.asarray(K, dtype=float)
    P = np.asarray(P, dtype=float)
    C = np.atleast_2d(np.asarray(C, dtype=float))
    Dmat = np.atleast_2d(np.asarray(D, dtype=float))
    E = unc.E
    gsq = float(gamma) ** 2

    def slack(rng, A, B):
        X = rng.standard_normal((unc.n_x, n_signals))
        X *= rng.uniform(0.0, 3.0, n_signals) / np.linalg.norm(X, axis=0)
        _, _, Uhat = _trigger_signals(rng, K, etc, X)
        Dd = _ball_columns(rng, E.shape[1], np.full(n_signals, eps_d))
        Xp = A @ X + B @ Uhat + E @ Dd
        Y = C @ X + Dmat @ Uhat
        V = np.einsum("it,ij,jt->t", X, P, X)
        Vp = np.einsum("it,ij,jt->t", Xp, P, Xp)
        return gsq * (Dd ** 2).sum(axis=0) - (Y ** 2).sum(axis=0) - (Vp - V)

    return _run_check("hinf-dissipation", unc, n_systems, n_signals, seed,
                      tol, slack)


def pi_domination(bounds: NoiseBounds, n_d: int, n_x: int, n_u: int,
                  draws: int = 10_000, seed: int = 0,
                  tol: float = 1e-10) -> SampledCheck:
    """Check that the noise-envelope matrix dominates every admissible
    rank-one noise outer product: min eig(Pi - z z') >= -tol for stacked
    z = [d; dx_plus; dx; du] within their norm bounds."""
    rng = np.random.default_rng(seed)
    Pi = build_pi(bounds, n_d, n_x, n_u)
    blocks = [(0, n_d, bounds.eps_d), (n_d, n_d + n_x, bounds.eps_x),
              (n_d + n_x, n_d + 2 * n_x, bounds.eps_x),
              (n_d + 2 * n_x, n_d + 2 * n_x + n_u, bounds.eps_u)]
    dim = n_d + 2 * n_x + n_u
    worst = np.inf
    violations = 0
    for start in range(0, draws, 1000):
        count = min(1000, draws - start)
        Z = np.zeros((dim, count))
        for lo, hi, r in blocks:
            Z[lo:hi] = _ball_columns(rng, hi - lo, np.full(count, r))
        for j in range(count):
            slack = float(np.linalg.eigvalsh(Pi - np.outer(Z[:, j], Z[:, j]))[0])
            worst = min(worst, slack)
            violations += slack < -tol
    return SampledCheck(name="noise-envelope-domination", n_systems=1,
                        n_signals=draws, worst_slack=worst,
                        violations=violations, tol=tol)


_SCALED_VARS = ("P_bar", "L", "G_aux", "a_state", "a_input", "a_dist", "theta")


def scaling_transfer(unc: UncertaintySet, etc: EtcParams, alpha1: float,
                     n: int, eps_d: float | None = None,
                     tol: float = DEFAULT_TOL) -> tuple[float, float]:
    """Check that scaling a feasible boundedness design by n certifies the
    design inequality at alpha1/n.

    Solves the exact problem at alpha1, multiplies every decision variable by
    n, and evaluates the alpha1/n constraints at that fixed point. Returns
    (absolute, norm-relative) worst residuals; the transfer holds when the
    relative residual is within tol.
    """
    if n <= 1:
        raise ValueError("n must exceed 1")
    sol = assemble_thm2(unc, etc, eps_d=eps_d, alpha1=alpha1).solve()
    if not sol.ok:
        raise SynthesisError(f"base design at alpha1={alpha1} is {sol.status}")
    scaled = {name: n * sol.assignment[name] for name in _SCALED_VARS}
    target = assemble_thm2(unc, etc, eps_d=eps_d, alpha1=alpha1 / n)
    return target.evaluate(scaled)
