"""Data-consistency uncertainty sets for (A, B) and their diagnostics.

Each data sample k yields a quadratic matrix inequality (QMI) in (A, B); the
set of plants consistent with the whole experiment is the intersection over k.
Membership checks are evaluated in residual form, which is algebraically equal
to the stacked quadratic form but avoids squaring large state norms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import DataSet

# Per-sample QMIs are invariant under positive scaling, so each one is
# normalized by max(1, ||z_k||^2) before entering any eigenvalue or SDP
# computation. Open-loop data from unstable plants otherwise produces matrices
# spanning many orders of magnitude.
MEMBERSHIP_TOL = 1e-8


def build_pi(bounds, n_d: int, n_x: int, n_u: int) -> np.ndarray:
    """Noise-domination matrix: blkdiag(4eps_d^2 I, 4eps_x^2 I, 4eps_x^2 I, 4eps_u^2 I)."""
    diag = np.concatenate([
        np.full(n_d, 4 * bounds.eps_d ** 2),
        np.full(n_x, 4 * bounds.eps_x ** 2),
        np.full(n_x, 4 * bounds.eps_x ** 2),
        np.full(n_u, 4 * bounds.eps_u ** 2),
    ])
    return np.diag(diag)


def noise_map(E: np.ndarray, n_u: int) -> np.ndarray:
    """The fixed map G_noise = [[E, 0, I, 0], [0, -I, 0, 0], [0, 0, 0, -I]]
    from stacked noise realizations to the data residual space."""
    E = np.atleast_2d(np.asarray(E, dtype=float))
    n_x, n_d = E.shape
    G = np.zeros((2 * n_x + n_u, n_d + 2 * n_x + n_u))
    G[:n_x, :n_d] = E
    G[:n_x, n_d + n_x:n_d + 2 * n_x] = np.eye(n_x)
    G[n_x:2 * n_x, n_d:n_d + n_x] = -np.eye(n_x)
    G[2 * n_x:, n_d + 2 * n_x:] = -np.eye(n_u)
    return G


@dataclass(frozen=True)
class UncertaintySet:
    """The family of per-sample QMI matrices Psi_k, of order 2 n_x + n_u.

    `psis` holds the matrices exactly as constructed from the data; `scales`
    holds the positive factors used to normalize them for numerical work
    (scaling a QMI matrix does not change the set it describes).
    """

    psis: np.ndarray
    scales: np.ndarray
    data: DataSet
    E: np.ndarray

    @property
    def T(self) -> int:
        return self.psis.shape[0]

    @property
    def q(self) -> int:
        return self.psis.shape[1]

    @property
    def n_x(self) -> int:
        return self.data.n_x

    @property
    def n_u(self) -> int:
        return self.data.n_u

    @property
    def psis_scaled(self) -> np.ndarray:
        return self.psis / self.scales[:, None, None]


def build_uncertainty(data: DataSet, E: np.ndarray) -> UncertaintySet:
    """Build the per-sample QMI family from measured data and the disturbance map."""
    E = np.atleast_2d(np.asarray(E, dtype=float))
    n_x, n_u, T = data.n_x, data.n_u, data.T
    Pi = build_pi(data.bounds, E.shape[1], n_x, n_u)
    G = noise_map(E, n_u)
    GPG = G @ Pi @ G.T
    GPG = 0.5 * (GPG + GPG.T)

    Z = np.vstack([data.X_plus, -data.X_minus, -data.U_minus])
    psis = GPG[None, :, :] - Z.T[:, :, None] * Z.T[:, None, :]
    psis = 0.5 * (psis + psis.transpose(0, 2, 1))
    scales = np.maximum(1.0, np.sum(Z * Z, axis=0))
    return UncertaintySet(psis=psis, scales=scales, data=data, E=E)


def _residual_forms(A: np.ndarray, B: np.ndarray, unc: UncertaintySet) -> np.ndarray:
    """Membership forms, one n_x-order matrix per sample.

    For the candidate (A, B) the quadratic form of Psi_k collapses to
    S - r_k r_k^T with r_k the one-step data residual and S independent of k.
    Unlike the Psi_k themselves this form never squares the raw state norms,
    so it is evaluated unscaled.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    B = np.atleast_2d(np.asarray(B, dtype=float))
    d = unc.data
    b = d.bounds
    S = (4 * b.eps_d ** 2 * unc.E @ unc.E.T
         + 4 * b.eps_x ** 2 * (np.eye(d.n_x) + A @ A.T)
         + 4 * b.eps_u ** 2 * B @ B.T)
    R = d.X_plus - A @ d.X_minus - B @ d.U_minus
    return S[None, :, :] - R.T[:, :, None] * R.T[:, None, :]


def membership_margin(A: np.ndarray, B: np.ndarray, unc: UncertaintySet) -> float:
    """Worst min-eigenvalue of the membership forms over all samples."""
    forms = _residual_forms(A, B, unc)
    return float(np.linalg.eigvalsh(forms)[:, 0].min())


def membership(A: np.ndarray, B: np.ndarray, unc: UncertaintySet,
               tol: float = MEMBERSHIP_TOL) -> bool:
    """True iff every per-sample QMI holds for (A, B) to within tol."""
    return membership_margin(A, B, unc) >= -tol


def check_richness(data: DataSet) -> float:
    """Smallest eigenvalue of the stacked data Gram matrix, clamped at zero."""
    W = np.vstack([data.X_minus, data.U_minus])
    lam = float(np.linalg.eigvalsh(W @ W.T)[0])
    return max(lam, 0.0)


@dataclass(frozen=True)
class BoundednessReport:
    ok: bool
    gamma_rich: float
    noise_level: float
    aggregate_block_negdef: bool


def check_boundedness(data: DataSet) -> BoundednessReport:
    """Check that data richness dominates the noise level, which bounds the set.

    The condition is gamma_rich >= T * max(4 eps_x^2, 4 eps_u^2). The report
    also states whether the lower-right block of the aggregate QMI is negative
    definite, the property the boundedness argument actually runs through.
    """
    b = data.bounds
    gamma_rich = check_richness(data)
    noise_level = data.T * max(4 * b.eps_x ** 2, 4 * b.eps_u ** 2)
    W = np.vstack([data.X_minus, data.U_minus])
    blk = np.diag(np.concatenate([np.full(data.n_x, 4 * b.eps_x ** 2),
                                  np.full(data.n_u, 4 * b.eps_u ** 2)]))
    big_A = data.T * blk - W @ W.T
    negdef = float(np.linalg.eigvalsh(0.5 * (big_A + big_A.T))[-1]) < 0
    return BoundednessReport(ok=gamma_rich >= noise_level, gamma_rich=gamma_rich,
                             noise_level=noise_level, aggregate_block_negdef=negdef)


@dataclass(frozen=True)
class AggregateSet:
    """Single-QMI outer approximation of the intersection set, built from the
    whole data sequence at once. Used as a diagnostic and a fast pre-filter."""

    big_A: np.ndarray
    big_B: np.ndarray
    big_C: np.ndarray

    @property
    def qmi(self) -> np.ndarray:
        return np.block([[self.big_C, self.big_B.T], [self.big_B, self.big_A]])


def build_aggregate(data: DataSet, E: np.ndarray) -> AggregateSet:
    E = np.atleast_2d(np.asarray(E, dtype=float))
    b = data.bounds
    W = np.vstack([data.X_minus, data.U_minus])
    blk = np.diag(np.concatenate([np.full(data.n_x, 4 * b.eps_x ** 2),
                                  np.full(data.n_u, 4 * b.eps_u ** 2)]))
    big_A = data.T * blk - W @ W.T
    big_B = W @ data.X_plus.T
    big_C = (data.T * (4 * b.eps_d ** 2 * E @ E.T
                       + 4 * b.eps_x ** 2 * np.eye(data.n_x))
             - data.X_plus @ data.X_plus.T)
    return AggregateSet(big_A=0.5 * (big_A + big_A.T), big_B=big_B,
                        big_C=0.5 * (big_C + big_C.T))


def least_squares_center(data: DataSet) -> tuple[np.ndarray, np.ndarray]:
    """Least-squares plant estimate from the measured data, used as the
    sampling center."""
    W = np.vstack([data.X_minus, data.U_minus])
    AB = data.X_plus @ np.linalg.pinv(W)
    return AB[:, :data.n_x], AB[:, data.n_x:]


def chebyshev_center(data: DataSet) -> tuple[np.ndarray, np.ndarray]:
    """Minimax-residual plant estimate.

    Least squares can land outside the consistency set when the data norms
    grow fast: it optimizes the residual sum while consistency demands a
    uniform absolute residual bound on every sample. Minimizing the worst
    per-sample residual targets that bound directly. The fit is computed as a
    correction in a whitened regressor basis so the optimization never sees
    the raw data scales.
    """
    import cvxpy as cp

    from .sdp import SdpProblem

    n_x = data.n_x
    W = np.vstack([data.X_minus, data.U_minus])
    AB0 = data.X_plus @ np.linalg.pinv(W)
    R0 = data.X_plus - AB0 @ W
    U, sv, Vt = np.linalg.svd(W, full_matrices=False)
    keep = sv > (sv[0] * 1e-13 if sv.size and sv[0] > 0 else np.inf)
    if not np.any(keep):
        return AB0[:, :n_x], AB0[:, n_x:]
    U, sv, Vt = U[:, keep], sv[keep], Vt[keep, :]

    pr = SdpProblem("chebyshev-center")
    Dv = pr.rect_var(n_x, sv.size, "D")
    t = pr.scalar_var("t", nonneg=True)
    tI = t * np.eye(n_x)
    for k in range(data.T):
        r = cp.reshape(R0[:, k] - Dv @ Vt[:, k], (n_x, 1), order="C")
        pr.add_psd_constraint(cp.bmat([[cp.reshape(t, (1, 1), order="C"), r.T],
                                       [r, tI]]))
    pr.minimize(t)
    sol = pr.solve()
    if not sol.ok:
        return AB0[:, :n_x], AB0[:, n_x:]
    AB = AB0 + sol.value("D") @ (np.diag(1.0 / sv) @ U.T)
    return AB[:, :n_x], AB[:, n_x:]


def sample_members(unc: UncertaintySet, count: int,
                   rng: np.random.Generator | int | None = None,
                   boundary_fraction: float = 0.25,
                   ) -> list[tuple[np.ndarray, np.ndarray]]:
    """Draw `count` plants from the uncertainty set, biased toward its boundary.

    Random perturbation directions from the least-squares center are scaled by
    bisection to the QMI boundary, then pulled inward by a uniform factor; a
    fixed fraction stays at the boundary so robustness checks get stressed
    where certificates are tightest. Raises if the set appears empty or
    unbounded after a bounded number of proposals.
    """
    if count < 0:
        raise ValueError("count must be nonnegative")
    if count == 0:
        return []
    if isinstance(rng, (int, np.integer)) or rng is None:
        rng = np.random.default_rng(rng)
    if not check_boundedness(unc.data).ok:
        raise ValueError("uncertainty set failed the boundedness check; "
                         "refusing to sample from a possibly unbounded set")

    n_x, n_u = unc.n_x, unc.n_u
    A0, B0 = least_squares_center(unc.data)
    if not membership(A0, B0, unc):
        A0, B0 = chebyshev_center(unc.data)
    if not membership(A0, B0, unc):
        raise RuntimeError("no consistent center found; the numerical "
                           "uncertainty set appears empty")

    def at(t, dA, dB):
        return A0 + t * dA, B0 + t * dB

    out: list[tuple[np.ndarray, np.ndarray]] = []
    for i in range(count):
        dAB = rng.standard_normal((n_x, n_x + n_u))
        dAB /= np.linalg.norm(dAB)
        dA, dB = dAB[:, :n_x], dAB[:, n_x:]

        # Bracket the boundary by doubling, then bisect; t_lo always passes.
        t_lo, t_hi = 0.0, 1e-3
        expansions = 0
        while membership(*at(t_hi, dA, dB), unc):
            t_lo, t_hi = t_hi, 2 * t_hi
            expansions += 1
            if expansions > 60:
                raise RuntimeError("no QMI boundary found along a random direction; "
                                   "the numerical set appears unbounded")
        for _ in range(50):
            if t_hi - t_lo <= 1e-9 * t_hi:
                break
            t_mid = 0.5 * (t_lo + t_hi)
            if membership(*at(t_mid, dA, dB), unc):
                t_lo = t_mid
            else:
                t_hi = t_mid
        pull = 1.0 if (i % max(1, round(1 / max(boundary_fraction, 1e-9))) == 0) \
            else 1.0 - rng.uniform(0.0, 1.0)
        out.append(at(pull * t_lo, dA, dB))
    return out
