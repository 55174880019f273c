"""Symmetric-matrix helpers and the structured block templates used by the LMI builders.

All synthesis LMIs are assembled from four recurring block layouts plus a
data-dependent term. The layout functions return nested lists (grids) whose
entries are either the caller's blocks or explicit zero matrices, so the same
layout code serves both numeric evaluation (np.block) and solver-side assembly.
"""

from __future__ import annotations

import numpy as np

# Largest tolerated relative asymmetry before an input is rejected as malformed.
_ASYM_REJECT = 1e-6


def symmetrize(M: np.ndarray) -> np.ndarray:
    """Return the symmetric part (M + M^T) / 2."""
    M = np.asarray(M, dtype=float)
    return (M + M.T) / 2.0


def _require_square(M: np.ndarray, who: str) -> np.ndarray:
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"{who}: expected a square matrix, got shape {M.shape}")
    return M


def check_symmetric(M: np.ndarray, tol: float = 1e-12) -> bool:
    """True if M is symmetric to within absolute tolerance tol."""
    M = _require_square(M, "check_symmetric")
    if M.size == 0:
        return True
    return float(np.abs(M - M.T).max()) <= tol


def min_eig(M: np.ndarray) -> float:
    """Smallest eigenvalue of the symmetric part of M."""
    M = _require_square(M, "min_eig")
    if M.size == 0:
        return 0.0
    return float(np.linalg.eigvalsh(symmetrize(M)).min())


def is_psd(M: np.ndarray, tol: float = 1e-8) -> bool:
    """Eigenvalue test for positive semidefiniteness.

    Accepts M whose smallest eigenvalue is >= -tol. The input must be square
    and symmetric up to numerical noise; grossly asymmetric input is a caller
    error and raises.
    """
    M = _require_square(M, "is_psd")
    if M.size == 0:
        return True
    scale = 1.0 + float(np.abs(M).max())
    if float(np.abs(M - M.T).max()) > _ASYM_REJECT * scale:
        raise ValueError("is_psd: input is not symmetric")
    return float(np.linalg.eigvalsh(symmetrize(M)).min()) >= -tol


def _shape(block) -> tuple[int, int]:
    s = getattr(block, "shape", None)
    if s is None or len(s) != 2:
        raise ValueError(f"block has no 2-d shape: {block!r}")
    return int(s[0]), int(s[1])


def b1_grid(X1, X2, X3) -> list[list]:
    """Layout [[0, 0, 0], [X1, 0, 0], [X2, -X2, X3]].

    Row groups are (rows X1, rows X1, rows X2); X2 occupies the first two
    column groups, so X1 and X2 must have equal column counts.
    """
    r1, c1 = _shape(X1)
    r2, c2 = _shape(X2)
    r3, c3 = _shape(X3)
    if c2 != c1:
        raise ValueError(f"b1_grid: X1 has {c1} columns but X2 has {c2}")
    if r3 != r2:
        raise ValueError(f"b1_grid: X2 has {r2} rows but X3 has {r3}")
    z = np.zeros
    return [
        [z((r1, c1)), z((r1, c1)), z((r1, c3))],
        [X1, z((r1, c1)), z((r1, c3))],
        [X2, -X2, X3],
    ]


def b2_grid(X1, X2) -> list[list]:
    """Layout [[X1, X2], [-X1, 0], [0, 0]]; the trailing zero row group has cols(X1) rows."""
    r1, c1 = _shape(X1)
    r2, c2 = _shape(X2)
    if r2 != r1:
        raise ValueError(f"b2_grid: X1 has {r1} rows but X2 has {r2}")
    z = np.zeros
    return [[X1, X2], [-X1, z((r1, c2))], [z((c1, c1)), z((c1, c2))]]


def b3_grid(X) -> list[list]:
    """Layout [[X], [-X], [0]] with a trailing zero block of cols(X) rows."""
    r, c = _shape(X)
    return [[X], [-X], [np.zeros((c, c))]]


def b4_grid(X, tail_dim: int | None = None) -> list[list]:
    """Layout [[X, 0, 0], [0, 0, 0], [0, 0, 0]] with X square of order n.

    The grid spans row and column groups (n, n, tail_dim); tail_dim defaults
    to n.
    """
    r, c = _shape(X)
    if r != c:
        raise ValueError(f"b4_grid: X must be square, got {r}x{c}")
    m = r if tail_dim is None else int(tail_dim)
    z = np.zeros
    return [
        [X, z((r, r)), z((r, m))],
        [z((r, r)), z((r, r)), z((r, m))],
        [z((m, r)), z((m, r)), z((m, m))],
    ]


def blkdiag_grid(*blocks) -> list[list]:
    """Block-diagonal layout with explicit zero off-diagonal fillers."""
    shapes = [_shape(b) for b in blocks]
    return [[blocks[i] if i == j else np.zeros((shapes[i][0], shapes[j][1]))
             for j in range(len(blocks))] for i in range(len(blocks))]


def _numeric(grid: list[list]) -> np.ndarray:
    rows = [[np.asarray(b, dtype=float) for b in row] for row in grid]
    return np.block(rows)


def build_b1(X1, X2, X3) -> np.ndarray:
    return _numeric(b1_grid(X1, X2, X3))


def build_b2(X1, X2) -> np.ndarray:
    return _numeric(b2_grid(X1, X2))


def build_b3(X) -> np.ndarray:
    return _numeric(b3_grid(X))


def build_b4(X, tail_dim: int | None = None) -> np.ndarray:
    return _numeric(b4_grid(X, tail_dim))


def build_calT(X, thetas, psis) -> np.ndarray:
    """Numeric T(X) = b4(X) - sum_k theta_k Psi_k.

    X is n x n, each Psi_k has order q and the trailing block group of b4 is
    sized q - 2n so the result matches the Psi order.
    """
    X = _require_square(X, "build_calT")
    n = X.shape[0]
    psis = np.asarray(psis, dtype=float)
    thetas = np.asarray(thetas, dtype=float).ravel()
    if psis.ndim != 3 or psis.shape[1] != psis.shape[2]:
        raise ValueError("build_calT: psis must be a list of square matrices")
    if len(thetas) != psis.shape[0]:
        raise ValueError("build_calT: one theta per Psi required")
    q = psis.shape[1]
    if q < 2 * n:
        raise ValueError(f"build_calT: Psi order {q} too small for X of order {n}")
    out = _numeric(b4_grid(X, q - 2 * n))
    out -= np.einsum("k,kij->ij", thetas, psis)
    return out
