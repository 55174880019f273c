"""Per-step operational cost of a sparse event-triggered controller.

The cost charges the two channels by their transmission rates and the gain by
its nonzero structure: each nonzero entry needs one multiplication and one
dataflow link, and each row with m nonzeros needs m-1 additions. Comparisons
stay symbolic in the five coefficients because the interesting conclusions
are coefficient inequalities, not numbers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .synthesis import count_nonzeros

_NAMES = ("α_x", "α_u", "α_m", "α_f", "α_a")


@dataclass(frozen=True)
class CostCoeffs:
    """Unit prices: S2C link, C2A link, multiplication, dataflow link, addition."""

    alpha_x: float
    alpha_u: float
    alpha_m: float
    alpha_f: float
    alpha_a: float

    def __post_init__(self):
        if min(self.alpha_x, self.alpha_u, self.alpha_m,
               self.alpha_f, self.alpha_a) < 0:
            raise ValueError("cost coefficients must be nonnegative")


@dataclass(frozen=True)
class CostExpr:
    """A cost that is linear in the five coefficients; c_m and c_f always agree
    when built from a gain (both count nonzero entries)."""

    c_x: float
    c_u: float
    c_m: float
    c_f: float
    c_a: float

    def evaluate(self, coeffs: CostCoeffs) -> float:
        return (self.c_x * coeffs.alpha_x + self.c_u * coeffs.alpha_u
                + self.c_m * coeffs.alpha_m + self.c_f * coeffs.alpha_f
                + self.c_a * coeffs.alpha_a)

    def coefficients(self) -> tuple[float, float, float, float, float]:
        return (self.c_x, self.c_u, self.c_m, self.c_f, self.c_a)

    def __sub__(self, other: "CostExpr") -> "CostExpr":
        return CostExpr(self.c_x - other.c_x, self.c_u - other.c_u,
                        self.c_m - other.c_m, self.c_f - other.c_f,
                        self.c_a - other.c_a)

    def __str__(self) -> str:
        return _render(self.coefficients()) or "0"


def _fmt(c: float) -> str:
    return f"{c:.12g}"


def _render(coeffs) -> str:
    """Sum-of-terms string; the multiplication and dataflow terms merge into
    c(α_m + α_f) whenever their coefficients agree."""
    c_x, c_u, c_m, c_f, c_a = coeffs
    terms = []

    def term(c, name):
        if c == 0:
            return
        terms.append(name if c == 1 else f"{_fmt(c)}{name}")

    term(c_x, _NAMES[0])
    term(c_u, _NAMES[1])
    if c_m == c_f and c_m != 0:
        if c_m == 1:
            terms.append(f"{_NAMES[2]} + {_NAMES[3]}")
        else:
            terms.append(f"{_fmt(c_m)}({_NAMES[2]} + {_NAMES[3]})")
    else:
        term(c_m, _NAMES[2])
        term(c_f, _NAMES[3])
    term(c_a, _NAMES[4])
    return " + ".join(terms)


def symbolic_cost(K: np.ndarray, r_x: float, r_u: float,
                  dims: tuple[int, int],
                  zero_threshold: float = 1e-5) -> CostExpr:
    """Cost expression for gain K at the given channel rates.

    dims is (n_x, n_u): the channel payload sizes scaling the rate terms.
    """
    if not (0 <= r_x <= 1 and 0 <= r_u <= 1):
        raise ValueError("rates must lie in [0, 1]")
    n_x, n_u = dims
    l0, rows = count_nonzeros(np.asarray(K, dtype=float), zero_threshold)
    return CostExpr(c_x=n_x * r_x, c_u=n_u * r_u,
                    c_m=float(l0), c_f=float(l0), c_a=float(l0 - rows))


def operational_cost(K: np.ndarray, r_x: float, r_u: float,
                     dims: tuple[int, int], coeffs: CostCoeffs,
                     zero_threshold: float = 1e-5) -> float:
    return symbolic_cost(K, r_x, r_u, dims, zero_threshold).evaluate(coeffs)


@dataclass(frozen=True)
class CostComparison:
    """difference is second minus first. ordering is definitive only when every
    difference coefficient shares one sign; otherwise the sign of the difference
    depends on the coefficient values and `condition` states when the second
    cost exceeds the first."""

    difference: CostExpr
    ordering: str  # "equal" | "first_lower" | "second_lower" | "depends"
    condition: str | None = None


def compare(first: CostExpr, second: CostExpr) -> CostComparison:
    diff = second - first
    cs = diff.coefficients()
    if all(c == 0 for c in cs):
        return CostComparison(diff, "equal")
    if all(c >= 0 for c in cs):
        return CostComparison(diff, "first_lower")
    if all(c <= 0 for c in cs):
        return CostComparison(diff, "second_lower")
    pos = _render(tuple(max(c, 0.0) for c in cs))
    neg = _render(tuple(max(-c, 0.0) for c in cs))
    return CostComparison(diff, "depends", condition=f"{pos} > {neg}")
