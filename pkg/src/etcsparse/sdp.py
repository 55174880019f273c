"""Modeling and solve layer for the synthesis semidefinite programs.

Everything above this module describes problems as variables, PSD block
constraints, and linear objectives; the conic solver is bound here and nowhere
else. A solver's claim of success is never taken at face value: each PSD
constraint is re-evaluated numerically and the solution is accepted only when
the worst violation passes a tolerance measured relative to the constraint
matrix norm. Relative measurement matters because the constraint data here
ranges over many orders of magnitude and the underlying inequalities are
invariant to positive scaling, so a fixed absolute tolerance would be both
unattainable on large instances and meaningless across rescalings.

Solves walk a fixed ladder: an interior-point solver at stock settings, the
same solver with relaxed stall-exit tolerances (its reduced-accuracy exits are
still far tighter than the acceptance gate), then a first-order solver. An
infeasibility verdict from the interior-point solver ends the ladder early.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import cvxpy as cp
import numpy as np

# Strict definiteness "X > 0" is modeled as X >= DELTA_POS * I.
DELTA_POS = 1e-6

FEAS_TOL = 1e-7
MAX_ITER = 200

_LADDER = (
    ("CLARABEL", "stock", {}),
    ("CLARABEL", "relaxed-exit", {"reduced_tol_gap_abs": 1e-2, "reduced_tol_gap_rel": 1e-2,
                                  "reduced_tol_feas": 1e-3, "reduced_tol_ktratio": 1e-2}),
    ("SCS", "first-order", {"eps": 1e-7, "max_iters": 60000}),
)


@dataclass
class SdpSolution:
    """Outcome of one solve: a status, the variable assignment, and the worst
    constraint violation both raw and relative to constraint norm."""

    status: str
    assignment: dict[str, np.ndarray | float]
    objective_value: float | None
    max_violation: float
    rel_violation: float
    solver: str = ""
    log: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.status in ("optimal", "feasible")

    def value(self, name: str):
        return self.assignment[name]


class SdpProblem:
    """A semidefinite program under construction.

    Variables are created through the var methods so the solution can report
    them by name; constraints are either PSD blocks (given as a cvxpy
    expression or a grid of blocks) or plain cvxpy constraints.
    """

    def __init__(self, name: str = ""):
        self.name = name
        self._vars: dict[str, cp.Variable] = {}
        self._psd: list[cp.Expression] = []
        self._other: list = []
        self._objective = None
        # Callers may pre-scale a badly ranged objective; the reported
        # objective value is divided by this factor, so minimize(scale * J)
        # with objective_scale = scale reports J at an identical argmin.
        self.objective_scale: float = 1.0
        self.notes: list[str] = []

    def _register(self, v: cp.Variable) -> cp.Variable:
        if v.name() in self._vars:
            raise ValueError(f"duplicate variable name {v.name()!r}")
        self._vars[v.name()] = v
        return v

    def sym_var(self, order: int, name: str) -> cp.Variable:
        return self._register(cp.Variable((order, order), symmetric=True, name=name))

    def rect_var(self, rows: int, cols: int, name: str, nonneg: bool = False) -> cp.Variable:
        return self._register(cp.Variable((rows, cols), name=name, nonneg=nonneg))

    def scalar_var(self, name: str, nonneg: bool = False) -> cp.Variable:
        return self._register(cp.Variable(name=name, nonneg=nonneg))

    def vec_var(self, dim: int, name: str, nonneg: bool = False) -> cp.Variable:
        return self._register(cp.Variable(dim, name=name, nonneg=nonneg))

    def add_psd_constraint(self, blocks) -> int:
        """Require a symmetric affine expression to be PSD. Accepts a cvxpy
        expression or a grid (list of rows) of blocks; returns a constraint id."""
        expr = blocks if isinstance(blocks, cp.Expression) else cp.bmat(blocks)
        if expr.ndim != 2 or expr.shape[0] != expr.shape[1]:
            raise ValueError(f"PSD constraint must be square, got shape {expr.shape}")
        if not expr.is_symmetric():
            # Algebraically symmetric assemblies are not always provably
            # symmetric to the modeling layer; the symmetric part is identical
            # for those and the residual check still sees the raw values.
            expr = 0.5 * (expr + expr.T)
        self._psd.append(expr)
        return len(self._psd) - 1

    def add(self, *constraints) -> None:
        """Attach scalar or elementwise cvxpy constraints (bounds, equalities)."""
        self._other.extend(constraints)

    def minimize(self, expr) -> None:
        self._objective = expr

    @property
    def is_feasibility(self) -> bool:
        return self._objective is None

    def solve(self, feas_tol: float = FEAS_TOL, max_iter: int = MAX_ITER,
              rungs: int | None = None) -> SdpSolution:
        return solve(self, feas_tol=feas_tol, max_iter=max_iter, rungs=rungs)

    def evaluate(self, assignment: dict[str, np.ndarray]) -> tuple[float, float]:
        """Constraint residuals at a fixed assignment, bypassing any solver:
        (max absolute violation, max norm-relative violation). Every variable
        appearing in a constraint must be covered."""
        for name, val in assignment.items():
            if name not in self._vars:
                raise KeyError(f"unknown variable {name!r}")
            v = self._vars[name]
            v.value = float(val) if v.ndim == 0 else np.asarray(val, dtype=float)
        res = _violations(self)
        if res is None:
            raise ValueError("assignment leaves some constrained variable unset")
        return res

    def dump(self, path: str | Path) -> None:
        """Write a self-describing summary of the problem for external checks."""
        payload = {
            "name": self.name,
            "variables": [
                {"name": n, "shape": list(np.shape(v)) or [1],
                 "symmetric": bool(v.attributes.get("symmetric", False)),
                 "nonneg": bool(v.attributes.get("nonneg", False))}
                for n, v in self._vars.items()
            ],
            "psd_constraints": [{"id": i, "order": int(e.shape[0])}
                                for i, e in enumerate(self._psd)],
            "n_other_constraints": len(self._other),
            "objective": "feasibility" if self._objective is None else str(self._objective),
            "notes": list(self.notes),
        }
        Path(path).write_text(json.dumps(payload, indent=2) + "\n")


def _violations(problem: SdpProblem) -> tuple[float, float] | None:
    """Worst constraint violation (absolute, norm-relative); None if any
    constraint could not be evaluated."""
    worst_abs = 0.0
    worst_rel = 0.0
    for expr in problem._psd:
        M = expr.value
        if M is None:
            return None
        M = 0.5 * (M + M.T)
        eigs = np.linalg.eigvalsh(M)
        viol = max(0.0, -float(eigs[0]))
        scale = max(1.0, float(np.abs(eigs).max()))
        worst_abs = max(worst_abs, viol)
        worst_rel = max(worst_rel, viol / scale)
    for con in problem._other:
        v = con.violation()
        if v is None:
            return None
        viol = float(np.max(v))
        worst_abs = max(worst_abs, viol)
        worst_rel = max(worst_rel, viol)
    return worst_abs, worst_rel


def solve(problem: SdpProblem, feas_tol: float = FEAS_TOL,
          max_iter: int = MAX_ITER, rungs: int | None = None) -> SdpSolution:
    """Solve the problem through the solver ladder.

    feas_tol bounds the accepted norm-relative constraint violation; max_iter
    caps the interior-point iteration count (the first-order fallback has its
    own, much larger budget). rungs, when given, walks only that many ladder
    entries; feasibility probes use it to skip the slow first-order fallback.
    Returns status optimal, feasible (feasibility problems), infeasible, or
    numerical-failure; the last carries the ladder log for diagnosis.
    Deterministic for identical inputs and options.
    """
    objective = cp.Minimize(0 if problem._objective is None else problem._objective)
    constraints = [e >> 0 for e in problem._psd] + list(problem._other)
    pr = cp.Problem(objective, constraints)
    log: list[str] = list(problem.notes)

    def finish(status, solver, viol=(0.0, 0.0), value=None):
        assignment = {n: (v.value if v.ndim == 0 else np.asarray(v.value))
                      for n, v in problem._vars.items() if v.value is not None}
        return SdpSolution(status=status, assignment=assignment,
                           objective_value=value, max_violation=viol[0],
                           rel_violation=viol[1], solver=solver, log=log)

    for solver, rung, settings in _LADDER[:rungs]:
        opts = dict(settings)
        if solver == "CLARABEL":
            opts.setdefault("max_iter", max_iter)
        try:
            pr.solve(solver=solver, **opts)
        except Exception as exc:  # solver-side blowups end the rung, not the solve
            log.append(f"{solver} {rung}: raised {type(exc).__name__}: {exc}")
            continue
        status = pr.status
        log.append(f"{solver} {rung}: {status}")
        if status == cp.INFEASIBLE:
            return finish("infeasible", solver)
        if status in (cp.OPTIMAL, cp.OPTIMAL_INACCURATE):
            viol = _violations(problem)
            if viol is None:
                log.append("constraint evaluation returned no values")
                continue
            log.append(f"violation abs={viol[0]:.3e} rel={viol[1]:.3e}")
            if viol[1] <= feas_tol:
                label = "feasible" if problem.is_feasibility else "optimal"
                return finish(label, solver, viol,
                              value=float(pr.value) / problem.objective_scale)
        # unbounded, inaccurate infeasibility, or too-loose solutions: next rung

    log.append("solver ladder exhausted")
    return finish("numerical-failure", "")
