"""Command-line front end running the full pipeline: collect data, build the
uncertainty set, synthesize, simulate, and report.

Subcommands: synthesize, simulate, sweep, scaling, validate, cost. Runs are
driven by a config file (YAML mapping, flat keys plus `etc:` and `noise:`
sections) with flags overriding file values. Exit codes: 0 success/feasible,
1 bad configuration, 2 infeasible, 3 numerical failure. Every emitted table
carries the toolkit version and a hash of the resolved config in a leading
comment line, so reports are traceable to their exact settings.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import hashlib
import json
import os
import sys
import time
from dataclasses import dataclass, field, asdict
from pathlib import Path

import numpy as np
import yaml

from . import __version__
from .cost import CostCoeffs, compare, symbolic_cost
from .data import NoiseBounds, collect_data, sample_ball
from .simulate import empirical_hinf, export_trace, rates, run_closed_loop, verify_uub
from .synthesis import (SparsityConfig, algorithm1, algorithm2, algorithm3,
                        alpha1_search, count_nonzeros)
from .systems import BENCHMARKS, EtcParams, LtiSystem, stack_systems
from .uncertainty import build_uncertainty, membership, membership_margin
from .validate import (pi_domination, sampled_decrease, sampled_dissipation,
                       sampled_uub, scaling_transfer)

MODES = ("stabilize", "uub", "hinf")
OUT_ENV = "ETCSPARSE_OUT_DIR"

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_INFEASIBLE = 2
EXIT_NUMERICAL = 3


class ConfigError(Exception):
    pass


def _as_list(v) -> list[float]:
    if v is None:
        return []
    if isinstance(v, (list, tuple, np.ndarray)):
        return [float(x) for x in v]
    return [float(v)]


@dataclass
class RunConfig:
    """One resolved run request; list-valued fields drive sweeps, scalar
    commands use their first entry."""

    benchmark: str | None = None
    system: str | None = None
    mode: str = "stabilize"
    sigma_x: list[float] = field(default_factory=list)
    sigma_u: list[float] = field(default_factory=list)
    beta: float | None = None
    eps_d: list[float] | None = None
    eps_x: float = 1e-3
    eps_u: float = 1e-3
    T: int = 100
    T_p: int = 100
    x0: list[float] | None = None
    lambdas: list[float] = field(default_factory=lambda: [0.0])
    alpha1: float | None = None
    seed: int = 0
    out: str = ""
    workers: int = 1

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        if (self.benchmark is None) == (self.system is None):
            raise ConfigError("exactly one of benchmark/system must be given")
        if self.benchmark is not None and self.benchmark not in BENCHMARKS:
            raise ConfigError(f"unknown benchmark {self.benchmark!r}; "
                              f"choices: {sorted(BENCHMARKS)}")
        if not self.sigma_x or not self.sigma_u:
            raise ConfigError("sigma_x and sigma_u are required")
        if not self.lambdas:
            raise ConfigError("lambda list must be nonempty")
        if self.mode in ("stabilize", "uub") and self.beta is None:
            raise ConfigError(f"{self.mode} mode requires beta")
        if self.mode == "hinf" and self.beta is not None:
            raise ConfigError("hinf mode takes no beta")
        if self.mode in ("uub", "hinf") and not self.eps_d:
            raise ConfigError(f"{self.mode} mode requires eps_d")
        if self.eps_d is None:
            self.eps_d = [0.0]
        if self.T < 1 or self.T_p < 1:
            raise ConfigError("T and T_p must be positive")
        if not self.out:
            self.out = os.environ.get(OUT_ENV, "runs")

    def hash(self) -> str:
        canon = json.dumps(asdict(self), sort_keys=True, default=str)
        return hashlib.sha256(canon.encode()).hexdigest()[:12]

    def header(self) -> str:
        return f"# etcsparse {__version__} config {self.hash()}"


def load_config(path: str | None, overrides: dict) -> RunConfig:
    """Merge a YAML config file (optional) with CLI overrides into a RunConfig."""
    raw: dict = {}
    if path is not None:
        loaded = yaml.safe_load(Path(path).read_text())
        if not isinstance(loaded, dict):
            raise ConfigError(f"config {path} must be a mapping")
        raw = dict(loaded)
    for section in ("etc", "noise"):
        raw.update(raw.pop(section, {}) or {})
    raw.pop("T_s", None)  # sampling period is metadata only
    renames = {"lambda": "lambdas", "lam": "lambdas"}
    raw = {renames.get(k, k): v for k, v in raw.items()}
    for k, v in overrides.items():
        if v is not None:
            raw[k] = v

    known = RunConfig.__dataclass_fields__
    unknown = set(raw) - set(known)
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    for key in ("sigma_x", "sigma_u", "eps_d", "lambdas"):
        if key in raw:
            raw[key] = _as_list(raw[key])
    if "x0" in raw and raw["x0"] is not None:
        raw["x0"] = _as_list(raw["x0"])
    return RunConfig(**raw)


def resolve_system(cfg: RunConfig) -> LtiSystem:
    if cfg.benchmark is not None:
        return BENCHMARKS[cfg.benchmark]
    arrays = np.load(cfg.system)
    missing = {"A", "B"} - set(arrays)
    if missing:
        raise ConfigError(f"system file lacks arrays {sorted(missing)}")
    A, B = arrays["A"], arrays["B"]
    n_x = A.shape[0]
    E = arrays["E"] if "E" in arrays else np.zeros((n_x, 1))
    C = arrays["C"] if "C" in arrays else np.eye(n_x)
    D = arrays["D"] if "D" in arrays else np.zeros((C.shape[0], B.shape[1]))
    return LtiSystem(A=A, B=B, C=C, D=D, E=E,
                     name=Path(cfg.system).stem)


def _etc_params(cfg: RunConfig, sigma_x: float, sigma_u: float) -> EtcParams:
    return EtcParams(sigma_x=sigma_x, sigma_u=sigma_u, beta=cfg.beta)


def _synthesize_one(sys_: LtiSystem, cfg: RunConfig, sigma_x: float,
                    sigma_u: float, eps_d: float, lam: float):
    """Collect, build, synthesize; returns (result, unc, etc, wall_seconds)."""
    bounds = NoiseBounds(eps_d=eps_d, eps_x=cfg.eps_x, eps_u=cfg.eps_u)
    data = collect_data(sys_, cfg.T, bounds, seed=cfg.seed)
    unc = build_uncertainty(data, sys_.E)
    etc = _etc_params(cfg, sigma_x, sigma_u)
    sp = SparsityConfig(lam=lam)
    start = time.perf_counter()
    if cfg.mode == "stabilize":
        res = algorithm1(unc, etc, sp)
    elif cfg.mode == "uub":
        res = algorithm2(unc, etc, cfg=sp, alpha1=cfg.alpha1)
    else:
        res = algorithm3(unc, etc, sys_.C, sys_.D, sp)
    return res, unc, etc, time.perf_counter() - start


def _disturbance(cfg: RunConfig, sys_: LtiSystem, eps_d: float,
                 row_seed: int) -> np.ndarray | None:
    if eps_d <= 0:
        return None
    rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, row_seed]))
    return sample_ball(rng, sys_.n_d, eps_d, cfg.T_p)


def _performance(res) -> float | None:
    return res.gamma if res.gamma is not None else res.trace_Pinv


def cmd_synthesize(cfg: RunConfig) -> int:
    sys_ = resolve_system(cfg)
    res, _, _, wall = _synthesize_one(sys_, cfg, cfg.sigma_x[0],
                                      cfg.sigma_u[0], cfg.eps_d[0],
                                      cfg.lambdas[0])
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)

    summary = {
        "status": res.status, "mode": cfg.mode, "benchmark": cfg.benchmark,
        "sigma_x": cfg.sigma_x[0], "sigma_u": cfg.sigma_u[0],
        "eps_d": cfg.eps_d[0], "lambda": cfg.lambdas[0], "seed": cfg.seed,
        "wall_seconds": round(wall, 3), "notes": res.notes,
        "version": __version__, "config": cfg.hash(),
    }
    if res.ok:
        l0, _ = count_nonzeros(res.K)
        summary.update(l0=l0, trace_Pinv=res.trace_Pinv, gamma=res.gamma)
        np.save(out / "K.npy", res.K)
        np.save(out / "P.npy", res.P)
        np.savez(out / "multipliers.npz", **res.multipliers)
    with open(out / "iterates.csv", "w") as fh:
        fh.write(cfg.header() + "\n")
        fh.write("iteration,objective,l0,residual\n")
        for rec in res.iterate_log:
            fh.write(f"{rec.iteration},{rec.objective:.9e},"
                     f"{rec.l0},{rec.residual:.3e}\n")
    (out / "result.json").write_text(json.dumps(summary, indent=2) + "\n")

    perf = _performance(res)
    perf_txt = f" perf={perf:.4g}" if perf is not None else ""
    print(f"{res.status}: {sys_.name} {cfg.mode} lambda={cfg.lambdas[0]:g}"
          + (f" l0={summary['l0']}" if res.ok else "") + perf_txt
          + f" wall={wall:.1f}s -> {out}")
    for note in res.notes:
        print(f"  note: {note}")
    if res.ok:
        return EXIT_OK
    return EXIT_INFEASIBLE if res.status == "infeasible" else EXIT_NUMERICAL


def cmd_simulate(cfg: RunConfig, gain: str) -> int:
    sys_ = resolve_system(cfg)
    gain_path = Path(gain)
    if gain_path.is_dir():
        gain_path = gain_path / "K.npy"
    K = np.load(gain_path)
    if K.shape != (sys_.n_u, sys_.n_x):
        print(f"gain shape {K.shape} does not fit system "
              f"({sys_.n_u}, {sys_.n_x})", file=sys.stderr)
        return EXIT_CONFIG
    p_path = gain_path.parent / "P.npy"
    if not p_path.exists():
        print(f"no P.npy next to {gain_path}; the trace needs it for the "
              "set-membership column", file=sys.stderr)
        return EXIT_CONFIG
    P = np.load(p_path)

    etc = _etc_params(cfg, cfg.sigma_x[0], cfg.sigma_u[0])
    x0 = np.asarray(cfg.x0, dtype=float) if cfg.x0 else np.zeros(sys_.n_x)
    d_seq = _disturbance(cfg, sys_, cfg.eps_d[0], row_seed=1)
    trace = run_closed_loop(sys_, K, etc, x0, d_seq, cfg.T_p)
    stats = rates(trace)

    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / "trace.csv"
    export_trace(trace, csv_path, P)
    csv_path.write_text(cfg.header() + "\n" + csv_path.read_text())

    print(f"simulated {sys_.name} T_p={cfg.T_p}: "
          f"r_x={100 * stats.r_x:.2f}% r_u={100 * stats.r_u:.2f}% -> {csv_path}")
    if cfg.mode == "uub":
        ok, entry = verify_uub(trace, P)
        print(f"uub: {'pass' if ok else 'FAIL'} (first containment step {entry})")
    return EXIT_OK


def _sweep_tuples(cfg: RunConfig) -> list[tuple[float, float, float, float]]:
    sx, su = cfg.sigma_x, cfg.sigma_u
    if len(sx) == 1:
        sx = sx * len(su)
    if len(su) == 1:
        su = su * len(sx)
    if len(sx) != len(su):
        raise ConfigError("sigma_x and sigma_u lists must pair up")
    return [(a, b, e, lam) for a, b in zip(sx, su)
            for e in cfg.eps_d for lam in cfg.lambdas]


def _sweep_row(payload: dict) -> dict:
    """One sweep cell, self-contained so it can run in a worker process."""
    cfg = RunConfig(**payload["cfg"])
    sigma_x, sigma_u, eps_d, lam = payload["cell"]
    sys_ = resolve_system(cfg)
    row = {"sigma_x": sigma_x, "sigma_u": sigma_u, "eps_d": eps_d,
           "lam": lam, "status": "", "l0": None, "perf": None,
           "r_x": None, "r_u": None, "wall": None, "flag": ""}
    try:
        res, _, etc, wall = _synthesize_one(sys_, cfg, sigma_x, sigma_u,
                                            eps_d, lam)
        row["status"] = res.status
        row["wall"] = wall
        row["flag"] = _row_flag(res.notes)
        if res.ok:
            row["l0"], _ = count_nonzeros(res.K)
            row["perf"] = _performance(res)
            x0 = (np.asarray(cfg.x0, dtype=float) if cfg.x0
                  else np.zeros(sys_.n_x))
            d_seq = _disturbance(cfg, sys_, eps_d, payload["index"])
            stats = rates(run_closed_loop(sys_, res.K, etc, x0, d_seq,
                                          cfg.T_p))
            row["r_x"], row["r_u"] = stats.r_x, stats.r_u
    except Exception as exc:  # a failed cell must not sink the sweep
        row["status"] = f"error: {exc}"
    return row


def _row_flag(notes: list[str]) -> str:
    """Compress synthesis notes into a short marker for report tables."""
    if any("initialization design" in n for n in notes):
        return "init-fallback"
    if any("last accepted iterate" in n for n in notes):
        return "iterate-fallback"
    if any("accepted at residuals above" in n for n in notes):
        return "relaxed-iterates"
    if any("accepted at residual" in n for n in notes):
        return "relaxed-cert"
    return ""


_SWEEP_COLUMNS = ("sigma_x", "sigma_u", "eps_d", "lambda", "status",
                  "l0", "perf", "r_x", "r_u", "wall_s", "flag")


def _format_sweep(rows: list[dict], header: str) -> tuple[str, str]:
    """Render rows as (csv, aligned text); infeasible cells print x marks."""
    csv_lines = [header, ",".join(_SWEEP_COLUMNS)]
    table = [list(_SWEEP_COLUMNS)]
    for r in rows:
        ok = r["status"] == "success"
        pct = (lambda v: f"{100 * v:.2f}%" if v is not None else "")
        csv_lines.append(",".join([
            f"{r['sigma_x']:g}", f"{r['sigma_u']:g}", f"{r['eps_d']:g}",
            f"{r['lam']:g}", r["status"],
            str(r["l0"]) if ok else "",
            f"{r['perf']:.6g}" if ok and r["perf"] is not None else "",
            f"{r['r_x']:.6g}" if ok and r["r_x"] is not None else "",
            f"{r['r_u']:.6g}" if ok and r["r_u"] is not None else "",
            f"{r['wall']:.2f}" if r["wall"] is not None else "",
            r["flag"],
        ]))
        mark = "×"
        table.append([
            f"{r['sigma_x']:g}", f"{r['sigma_u']:g}", f"{r['eps_d']:g}",
            f"{r['lam']:g}", r["status"] if ok else (
                mark if r["status"] == "infeasible" else r["status"]),
            str(r["l0"]) if ok else mark,
            (f"{r['perf']:.4g}" if r["perf"] is not None else "") if ok else mark,
            pct(r["r_x"]) if ok else mark,
            pct(r["r_u"]) if ok else mark,
            f"{r['wall']:.2f}" if r["wall"] is not None else mark,
            r["flag"],
        ])
    widths = [max(len(row[i]) for row in table) for i in range(len(table[0]))]
    text_lines = [header] + [
        "  ".join(cell.rjust(w) for cell, w in zip(row, widths))
        for row in table
    ]
    return "\n".join(csv_lines) + "\n", "\n".join(text_lines) + "\n"


def cmd_sweep(cfg: RunConfig) -> int:
    cells = _sweep_tuples(cfg)
    payloads = [{"cfg": asdict(cfg), "cell": c, "index": i}
                for i, c in enumerate(cells)]
    if cfg.workers > 1:
        with concurrent.futures.ProcessPoolExecutor(cfg.workers) as pool:
            rows = list(pool.map(_sweep_row, payloads))
    else:
        rows = [_sweep_row(p) for p in payloads]

    csv_text, table_text = _format_sweep(rows, cfg.header())
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "sweep.csv").write_text(csv_text)
    (out / "sweep.txt").write_text(table_text)
    print(table_text, end="")
    print(f"-> {out / 'sweep.csv'}")
    return EXIT_OK


def cmd_scaling(cfg: RunConfig, n_list: list[int], iterations: int,
                algorithms: list[str]) -> int:
    if min(n_list) < 1:
        raise ConfigError("n must be at least 1")
    base = resolve_system(cfg)
    eps_d = cfg.eps_d[0]
    lam = cfg.lambdas[0]
    sp = SparsityConfig(lam=lam, max_iter=iterations, rel_tol=0.0)
    rows = []
    for n in n_list:
        sys_n = stack_systems(base, n)
        bounds = NoiseBounds(eps_d=eps_d, eps_x=cfg.eps_x, eps_u=cfg.eps_u)
        data = collect_data(sys_n, cfg.T, bounds, seed=cfg.seed)
        unc = build_uncertainty(data, sys_n.E)
        row = {"n": n, "n_x": sys_n.n_x, "n_u": sys_n.n_u}
        for alg in algorithms:
            etc = EtcParams(sigma_x=cfg.sigma_x[0], sigma_u=cfg.sigma_u[0],
                            beta=None if alg == "hinf" else cfg.beta)
            try:
                if alg == "uub":
                    # A fixed boundedness level goes infeasible as the
                    # stacked dimension grows; re-search per size, with
                    # headroom, outside the timed region.
                    alpha1 = 0.8 * alpha1_search(unc, etc, eps_d)
                start = time.perf_counter()
                if alg == "stabilize":
                    res = algorithm1(unc, etc, sp)
                elif alg == "uub":
                    res = algorithm2(unc, etc, cfg=sp, alpha1=alpha1)
                else:
                    res = algorithm3(unc, etc, sys_n.C, sys_n.D, sp)
                ok = res.ok
            except Exception:
                ok = False
            row[alg] = time.perf_counter() - start if ok else None
        rows.append(row)
        cols = " ".join(f"{alg}={row[alg]:.1f}s" if row[alg] is not None
                        else f"{alg}=failed" for alg in algorithms)
        print(f"n={n} (n_x={row['n_x']}, n_u={row['n_u']}): {cols}")

    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    lines = [cfg.header(),
             ",".join(["n", "n_x_total", "n_u_total"]
                      + [f"seconds_{a}" for a in algorithms])]
    for row in rows:
        lines.append(",".join(
            [str(row["n"]), str(row["n_x"]), str(row["n_u"])]
            + [f"{row[a]:.3f}" if row[a] is not None else "failed"
               for a in algorithms]))
    (out / "scaling.csv").write_text("\n".join(lines) + "\n")
    print(f"-> {out / 'scaling.csv'}")
    return EXIT_OK


def cmd_validate(cfg: RunConfig, artifact: str) -> int:
    art = Path(artifact)
    K = np.load(art / "K.npy")
    P = np.load(art / "P.npy")
    result = json.loads((art / "result.json").read_text())

    sys_ = resolve_system(cfg)
    eps_d = cfg.eps_d[0]
    bounds = NoiseBounds(eps_d=eps_d, eps_x=cfg.eps_x, eps_u=cfg.eps_u)
    data = collect_data(sys_, cfg.T, bounds, seed=cfg.seed)
    unc = build_uncertainty(data, sys_.E)
    etc = _etc_params(cfg, cfg.sigma_x[0], cfg.sigma_u[0])

    all_ok = True
    checks = [pi_domination(bounds, sys_.n_d, sys_.n_x, sys_.n_u,
                            draws=10_000, seed=cfg.seed)]
    member_ok = membership(sys_.A, sys_.B, unc)
    all_ok &= member_ok
    print(f"true-system membership: {'pass' if member_ok else 'FAIL'}, "
          f"margin {membership_margin(sys_.A, sys_.B, unc):.3e}")

    if cfg.mode == "stabilize":
        checks.append(sampled_decrease(unc, etc, K, P, seed=cfg.seed))
    elif cfg.mode == "uub":
        checks.append(sampled_uub(unc, etc, K, P, seed=cfg.seed))
        _, rel_res = scaling_transfer(unc, etc, cfg.alpha1 or 0.05, n=5)
        transfer_ok = rel_res <= 1e-8
        all_ok &= transfer_ok
        print(f"alpha1-scaling transfer (n=5): "
              f"{'pass' if transfer_ok else 'FAIL'}, residual {rel_res:.3e}")
    else:
        gamma = result.get("gamma")
        if gamma is None:
            raise ConfigError("artifact lacks a gamma value for hinf checks")
        checks.append(sampled_dissipation(unc, etc, K, P, gamma,
                                          sys_.C, sys_.D, seed=cfg.seed))

    for chk in checks:
        print(chk)
    all_ok &= all(c.ok for c in checks)
    print("validation:", "PASS" if all_ok else "FAIL")
    return EXIT_OK if all_ok else EXIT_INFEASIBLE


def cmd_cost(args) -> int:
    K = np.load(args.gain)
    dims = (K.shape[1], K.shape[0])
    expr = symbolic_cost(K, args.r_x, args.r_u, dims)
    print(f"J = {expr}")
    if args.alphas is not None:
        coeffs = CostCoeffs(*args.alphas)
        print(f"J({', '.join(f'{a:g}' for a in args.alphas)}) = "
              f"{expr.evaluate(coeffs):.6g}")
    if args.baseline_gain is not None:
        Kb = np.load(args.baseline_gain)
        if Kb.shape != K.shape:
            print("baseline gain shape differs", file=sys.stderr)
            return EXIT_CONFIG
        expr_b = symbolic_cost(Kb, args.baseline_r_x, args.baseline_r_u, dims)
        print(f"J_base = {expr_b}")
        rep = compare(expr, expr_b)
        print(f"difference (base - ours) = {rep.difference}")
        verdict = {"equal": "costs are identical",
                   "first_lower": "ours never costlier, whatever the weights",
                   "second_lower": "baseline never costlier, whatever the weights",
                   "depends": "ordering depends on the weights"}[rep.ordering]
        print(f"ordering: {verdict}")
        if rep.condition:
            print(f"ours cheaper iff {rep.condition}")
        if args.alphas is not None:
            coeffs = CostCoeffs(*args.alphas)
            print(f"numeric: ours {expr.evaluate(coeffs):.6g} "
                  f"vs base {expr_b.evaluate(coeffs):.6g}")
    return EXIT_OK


def _common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="YAML config file")
    p.add_argument("--benchmark", choices=sorted(BENCHMARKS))
    p.add_argument("--system", help="npz file with arrays A, B [, E, C, D]")
    p.add_argument("--mode", choices=MODES)
    p.add_argument("--sigma-x", dest="sigma_x", type=float, nargs="+")
    p.add_argument("--sigma-u", dest="sigma_u", type=float, nargs="+")
    p.add_argument("--beta", type=float)
    p.add_argument("--eps-d", dest="eps_d", type=float, nargs="+")
    p.add_argument("--eps-x", dest="eps_x", type=float)
    p.add_argument("--eps-u", dest="eps_u", type=float)
    p.add_argument("--T", dest="T", type=int)
    p.add_argument("--T-p", dest="T_p", type=int)
    p.add_argument("--x0", type=float, nargs="+")
    p.add_argument("--lambda", dest="lambdas", type=float, nargs="+")
    p.add_argument("--alpha1", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.add_argument("--workers", type=int)


def _build_config(args) -> RunConfig:
    keys = ("benchmark", "system", "mode", "sigma_x", "sigma_u", "beta",
            "eps_d", "eps_x", "eps_u", "T", "T_p", "x0", "lambdas",
            "alpha1", "seed", "out", "workers")
    overrides = {k: getattr(args, k, None) for k in keys}
    return load_config(args.config, overrides)


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="etcsparse",
        description="co-design of event-triggered and sparse controllers "
                    "from noisy data")
    sub = parser.add_subparsers(dest="command", required=True)

    for name in ("synthesize", "sweep"):
        _common_flags(sub.add_parser(name))

    p_sim = sub.add_parser("simulate")
    _common_flags(p_sim)
    p_sim.add_argument("--gain", required=True,
                       help="K.npy file or a synthesize output directory")

    p_scale = sub.add_parser("scaling")
    _common_flags(p_scale)
    p_scale.add_argument("--n", type=int, nargs="+", default=[1, 2, 3])
    p_scale.add_argument("--iterations", type=int, default=50)
    p_scale.add_argument("--algorithms", nargs="+", choices=MODES,
                         default=list(MODES))

    p_val = sub.add_parser("validate")
    _common_flags(p_val)
    p_val.add_argument("--artifact", required=True,
                       help="synthesize output directory")

    p_cost = sub.add_parser("cost")
    p_cost.add_argument("--gain", required=True)
    p_cost.add_argument("--r-x", dest="r_x", type=float, required=True)
    p_cost.add_argument("--r-u", dest="r_u", type=float, required=True)
    p_cost.add_argument("--baseline-gain", dest="baseline_gain")
    p_cost.add_argument("--baseline-r-x", dest="baseline_r_x", type=float)
    p_cost.add_argument("--baseline-r-u", dest="baseline_r_u", type=float)
    p_cost.add_argument("--alphas", type=float, nargs=5,
                        metavar=("AX", "AU", "AM", "AF", "AA"))

    args = parser.parse_args(argv)
    try:
        if args.command == "cost":
            return cmd_cost(args)
        cfg = _build_config(args)
        if args.command == "synthesize":
            return cmd_synthesize(cfg)
        if args.command == "simulate":
            return cmd_simulate(cfg, args.gain)
        if args.command == "sweep":
            return cmd_sweep(cfg)
        if args.command == "scaling":
            return cmd_scaling(cfg, args.n, args.iterations, args.algorithms)
        return cmd_validate(cfg, args.artifact)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FileNotFoundError as exc:
        print(f"missing file: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
