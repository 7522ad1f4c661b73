"""Command-line front end: spectra, evolution, time averages, localization
bounds, certification sweeps and glued-tree exports, as CSV or JSON.

Every command is deterministic given its flags (plus the seed for tree
builds, with GLUEDWALK_SEED as the environment fallback).  Numbers are
written with 17 significant digits so output round-trips to the exact
double.  Exit status is 0 only when all internal residual checks pass.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import analysis, gluedtree, jacobi, walk

__all__ = ["RunConfig", "build_parser", "main", "run"]

RESIDUAL_TOL = 1e-10
NORM_TOL = 1e-9
ROWSUM_TOL = 1e-10
ROWSUM_TOL_EMPIRICAL = 1e-6
MARGIN_TOL = 1e-12
EQUIV_TOL = 1e-12
SYMMETRY_TOL = 1e-10
LUMPING_TOL = 1e-12

DEFAULT_GRID_N = range(2, 9)
DEFAULT_GRID_P = (1.0 / 3.0, 2.0 / 3.0, 0.9)


@dataclass
class RunConfig:
    """Resolved invocation: one command plus the flags it consumes."""

    command: str
    n: int | None = None
    p: float | None = None
    k: int | None = None
    start: int | None = None
    steps: int | None = None
    horizon: int | None = None
    seed: int | None = None
    method: str = "spectral"
    fmt: str = "csv"
    output: str = "-"
    grid: str = "default"
    simple_gluing: bool = False
    limit_i: int | None = None
    limit_x: int | None = None
    limit_k: int | None = None
    checks: list[str] = field(default_factory=list)

    def resolved_p(self) -> float:
        if self.p is not None:
            return self.p
        return 1.0 / (self.k + 1)

    def walk_params(self) -> jacobi.WalkParams:
        return jacobi.WalkParams(n=self.n, p=self.resolved_p())

    def fail(self, message: str) -> None:
        self.checks.append(message)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _emit(cfg: RunConfig, columns: list[str], rows: list[dict], meta: dict) -> None:
    if cfg.fmt == "json":
        text = json.dumps({"meta": meta, "rows": rows}, indent=2) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(row.get(col)) for col in columns])
        text = buf.getvalue()
    if cfg.output == "-":
        sys.stdout.write(text)
    else:
        with open(cfg.output, "w") as handle:
            handle.write(text)


def _fraction(text: str) -> float:
    if "/" in text:
        num, den = text.split("/", 1)
        return float(num) / float(den)
    return float(text)


def parse_grid(text: str) -> list[tuple[int, float]]:
    """Parse a certification grid: 'default' or 'n=2:8;p=1/3,2/3,0.9'
    (n accepts comma lists and inclusive a:b ranges, p accepts fractions)."""
    if text == "default":
        return [(n, p) for n in DEFAULT_GRID_N for p in DEFAULT_GRID_P]
    ns: list[int] = []
    ps: list[float] = []
    for part in text.split(";"):
        key, _, values = part.partition("=")
        key = key.strip()
        if not values:
            raise ValueError(f"grid part {part!r} is not of the form key=values")
        items = [item.strip() for item in values.split(",") if item.strip()]
        if key == "n":
            for item in items:
                if ":" in item:
                    a, b = item.split(":", 1)
                    ns.extend(range(int(a), int(b) + 1))
                else:
                    ns.append(int(item))
        elif key == "p":
            ps.extend(_fraction(item) for item in items)
        else:
            raise ValueError(f"unknown grid key {key!r} (use n= and p=)")
    if not ns or not ps:
        raise ValueError("grid must supply both n= and p= values")
    return [(n, p) for n in ns for p in ps]


def cmd_spectrum(cfg: RunConfig) -> list[dict]:
    params = cfg.walk_params()
    spec = jacobi.build_j2n(params)
    system = jacobi.full_eigensystem(params)
    lifted = walk.lift_eigenpairs(system, params)
    rows: list[dict] = []
    for index, pair in enumerate(sorted(system, key=lambda e: e.eigenvalue)):
        res = jacobi.residual_inf(spec, pair)
        direct = float(np.dot(pair.vector, pair.vector))
        if res > RESIDUAL_TOL:
            cfg.fail(f"matrix eigenpair at {pair.eigenvalue}: residual {res:.3e}")
        if abs(pair.norm_sq - direct) > NORM_TOL * direct:
            cfg.fail(f"matrix eigenpair at {pair.eigenvalue}: norm mismatch")
        rows.append(
            {
                "table": "jacobi",
                "n": params.n,
                "p": params.p,
                "index": index,
                "lambda": pair.eigenvalue,
                "kind": pair.kind,
                "norm_sq": pair.norm_sq,
                "residual": res,
            }
        )
    for index, pair in enumerate(sorted(lifted, key=lambda e: e.phi)):
        res = walk.unitary_residual(pair, params)
        if res > RESIDUAL_TOL:
            cfg.fail(f"walk eigenpair at phase {pair.phi}: residual {res:.3e}")
        rows.append(
            {
                "table": "unitary",
                "n": params.n,
                "p": params.p,
                "index": index,
                "mu_re": pair.mu.real,
                "mu_im": pair.mu.imag,
                "phi": pair.phi,
                "source_lambda": pair.source_lambda,
                "residual": res,
            }
        )
    columns = [
        "table", "n", "p", "index", "lambda", "kind", "norm_sq",
        "mu_re", "mu_im", "phi", "source_lambda", "residual",
    ]
    meta = {"command": "spectrum", "n": params.n, "p": params.p,
            "jacobi_rows": 2 * params.n, "unitary_rows": walk.arc_count(params.n)}
    _emit(cfg, columns, rows, meta)
    return rows


def cmd_evolve(cfg: RunConfig) -> list[dict]:
    params = cfg.walk_params()
    size = params.size
    if not 1 <= cfg.start <= size:
        raise ValueError(f"start vertex must lie in 1..{size}, got {cfg.start}")
    chiralities = ["L", "R"]
    if cfg.start == 1:
        chiralities = ["R"]
    elif cfg.start == size:
        chiralities = ["L"]
    states = [walk.WalkState.point_mass(params.n, cfg.start, c) for c in chiralities]
    rows: list[dict] = []
    for t in range(cfg.steps + 1):
        dist = np.mean([walk.position_distribution(s) for s in states], axis=0)
        total = float(dist.sum())
        if abs(total - 1.0) > ROWSUM_TOL:
            cfg.fail(f"t={t}: probabilities sum to {total!r}")
        for x in range(1, size + 1):
            rows.append(
                {"n": params.n, "p": params.p, "start": cfg.start,
                 "t": t, "x": x, "probability": float(dist[x - 1])}
            )
        if t < cfg.steps:
            states = [walk.step(s, params) for s in states]
    meta = {"command": "evolve", "n": params.n, "p": params.p,
            "start": cfg.start, "steps": cfg.steps}
    _emit(cfg, ["n", "p", "start", "t", "x", "probability"], rows, meta)
    return rows


def cmd_timeavg(cfg: RunConfig) -> list[dict]:
    params = cfg.walk_params()
    if cfg.method == "spectral":
        dist = analysis.time_avg_spectral(params)
        tol = ROWSUM_TOL
    else:
        dist = analysis.time_avg_empirical(params, cfg.horizon)
        tol = ROWSUM_TOL_EMPIRICAL
    sums = dist.values.sum(axis=1)
    if float(np.max(np.abs(sums - 1.0))) > tol:
        cfg.fail(f"row sums deviate from 1 by {np.max(np.abs(sums - 1.0)):.3e}")
    rows = [
        {"n": params.n, "p": params.p, "method": dist.method,
         "T": dist.horizon, "i": i, "x": x,
         "p_bar": float(dist.values[i - 1, x - 1])}
        for i in range(1, params.size + 1)
        for x in range(1, params.size + 1)
    ]
    meta = {"command": "timeavg", "n": params.n, "p": params.p,
            "method": dist.method, "T": dist.horizon}
    _emit(cfg, ["n", "p", "method", "T", "i", "x", "p_bar"], rows, meta)
    return rows


def cmd_bound(cfg: RunConfig) -> list[dict]:
    params = cfg.walk_params()
    report = analysis.bound_report(params, i=cfg.limit_i, x=cfg.limit_x, k=cfg.limit_k)
    generic = analysis.lower_bound_generic(params)
    min_margin = float(np.min(report.margin))
    if min_margin < -MARGIN_TOL:
        cfg.fail(f"bound exceeds the time average: margin {min_margin:.3e}")
    generic_margin = float(np.min(report.dist.values - generic))
    if generic_margin < -MARGIN_TOL:
        cfg.fail(f"generic bound exceeds the time average: margin {generic_margin:.3e}")
    if params.p != params.q:
        dev = float(np.max(np.abs(report.bound - generic)))
        if dev > EQUIV_TOL:
            cfg.fail(f"closed form and generic bound disagree by {dev:.3e}")
    rows = [
        {"n": params.n, "p": params.p, "i": i, "x": x,
         "bound": float(report.bound[i - 1, x - 1]),
         "p_bar": float(report.dist.values[i - 1, x - 1]),
         "margin": float(report.margin[i - 1, x - 1])}
        for i in range(1, params.size + 1)
        for x in range(1, params.size + 1)
    ]
    meta = {"command": "bound", "n": params.n, "p": params.p,
            "min_margin": min_margin}
    if report.limit_p_gt_q is not None:
        meta["limit_p_gt_q"] = report.limit_p_gt_q
    if report.limit_p_lt_q is not None:
        meta["limit_p_lt_q"] = report.limit_p_lt_q
    _emit(cfg, ["n", "p", "i", "x", "bound", "p_bar", "margin"], rows, meta)
    return rows


def cmd_certify(cfg: RunConfig) -> list[dict]:
    points = sorted(parse_grid(cfg.grid))
    rows: list[dict] = []
    for n, p in points:
        params = jacobi.WalkParams(n=n, p=p)
        dist = analysis.time_avg_spectral(params)
        closed = analysis.lower_bound(params)
        generic = analysis.lower_bound_generic(params)
        min_margin = float(min(np.min(dist.values - closed), np.min(dist.values - generic)))
        equiv = 0.0 if p == params.q else float(np.max(np.abs(closed - generic)))
        sym_start, sym_pos = analysis.symmetry_errors(dist)
        rowsum = float(np.max(np.abs(dist.values.sum(axis=1) - 1.0)))
        ok = (
            min_margin >= -MARGIN_TOL
            and equiv <= EQUIV_TOL
            and sym_start <= SYMMETRY_TOL
            and sym_pos <= SYMMETRY_TOL
            and rowsum <= ROWSUM_TOL
        )
        if not ok:
            cfg.fail(f"certification failed at n={n}, p={p}")
        rows.append(
            {"n": n, "p": p, "min_margin": min_margin,
             "closed_generic_dev": equiv, "start_symmetry_err": sym_start,
             "position_symmetry_err": sym_pos, "row_sum_err": rowsum,
             "status": "pass" if ok else "fail"}
        )
    meta = {"command": "certify", "grid": cfg.grid, "points": len(points),
            "failures": sum(row["status"] == "fail" for row in rows)}
    _emit(
        cfg,
        ["n", "p", "min_margin", "closed_generic_dev", "start_symmetry_err",
         "position_symmetry_err", "row_sum_err", "status"],
        rows,
        meta,
    )
    return rows


def cmd_gluedtree(cfg: RunConfig) -> list[dict]:
    tree = gluedtree.build_glued_tree(cfg.k, cfg.n, cfg.seed, simple=cfg.simple_gluing)
    lumping = gluedtree.verify_lumping(tree, cfg.steps)
    if lumping > LUMPING_TOL:
        cfg.fail(f"lumping discrepancy {lumping:.3e} exceeds {LUMPING_TOL}")
    rows = [
        {"u": gluedtree.vertex_label(u), "v": gluedtree.vertex_label(v)}
        for u, v in tree.edges
    ]
    meta = {"command": "gluedtree", "k": tree.k, "n": tree.n, "seed": tree.seed,
            "simple_gluing": tree.simple, "vertices": len(tree.vertices),
            "edges": len(tree.edges), "lumping_steps": cfg.steps,
            "lumping_max_error": lumping}
    _emit(cfg, ["u", "v"], rows, meta)
    return rows


def _add_output_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--format", choices=("csv", "json"), default="csv",
                     help="output encoding (default csv)")
    sub.add_argument("--output", default="-", metavar="PATH",
                     help="output file, '-' for stdout (default)")


def _add_walk_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--n", type=int, required=True,
                     help="half path length; the path has 2n vertices")
    group = sub.add_mutually_exclusive_group(required=True)
    group.add_argument("--p", type=float, help="transition bias in (0, 1)")
    group.add_argument("--k", type=int,
                       help="glued-tree arity; implies p = 1/(k+1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gluedwalk",
        description="Coined walks on glued-tree paths: spectra, time averages, bounds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    spectrum = sub.add_parser("spectrum", help="matrix and walk eigensystems")
    _add_walk_flags(spectrum)
    _add_output_flags(spectrum)

    evolve = sub.add_parser("evolve", help="position distribution trajectory")
    _add_walk_flags(evolve)
    evolve.add_argument("--start", type=int, required=True,
                        help="initial vertex in 1..2n (chirality mixed evenly)")
    evolve.add_argument("--steps", type=int, default=100,
                        help="number of walk steps (default 100)")
    _add_output_flags(evolve)

    timeavg = sub.add_parser("timeavg", help="time-averaged distribution")
    _add_walk_flags(timeavg)
    timeavg.add_argument("--method", choices=("spectral", "empirical"),
                         default="spectral")
    timeavg.add_argument("--T", dest="horizon", type=int, default=10000,
                         help="Cesaro horizon for --method empirical (default 10000)")
    _add_output_flags(timeavg)

    bound = sub.add_parser("bound", help="localization lower bound and margin")
    _add_walk_flags(bound)
    bound.add_argument("--i", dest="limit_i", type=int,
                       help="start vertex for the reported limit value")
    bound.add_argument("--x", dest="limit_x", type=int,
                       help="position for the reported limit value")
    bound.add_argument("--limit-k", dest="limit_k", type=int,
                       help="k = lim 2n-(i+x) for the p < 1/2 limit value")
    _add_output_flags(bound)

    certify = sub.add_parser("certify", help="bound certification over a grid")
    certify.add_argument("--grid", default="default",
                         help="'default' or 'n=2:8;p=1/3,2/3,0.9'")
    _add_output_flags(certify)

    tree = sub.add_parser("gluedtree", help="build a glued tree and verify lumping")
    tree.add_argument("--k", type=int, required=True, help="tree arity (>= 2)")
    tree.add_argument("--n", type=int, required=True, help="tree height per half (>= 2)")
    tree.add_argument("--seed", type=int, default=None,
                      help="gluing seed (default: GLUEDWALK_SEED or 0)")
    tree.add_argument("--steps", type=int, default=50,
                      help="lumping verification steps (default 50)")
    tree.add_argument("--simple-gluing", action="store_true",
                      help="resample until the gluing has no parallel edges")
    _add_output_flags(tree)

    return parser


_DISPATCH = {
    "spectrum": cmd_spectrum,
    "evolve": cmd_evolve,
    "timeavg": cmd_timeavg,
    "bound": cmd_bound,
    "certify": cmd_certify,
    "gluedtree": cmd_gluedtree,
}


def _resolve_seed(value: int | None) -> int:
    if value is not None:
        return value
    env = os.environ.get("GLUEDWALK_SEED")
    return int(env) if env else 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(
        command=args.command,
        n=getattr(args, "n", None),
        p=getattr(args, "p", None),
        k=getattr(args, "k", None),
        start=getattr(args, "start", None),
        steps=getattr(args, "steps", None),
        horizon=getattr(args, "horizon", None),
        seed=_resolve_seed(getattr(args, "seed", None)),
        method=getattr(args, "method", "spectral"),
        fmt=args.format,
        output=args.output,
        grid=getattr(args, "grid", "default"),
        simple_gluing=getattr(args, "simple_gluing", False),
        limit_i=getattr(args, "limit_i", None),
        limit_x=getattr(args, "limit_x", None),
        limit_k=getattr(args, "limit_k", None),
    )
    try:
        _DISPATCH[args.command](cfg)
    except (ValueError, IndexError, jacobi.EigensystemError) as exc:
        print(f"gluedwalk {args.command}: {exc}", file=sys.stderr)
        return 2
    if cfg.checks:
        for message in cfg.checks:
            print(f"gluedwalk {args.command}: CHECK FAILED: {message}", file=sys.stderr)
        return 1
    return 0


def run() -> None:
    sys.exit(main())
