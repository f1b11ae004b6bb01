"""Command-line front end.

    python -m periodic_dirichlet green-check
    python -m periodic_dirichlet solve --config cfg.json --eps 0.2 --eval 0.1,0.1
    python -m periodic_dirichlet sweep --config cfg.json --eps-list 0.2,0.1 --points 0.1,0.1 --out s.csv
    python -m periodic_dirichlet energy --config cfg.json --eps-list 0.2,0.1 --out e.csv
    python -m periodic_dirichlet oracle-compare --config cfg.json --eps 0.25 --M 256 --points 0.1,0.1
    python -m periodic_dirichlet convergence --config cfg.json --eps 0.25 --N-list 16,32,64,128 --out c.csv

Exit status: 0 success, 1 usage or configuration error, 2 a numerical check failed.
"""
import argparse
import csv
import io
import json
import sys

import numpy as np

from .config import ExperimentConfig
from .dirichlet_solver import assemble_system, boundary_residual, solve_system
from .errors import PeriodicDirichletError
from .fd_oracle import fd_energy, fd_solve
from .geometry import discretize
from .lattice_green import (
    PROBE_POINTS,
    EwaldParams,
    PeriodicGreen,
    fourier_reference,
    sample_cell_points,
)
from .observables import RESIDUAL_ACCEPT, energy, eval_u, solve_config, sweep

EXIT_OK, EXIT_USAGE, EXIT_CHECK = 0, 1, 2

GREEN_ORACLE_TOL = 1e-8
GREEN_LAPLACIAN_TOL = 1e-4
ORACLE_VALUE_TOL = 5e-2
ORACLE_ENERGY_RTOL = 5e-2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def fmt(x):
    return "" if x is None else f"{x:.17g}"


def _floats(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated numbers, got {text!r}")


def _point(text):
    vals = _floats(text)
    if len(vals) != 2:
        raise UsageError(f"points are given as x1,x2; got {text!r}")
    return tuple(vals)


def _points(groups):
    # accept "--points 0.1,0.1 0.9,0.3" as well as "--points 0.1,0.1;0.9,0.3"
    out = []
    for g in groups or []:
        out.extend(_point(p) for p in g.split(";") if p.strip())
    return out


def _write_csv(path, config, header, rows, stdout):
    buf = io.StringIO()
    buf.write(f"# config_hash={config.hash} config={config.dumps(outputs=False)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(buf.getvalue())
    else:
        stdout.write(buf.getvalue())


def _ewald_from_args(args):
    return EwaldParams(eta=args.eta, kmax=args.kmax, rmax=args.rmax, target_abs_tol=args.tol)


def cmd_green_check(args, out):
    green = PeriodicGreen(_ewald_from_args(args))
    ref = fourier_reference(PROBE_POINTS, kcut=200)
    vals = green.evaluate(PROBE_POINTS, order=0).value
    ok = True
    out.write("check,x1,x2,ewald,reference,abs_error\n")
    for p, v, r in zip(PROBE_POINTS, vals, ref):
        err = abs(v - r)
        ok &= err <= GREEN_ORACLE_TOL
        out.write(f"fourier,{fmt(p[0])},{fmt(p[1])},{fmt(v)},{fmt(r)},{fmt(err)}\n")
    rng = np.random.default_rng(args.seed)
    pts = sample_cell_points(rng, 20)
    h = 1e-3
    e1, e2 = np.array([h, 0.0]), np.array([0.0, h])
    f = lambda x: green.evaluate(x, order=0).value
    lap = (f(pts + e1) + f(pts - e1) + f(pts + e2) + f(pts - e2) - 4 * f(pts)) / h**2
    for p, L in zip(pts, lap):
        err = abs(L + 1.0)
        ok &= err <= GREEN_LAPLACIAN_TOL
        out.write(f"laplacian,{fmt(p[0])},{fmt(p[1])},{fmt(L)},-1,{fmt(err)}\n")
    return EXIT_OK if ok else EXIT_CHECK


def cmd_solve(args, out):
    config = ExperimentConfig.load(args.config)
    density, system, res = solve_config(config, args.eps, mode=args.mode)
    points = _points(args.eval)
    report = {
        "config_hash": config.hash,
        "eps": args.eps,
        "mode": args.mode,
        "n_nodes": config.N,
        "c": density.constant,
        "cond_estimate": density.cond_estimate,
        "boundary_residual": res,
    }
    if points:
        us = [float(eval_u(density, system, np.array(p))) for p in points]
        report["points"] = [list(p) for p in points]
        report["u"] = us[0] if len(us) == 1 else us
    if args.energy:
        report["energy"] = energy(density, system)
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    out.write(text)
    return EXIT_OK if res <= RESIDUAL_ACCEPT else EXIT_CHECK


def cmd_sweep(args, out):
    config = ExperimentConfig.load(args.config)
    records = sweep(config, _floats(args.eps_list), _points(args.points), workers=args.workers)
    rows = []
    for r in records:
        x1, x2 = (r.point if r.point is not None else (None, None))
        rows.append([r.kind, fmt(r.eps), fmt(x1), fmt(x2), fmt(r.value), r.n_nodes, fmt(r.residual)])
    _write_csv(args.out, config, ["kind", "eps", "x1", "x2", "value", "n_nodes", "residual"], rows, out)
    bad = [r for r in records if not r.accepted]
    for r in bad:
        sys.stderr.write(f"flagged eps={r.eps:g} kind={r.kind}: {r.flag}\n")
    return EXIT_CHECK if bad else EXIT_OK


def cmd_energy(args, out):
    config = ExperimentConfig.load(args.config)
    records = sweep(config, _floats(args.eps_list), (), workers=args.workers)
    n = 2
    rows = [[fmt(r.eps), fmt(r.value), fmt(r.value / r.eps ** (n - 2))] for r in records]
    _write_csv(args.out, config, ["eps", "energy", "g_of_eps"], rows, out)
    bad = [r for r in records if not r.accepted]
    for r in bad:
        sys.stderr.write(f"flagged eps={r.eps:g}: {r.flag}\n")
    return EXIT_CHECK if bad else EXIT_OK


def cmd_oracle_compare(args, out):
    config = ExperimentConfig.load(args.config)
    density, system, res = solve_config(config, args.eps)
    grid = fd_solve(config.curve, system.placement, config.data, args.M)
    ok = res <= RESIDUAL_ACCEPT
    out.write("quantity,x1,x2,bem,fd,difference,tolerance\n")
    for p in _points(args.points):
        ub = float(eval_u(density, system, np.array(p)))
        uf = grid.value_at(p)
        diff = abs(ub - uf)
        ok &= diff <= ORACLE_VALUE_TOL
        out.write(f"u,{fmt(p[0])},{fmt(p[1])},{fmt(ub)},{fmt(uf)},{fmt(diff)},{fmt(ORACLE_VALUE_TOL)}\n")
    eb = energy(density, system)
    ef = fd_energy(grid)
    rel = abs(eb - ef) / max(abs(eb), 1e-300) if eb != 0 else abs(ef)
    ok &= rel <= ORACLE_ENERGY_RTOL
    out.write(f"energy,,,{fmt(eb)},{fmt(ef)},{fmt(rel)},{fmt(ORACLE_ENERGY_RTOL)}\n")
    return EXIT_OK if ok else EXIT_CHECK


def cmd_convergence(args, out):
    config = ExperimentConfig.load(args.config)
    rows = []
    for n in (int(v) for v in _floats(args.N_list)):
        system = assemble_system(
            config.curve, discretize(n), config.data, eps=args.eps, w=config.w, green=config.green
        )
        density = solve_system(system)
        rows.append([n, fmt(boundary_residual(density, system)), fmt(density.cond_estimate)])
    _write_csv(args.out, config, ["N", "boundary_residual", "cond_estimate"], rows, out)
    return EXIT_OK


def build_parser():
    parser = _Parser(prog="periodic_dirichlet", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("green-check", help="Ewald kernel vs Fourier oracle and Laplacian check")
    g.add_argument("--eta", type=float, default=3.0)
    g.add_argument("--kmax", type=int, default=12)
    g.add_argument("--rmax", type=int, default=2)
    g.add_argument("--tol", type=float, default=1e-10)
    g.add_argument("--seed", type=int, default=0)
    g.set_defaults(func=cmd_green_check)

    s = sub.add_parser("solve", help="solve at one eps and report c, u and residual as JSON")
    s.add_argument("--config", required=True)
    s.add_argument("--eps", type=float, required=True)
    s.add_argument("--eval", action="append", help="evaluation point x1,x2 (repeatable)")
    s.add_argument("--mode", choices=("direct", "rescaled"), default="direct")
    s.add_argument("--energy", action="store_true", help="also report the cell energy")
    s.add_argument("--out")
    s.set_defaults(func=cmd_solve)

    w = sub.add_parser("sweep", help="u at points and energy over a list of eps, as CSV")
    w.add_argument("--config", required=True)
    w.add_argument("--eps-list", required=True)
    w.add_argument("--points", nargs="+")
    w.add_argument("--workers", type=int)
    w.add_argument("--out")
    w.set_defaults(func=cmd_sweep)

    e = sub.add_parser("energy", help="energy over a list of eps, as CSV")
    e.add_argument("--config", required=True)
    e.add_argument("--eps-list", required=True)
    e.add_argument("--workers", type=int)
    e.add_argument("--out")
    e.set_defaults(func=cmd_energy)

    o = sub.add_parser("oracle-compare", help="boundary integral solution vs finite differences")
    o.add_argument("--config", required=True)
    o.add_argument("--eps", type=float, required=True)
    o.add_argument("--M", type=int, default=256)
    o.add_argument("--points", nargs="+", default=["0.1,0.1"])
    o.set_defaults(func=cmd_oracle_compare)

    c = sub.add_parser("convergence", help="boundary residual and conditioning vs N, as CSV")
    c.add_argument("--config", required=True)
    c.add_argument("--eps", type=float, required=True)
    c.add_argument("--N-list", dest="N_list", default="16,32,64,128")
    c.add_argument("--out")
    c.set_defaults(func=cmd_convergence)
    return parser


def main(argv=None, stdout=None):
    out = stdout if stdout is not None else sys.stdout
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, out)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except PeriodicDirichletError as exc:
        # input problems subclass ValueError; numerical failures do not
        if isinstance(exc, ValueError):
            sys.stderr.write(f"configuration error: {exc}\n")
            return EXIT_USAGE
        sys.stderr.write(f"check failed: {type(exc).__name__}: {exc}\n")
        return EXIT_CHECK
    except (OSError, ValueError) as exc:
        sys.stderr.write(f"configuration error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
