"""Command-line front end: ``shearwave <subcommand> --config run.json ...``.

Exit codes: 0 success, 1 failed validation checks, 2 invalid input or
configuration, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import config as cfgmod
from . import csvio, dispersion, sturm, wavefield
from .errors import DomainError, NumericError, ShearwaveError
from .laminar import LaminarFlow, sample

EXIT_FAILED_CHECKS = 1
EXIT_CONFIG = 2
EXIT_NUMERIC = 3


def _threads() -> int:
    try:
        n = int(os.environ.get("SHEARWAVE_THREADS", "1"))
    except ValueError:
        raise DomainError("SHEARWAVE_THREADS must be an integer") from None
    return max(1, n)


def _pmap(func, items):
    """Order-preserving map, parallel when SHEARWAVE_THREADS > 1."""
    items = list(items)
    n = _threads()
    if n == 1 or len(items) < 2:
        return [func(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(func, items))


def _emit(args, cfg, filename, columns, rows):
    out = args.out or (cfg.output_dir if cfg is not None else None)
    digest = cfg.digest if cfg is not None else "none"
    if out is None:
        sys.stdout.write(csvio.render(columns, rows, digest))
        return
    path = Path(out)
    if path.suffix.lower() != ".csv":
        path = path / filename
    csvio.write(path, columns, rows, digest)


def _out_dir(args, cfg) -> Path:
    out = args.out or (cfg.output_dir if cfg is not None else None) or "."
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _need_config(args):
    if not args.config:
        raise DomainError(f"{args.command}: --config is required")
    return cfgmod.load(args.config)


# -- subcommands --------------------------------------------------------------


def cmd_laminar(args):
    cfg = _need_config(args)
    lam = args.lam if args.lam is not None else sturm.lambda0(cfg.profile, cfg.constants)
    flow = LaminarFlow(cfg.profile, lam)
    p = sample(flow, args.samples)
    rows = zip(p, cfg.profile.big_gamma(p), flow.b(p), flow.height(p))
    _emit(args, cfg, "laminar.csv", ["p", "Gamma", "b", "H"], rows)


def cmd_lambda0(args):
    cfg = _need_config(args)
    print(f"{sturm.lambda0(cfg.profile, cfg.constants):.10f}")


def cmd_xi(args):
    cfg = _need_config(args)
    lam = args.lam if args.lam is not None else 1.5 * sturm.lambda0(cfg.profile, cfg.constants)
    mus = np.linspace(args.mu_min, args.mu_max, args.samples)

    def row(mu):
        xl = sturm.xi_lambda(cfg.profile, cfg.constants, lam, mu, steps=cfg.steps)
        return (
            mu,
            sturm.xi(cfg.profile, cfg.constants, lam, mu, steps=cfg.steps),
            sturm.xi_mu(cfg.profile, cfg.constants, lam, mu, steps=cfg.steps),
            xl.ode,
        )

    _emit(args, cfg, "xi.csv", ["mu", "xi", "xi_mu", "xi_lambda"], _pmap(row, mus))


def cmd_mu_curve(args):
    cfg = _need_config(args)
    lam0 = sturm.lambda0(cfg.profile, cfg.constants)
    lam_max = args.lam if args.lam is not None else 4.0 * lam0
    if lam_max <= lam0:
        raise DomainError(f"--lambda must exceed lambda0 = {lam0}")
    lams = np.linspace(lam0, lam_max, args.samples)

    def row(lam):
        return lam, sturm.mu_of_lambda(cfg.profile, cfg.constants, lam, steps=cfg.steps, lam0=lam0)

    _emit(args, cfg, "mu_curve.csv", ["lambda", "mu"], _pmap(row, lams))


def cmd_bifurcate(args):
    cfg = _need_config(args)
    n = sturm.min_period_divisor(cfg.profile, cfg.constants, steps=cfg.steps)

    def point(k):
        return sturm.bifurcation_lambda(cfg.profile, cfg.constants, k, n, steps=cfg.steps)

    pts = _pmap(point, range(1, args.k_max + 1))
    rows = [(pt.k, pt.n, pt.lambda_k, int(pt.at_lambda0)) for pt in pts]
    if args.out is None and cfg.output_dir is None:
        _emit(args, cfg, "bifurcation.csv", ["k", "n", "lambda_k", "at_lambda0"], rows)
        return
    out = _out_dir(args, cfg)
    csvio.write(out / "bifurcation.csv", ["k", "n", "lambda_k", "at_lambda0"], rows, cfg.digest)
    for pt in pts:
        csvio.write(
            out / f"eigenfunction_k{pt.k}.csv",
            ["p", "v", "v_p"],
            zip(pt.p, pt.eigenfunction, pt.eigen_slope),
            cfg.digest,
        )


def cmd_dispersion(args):
    inp = dispersion.DispersionInput(args.d1, args.d2, args.gamma1, args.gamma2, args.g, args.sigma, args.k)
    roots = dispersion.solve_dispersion(inp, physical=args.physical)
    print(json.dumps([float(r) for r in roots]))


def cmd_symbol(args):
    if args.config:
        cfg = cfgmod.load(args.config)
        lam = args.lam if args.lam is not None else sturm.lambda0(cfg.profile, cfg.constants)
        inp = dispersion.MultiplierSymbolInput.from_flow(LaminarFlow(cfg.profile, lam))
    else:
        cfg = None
        inp = dispersion.MultiplierSymbolInput(args.a_p1, args.gamma1, args.gamma2, args.theta1, args.theta2)
    k, lam_k, kl, diff = dispersion.symbol_table(inp, args.k_max)
    rows = zip(k.astype(int).tolist(), lam_k, kl, diff)
    _emit(args, cfg, "symbol.csv", ["k", "lambda_k", "k*lambda_k", "k2*diff"], rows)


def cmd_field(args):
    cfg = _need_config(args)
    n = sturm.min_period_divisor(cfg.profile, cfg.constants, steps=cfg.steps)
    pt = sturm.bifurcation_lambda(cfg.profile, cfg.constants, args.k, n, steps=cfg.steps)
    fld = wavefield.first_order_height(pt, args.amplitude, nq=args.nq, np_per_layer=args.np)
    hp = wavefield.h_p_full(fld)
    hq = wavefield.h_q_grid(fld)
    out = _out_dir(args, cfg)
    nq, npp = fld.h.shape
    rows = (
        (fld.q[j], fld.p[i], fld.h[j, i], hp[j, i], hq[j, i])
        for j in range(nq)
        for i in range(npp)
    )
    csvio.write(out / "field.csv", ["q", "p", "h", "h_p", "h_q"], rows, cfg.digest)
    csvio.write(out / "surface.csv", ["q", "eta"], zip(fld.q, fld.h[:, -1] - fld.depth), cfg.digest)
    if args.svg:
        from .plotting import render_field_svg

        render_field_svg(fld, out / "field.svg")


def cmd_validate(args):
    from .validate import run_suite

    paths = [args.config] if args.config else cfgmod.shipped_configs()
    failed = 0
    out = Path(args.out) if args.out else None
    for path in paths:
        cfg = cfgmod.load(path)
        checks = run_suite(cfg)
        label = cfg.name or Path(path).stem
        for c in checks:
            status = "PASS" if c.passed else "FAIL"
            print(f"{status} {label} {c.name} value={c.value:.3e} tol={c.tolerance:.1e}")
        failed += sum(not c.passed for c in checks)
        if out is not None:
            csvio.write(
                out / f"validate_{label}.csv",
                ["check", "value", "tolerance", "passed"],
                [(c.name, c.value, c.tolerance, c.passed) for c in checks],
                cfg.digest,
            )
    return EXIT_FAILED_CHECKS if failed else 0


# -- parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="shearwave", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        sp = sub.add_parser(name, help=help_text, allow_abbrev=False)
        sp.set_defaults(func=func)
        sp.add_argument("--config", help="run configuration (JSON)")
        sp.add_argument("--out", help="output directory or .csv file (default: stdout)")
        return sp

    sp = add("laminar", cmd_laminar, "laminar b(p), H(p) table")
    sp.add_argument("--lambda", dest="lam", type=float, help="default: lambda0")
    sp.add_argument("--samples", type=int, default=100, help="intervals per layer")

    add("lambda0", cmd_lambda0, "print the smallest admissible lambda")

    sp = add("xi", cmd_xi, "xi and its partial derivatives along mu")
    sp.add_argument("--lambda", dest="lam", type=float, help="default: 1.5 lambda0")
    sp.add_argument("--mu-min", type=float, default=0.0)
    sp.add_argument("--mu-max", type=float, default=10.0)
    sp.add_argument("--samples", type=int, default=21)

    sp = add("mu-curve", cmd_mu_curve, "the zero curve mu(lambda)")
    sp.add_argument("--lambda", dest="lam", type=float, help="largest lambda (default: 4 lambda0)")
    sp.add_argument("--samples", type=int, default=21)

    sp = add("bifurcate", cmd_bifurcate, "bifurcation points and eigenfunctions")
    sp.add_argument("--k-max", type=int, default=3)

    sp = add("dispersion", cmd_dispersion, "roots of the two-layer dispersion relation")
    for name in ("d1", "d2", "gamma1", "gamma2", "g", "k"):
        sp.add_argument(f"--{name}", type=float, required=True)
    sp.add_argument("--sigma", type=float, default=0.0)
    sp.add_argument("--physical", action="store_true", help="drop roots with b <= 0 somewhere")

    sp = add("symbol", cmd_symbol, "interface multiplier table")
    sp.add_argument("--k-max", type=int, default=100)
    sp.add_argument("--lambda", dest="lam", type=float, help="with --config; default lambda0")
    sp.add_argument("--a-p1", type=float, default=1.0)
    sp.add_argument("--gamma1", type=float, default=1.0)
    sp.add_argument("--gamma2", type=float, default=0.0)
    sp.add_argument("--theta1", type=float, default=1.0)
    sp.add_argument("--theta2", type=float, default=1.0)

    sp = add("field", cmd_field, "first-order wave field CSV (and optional SVG)")
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--amplitude", type=float, required=True)
    sp.add_argument("--nq", type=int, default=wavefield.DEFAULT_NQ)
    sp.add_argument("--np", type=int, default=wavefield.DEFAULT_NP)
    sp.add_argument("--svg", action="store_true")

    add("validate", cmd_validate, "run the invariant suite (default: shipped configs)")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        status = args.func(args)
    except DomainError as exc:
        field = getattr(exc, "field", None)
        suffix = f" [field: {field}]" if field else ""
        print(f"error: {exc}{suffix}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericError as exc:
        print(
            f"numeric error in {exc.operation or args.command}: {exc} params={exc.params or {}}",
            file=sys.stderr,
        )
        return EXIT_NUMERIC
    except (FloatingPointError, ZeroDivisionError, OverflowError, ShearwaveError) as exc:
        print(f"numeric error in {args.command}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return int(status or 0)


if __name__ == "__main__":
    sys.exit(main())
