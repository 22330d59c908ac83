"""
sectorix command line.

    python -m sectorix angle --a A.json [--grid 10000]
    python -m sectorix gen --kind sector --n 4 --alpha pi/4 --seed 7 --out A.json
    python -m sectorix mean --a A.json --b B.json --v 0.3 --kind geometric
    python -m sectorix check --id F6 --a A.json --b B.json --k 2
    python -m sectorix counterexample --id sv
    python -m sectorix sweep --config smoke --ids F6,TXR --trials 50 --seed 7
    python -m sectorix suite --paper --out report.json

Exit codes: 0 everything holds, 1 a genuine violation, 2 bad input or config.
"""

import argparse
import json
import logging
import sys
from typing import Any, Dict, List, Optional

from pydantic import ValidationError

from . import cmat
from .catalogue import get_entry
from .checks import check_catalogue_consistency, evaluate
from .config import DEFAULT_SEED, DEFAULT_TOL, eigen_method, load_sweep_config, parse_angle
from .counterexamples import run_counterexamples
from .errors import ConfigError, SectorixError, UnknownCheckError
from .instances import Instance
from .logging_setup import configure_logging
from .means import MeanKind, QuadControls, mean
from .posmap import MapDescriptor, identity_map, read_map
from .report import FORMATS, render, render_counterexamples, render_results, write_report
from .sector import (
    SectorGenSpec,
    gen_hpd,
    gen_sector,
    is_accretive,
    nr_boundary,
    sector_angle,
    sector_angle_grid,
)
from .sweep import sweep

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INPUT = 2

PAIR_FAMILIES = ("any_pair", "psd_pair", "sector_pair", "hpd_ordered", "scalar")


class UsageError(ConfigError):
    """Flag combination the subcommand cannot use."""


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w") as f:
            f.write(text)
        logger.info(f"Wrote {out}")
    else:
        sys.stdout.write(text)


def _float_list(text: Optional[str]) -> Optional[List[float]]:
    if text is None:
        return None
    return [float(part) for part in text.split(",") if part.strip()]


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_angle(args: argparse.Namespace) -> int:
    A = cmat.read_matrix(args.a)
    check = is_accretive(A)
    payload: Dict[str, Any] = {"accretive": check.holds, "re_margin": check.margin}
    if check.holds:
        payload["alpha"] = sector_angle(A)
        if args.grid:
            payload["alpha_grid"] = sector_angle_grid(A, args.grid)
            payload["grid_gap"] = payload["alpha"] - payload["alpha_grid"]
    if args.boundary:
        points = nr_boundary(A, args.boundary)
        payload["boundary"] = [[float(z.real), float(z.imag)] for z in points]
    if args.format == "json":
        _emit(json.dumps(payload, indent=2) + "\n", args.out)
    else:
        lines = [f"{key}: {value:.6g}" if isinstance(value, float) else f"{key}: {value}"
                 for key, value in payload.items() if key != "boundary"]
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_gen(args: argparse.Namespace) -> int:
    if not args.out:
        raise UsageError("gen needs --out")
    if args.kind == "sector":
        if args.alpha is None:
            raise UsageError("gen --kind sector needs --alpha")
        spec = SectorGenSpec(n=args.n, alpha_max=parse_angle(args.alpha), cond_x=args.cond_x,
                             seed=args.seed, force_extremal=not args.no_extremal)
        cert = gen_sector(spec)
        cmat.write_matrix(cert.A, args.out)
        logger.info(f"certified alpha={cert.alpha:.12g} m={cert.m:.6g} M={cert.M:.6g}")
    elif args.kind == "hpd":
        cmat.write_matrix(gen_hpd(args.n, args.m, args.M, args.seed), args.out)
    else:
        descriptor = MapDescriptor(kind=args.map_kind, n=args.n, l=args.l or args.n, k=args.arity,
                                   seed=args.seed)
        descriptor.build()
        with open(args.out, "w") as f:
            f.write(descriptor.model_dump_json() + "\n")
        logger.info(f"Wrote {descriptor.kind.value} map descriptor to {args.out}")
    return EXIT_OK


def cmd_mean(args: argparse.Namespace) -> int:
    A = cmat.read_matrix(args.a)
    B = cmat.read_matrix(args.b)
    quad = QuadControls(scheme=args.scheme)
    result = mean(MeanKind(args.kind), A, B, args.v, quad)
    if args.out:
        cmat.write_matrix(result, args.out)
    else:
        sys.stdout.write(json.dumps(cmat.to_json_dict(result)) + "\n")
    return EXIT_OK


def _check_params(args: argparse.Namespace) -> Dict[str, Any]:
    params: Dict[str, Any] = {}
    for name in ("k", "v", "r", "p", "f"):
        value = getattr(args, name)
        if value is not None:
            params[name] = value
    return params


def cmd_check(args: argparse.Namespace) -> int:
    entry = get_entry(args.id)
    mats = [cmat.read_matrix(path) for path in [args.a, args.b, *args.extra] if path]
    if not mats:
        raise UsageError("check needs --a")
    if entry.family in PAIR_FAMILIES and len(mats) != 2:
        raise UsageError(f"check {entry.id} needs --a and --b")
    if len({A.shape for A in mats}) != 1:
        raise UsageError("all operands must have the same size")

    if args.map:
        phi = read_map(args.map)
    elif len(mats) == 1 and "normalized" in entry.hypotheses:
        phi = identity_map(mats[0].shape[0])
    else:
        phi = None

    inst = Instance.from_matrices(mats, phi=phi, witness="input")
    if args.alpha is not None:
        inst = inst.with_alpha(parse_angle(args.alpha))
    results = evaluate(entry.id, inst, _check_params(args), args.tol)

    for result in results:
        if result.status == "vacuous":
            logger.warning(f"{result.id} is vacuous on this input: {result.reason}")
        elif result.status == "finding":
            logger.warning(f"conjectural {result.id} fails on this input (slack {result.slack:.3e})")
    _emit(render_results(results, args.format), args.out)
    return EXIT_VIOLATION if any(r.status == "fail" for r in results) else EXIT_OK


def cmd_counterexample(args: argparse.Namespace) -> int:
    items = run_counterexamples([args.id])
    _emit(render_counterexamples(items, args.format), args.out)
    return EXIT_OK if all(c.violated for c in items) else EXIT_VIOLATION


def _sweep_overrides(args: argparse.Namespace) -> Dict[str, Any]:
    return {
        "ids": args.ids,
        "n_values": args.n,
        "alphas": args.alphas,
        "v_grid": _float_list(args.v_grid),
        "k_policy": args.k_policy,
        "trials": args.trials,
        "seed": args.seed,
        "tol": args.tol,
        "workers": args.workers,
        "nominal_alpha": True if args.nominal_alpha else None,
    }


def cmd_sweep(args: argparse.Namespace) -> int:
    config = load_sweep_config(args.config, _sweep_overrides(args))
    report = sweep(config)
    if args.out:
        write_report(report, args.out, args.format)
    else:
        sys.stdout.write(render(report, args.format))
    return EXIT_VIOLATION if report.has_failures else EXIT_OK


def cmd_suite(args: argparse.Namespace) -> int:
    if not args.paper:
        raise UsageError("suite currently supports --paper only")
    counterexamples = run_counterexamples(["all"])
    config = load_sweep_config("paper_suite", _sweep_overrides(args))
    report = sweep(config)
    report.counterexamples = [c.to_dict() for c in counterexamples]
    write_report(report, args.out, "json")
    sys.stdout.write(render(report, "human"))
    return EXIT_VIOLATION if report.has_failures else EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _add_sweep_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--ids', help='Comma-separated catalogue ids or "all"')
    parser.add_argument('--n', help='Matrix sizes, e.g. "2..6" or "2,4"')
    parser.add_argument('--alphas', help='Comma-separated angles, e.g. "0,pi/6,pi/4"')
    parser.add_argument('--v-grid', help='Comma-separated weights in [0, 1]')
    parser.add_argument('--k-policy', choices=['all', 'max'])
    parser.add_argument('--trials', type=int)
    parser.add_argument('--seed', type=int)
    parser.add_argument('--tol', type=float)
    parser.add_argument('--workers', type=int, help='Worker processes (default: SECTORIX_THREADS)')
    parser.add_argument('--nominal-alpha', action='store_true',
                        help='Evaluate at the configured alpha instead of the certified one')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='sectorix', description='Sector matrix inequality toolkit')
    parser.add_argument('--log-level', help='DEBUG, INFO, WARNING or ERROR (default: SECTORIX_LOG_LEVEL)')
    parser.add_argument('--log-file', help='Also write logs to this file')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('angle', help='Certified sector angle of a matrix')
    p.add_argument('--a', required=True, help='Matrix JSON file')
    p.add_argument('--grid', type=int, help='Cross-check against a numerical-range grid of this size')
    p.add_argument('--boundary', type=int, help='Also output this many numerical-range boundary points')
    p.add_argument('--format', choices=['json', 'human'], default='human')
    p.add_argument('--out')
    p.set_defaults(func=cmd_angle)

    p = sub.add_parser('gen', help='Generate a sector matrix, HPD matrix or positive map')
    p.add_argument('--kind', choices=['sector', 'hpd', 'map'], default='sector')
    p.add_argument('--n', type=int, required=True)
    p.add_argument('--alpha', help='Maximal angle, e.g. pi/4')
    p.add_argument('--cond-x', type=float, default=10.0)
    p.add_argument('--no-extremal', action='store_true', help='Do not pin one angle to +/-alpha')
    p.add_argument('--m', type=float, default=1.0)
    p.add_argument('--M', type=float, default=10.0)
    p.add_argument('--map-kind', choices=['compression', 'kraus', 'trace', 'tensor_compression'],
                   default='compression')
    p.add_argument('--l', type=int)
    p.add_argument('--arity', type=int, default=1)
    p.add_argument('--seed', type=int, default=DEFAULT_SEED)
    p.add_argument('--out')
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser('mean', help='Weighted mean of two accretive matrices')
    p.add_argument('--a', required=True)
    p.add_argument('--b', required=True)
    p.add_argument('--v', type=float, default=0.5)
    p.add_argument('--kind', choices=[k.value for k in MeanKind], default='geometric')
    p.add_argument('--scheme', choices=['sinh', 'exp'], default='sinh')
    p.add_argument('--out')
    p.set_defaults(func=cmd_mean)

    p = sub.add_parser('check', help='Evaluate one catalogue entry on given matrices')
    p.add_argument('--id', required=True)
    p.add_argument('--a')
    p.add_argument('--b')
    p.add_argument('--extra', action='append', default=[], help='Further operands for tuple checks')
    p.add_argument('--map', help='Positive map descriptor JSON')
    p.add_argument('--k', type=int)
    p.add_argument('--v', type=float)
    p.add_argument('--r', type=float)
    p.add_argument('--p', type=float)
    p.add_argument('--f', help='Concave function: t, sqrt, t/(1+t), log1p')
    p.add_argument('--alpha', help='Evaluate at this angle instead of the certified one')
    p.add_argument('--tol', type=float, default=DEFAULT_TOL)
    p.add_argument('--format', choices=FORMATS, default='human')
    p.add_argument('--out')
    p.set_defaults(func=cmd_check)

    p = sub.add_parser('counterexample', help='Reproduce the naive-inequality counter-examples')
    p.add_argument('--id', choices=['sv', 'det', 'all'], default='all')
    p.add_argument('--format', choices=FORMATS, default='human')
    p.add_argument('--out')
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser('sweep', help='Property sweep over the catalogue')
    p.add_argument('--config', help='Preset name under config/ or a YAML path')
    _add_sweep_flags(p)
    p.add_argument('--format', choices=FORMATS, default='json')
    p.add_argument('--out')
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser('suite', help='Counter-examples plus the full catalogue sweep')
    p.add_argument('--paper', action='store_true', help='Run the reference suite')
    _add_sweep_flags(p)
    p.add_argument('--out', default='report.json')
    p.set_defaults(func=cmd_suite)

    return parser


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    configure_logging(args.log_level, args.log_file)
    try:
        cmat.set_eigen_method(eigen_method())
        check_catalogue_consistency()
        return args.func(args)
    except (ConfigError, UnknownCheckError) as exc:
        logger.error(str(exc))
        return EXIT_INPUT
    except ValidationError as exc:
        first = exc.errors()[0]
        field = ".".join(str(p) for p in first.get("loc", ()))
        logger.error(f"invalid value for '{field}': {first.get('msg')}")
        return EXIT_INPUT
    except SectorixError as exc:
        logger.error(f"{type(exc).__name__}: {exc}")
        return EXIT_INPUT
    except OSError as exc:
        logger.error(f"{exc.filename or ''}: {exc.strerror}")
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
