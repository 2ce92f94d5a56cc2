"""Command-line interface: ``cgroups <command> ...``.

Caps come from flags, then ``CGROUPS_*`` environment variables, then defaults.
Exit codes: 0 success, 1 verification failure, 2 usage or input error,
3 a resource cap was exceeded.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from . import export
from .alphac import AlphaCParams, alpha_c
from .config import ENV_PREFIX, Limits
from .errors import CapExceeded, CGroupsError, VerificationFailure
from .group import abelian_product, cyclic, dihedral, direct_product, load
from .isomorphism import is_isomorphic
from .presentation import coset_enumerate, parse_presentation
from .search import alpha_c_orders, enumerate_alpha_c, invariant_report, run_suite, tsv

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


@dataclass
class CliConfig:
    limits: Limits
    output_format: str
    jobs: int


def _env_default(name, fallback, cast=str):
    raw = os.environ.get(ENV_PREFIX + name)
    return cast(raw) if raw is not None else fallback


def resolve_config(args) -> CliConfig:
    limits = Limits.from_env().with_overrides(
        order_cap=args.order_cap,
        iso_cap=args.iso_cap,
        max_cosets=args.max_cosets,
        rank_k_cap=args.rank_k_cap,
        seed=args.seed,
    )
    fmt = args.output_format or _env_default("FORMAT", "json")
    if fmt not in ("json", "tsv"):
        raise ValueError(f"unknown output format {fmt!r}")
    jobs = args.jobs if args.jobs is not None else _env_default("JOBS", 1, int)
    return CliConfig(limits, fmt, max(1, jobs))


def _emit(text: str, out: str | None = None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_construct(args, cfg: CliConfig) -> int:
    limits = cfg.limits
    kind = args.kind
    if kind == "cyclic":
        g = cyclic(args.n, limits)
    elif kind == "dihedral":
        g = dihedral(args.n, limits)
    elif kind == "abelian":
        g = abelian_product([int(v) for v in args.ns.split(",")], limits)
    elif kind == "alpha-c":
        g = alpha_c(AlphaCParams(args.n1, args.n2, args.n3), limits)
    elif kind == "product":
        g = direct_product(load(args.left, limits), load(args.right, limits), limits)
    elif kind == "presentation":
        text = Path(args.file).read_text() if args.file else args.text
        if not text:
            raise ValueError("presentation needs --file or --text")
        g = coset_enumerate(parse_presentation(text.strip()), limits=limits)
    elif kind == "table":
        g = export.parse_table_text(Path(args.file).read_text(), limits)
    else:  # pragma: no cover - argparse restricts choices
        raise ValueError(kind)
    _emit(g.dumps() + "\n", args.out)
    return EXIT_OK


def cmd_invariants(args, cfg: CliConfig) -> int:
    g = load(args.file, cfg.limits)
    report = invariant_report(g, args.id or Path(args.file).stem, cfg.limits)
    if cfg.output_format == "tsv":
        _emit(tsv([report]))
    else:
        _emit(json.dumps(report.to_dict(), indent=2) + "\n")
    return EXIT_OK


def cmd_verify(args, cfg: CliConfig) -> int:
    result = run_suite(args.suite, cfg.limits, max_order=args.max_order, p=args.p,
                       k_max=args.k_max, jobs=cfg.jobs)
    payload = result.to_dict()
    payload["seed"] = cfg.limits.seed
    if args.out:
        Path(args.out).write_text(json.dumps(payload, indent=2) + "\n")
    if cfg.output_format == "tsv":
        _emit(tsv(result.reports))
    failures = [c for c in result.checks if not c.passed]
    for c in failures:
        print(f"FAIL  {c.claim}  [{c.group_id}]  {c.detail}", file=sys.stderr)
    print(f"{args.suite}: {len(result.checks) - len(failures)}/{len(result.checks)} checks passed "
          f"in {result.seconds:.1f}s", file=sys.stderr)
    return EXIT_OK if result.passed else EXIT_VERIFY


def cmd_search(args, cfg: CliConfig) -> int:
    reports = []
    for params in enumerate_alpha_c(args.max_order):
        g = alpha_c(params, cfg.limits)
        reports.append(invariant_report(g, str(params), cfg.limits))
    if cfg.output_format == "tsv":
        _emit(tsv(reports))
    else:
        payload = {"groups": [r.to_dict() for r in reports], "orders": alpha_c_orders(args.max_order)}
        _emit(json.dumps(payload, indent=2) + "\n")
    return EXIT_OK


def cmd_iso(args, cfg: CliConfig) -> int:
    g, h = load(args.left, cfg.limits), load(args.right, cfg.limits)
    result = is_isomorphic(g, h, cfg.limits)
    if cfg.output_format == "tsv":
        _emit(f"isomorphic\t{str(result.isomorphic).lower()}\n")
    else:
        _emit(json.dumps(result.to_dict()) + "\n")
    return EXIT_OK


def cmd_export(args, cfg: CliConfig) -> int:
    g = load(args.file, cfg.limits)
    text = export.table_text(g) if args.style == "table" else export.permutation_text(g, cfg.limits)
    _emit(text, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--order-cap", type=int)
    common.add_argument("--iso-cap", type=int)
    common.add_argument("--max-cosets", type=int)
    common.add_argument("--rank-k-cap", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--format", dest="output_format", choices=["json", "tsv"])
    common.add_argument("--jobs", type=int)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="cgroups", description="Finite groups, their ranks, and C-groups.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", parents=[common], help="build a group and write its JSON")
    p.add_argument("kind", choices=["cyclic", "dihedral", "abelian", "alpha-c", "product", "presentation", "table"])
    p.add_argument("--n", type=int)
    p.add_argument("--ns", help="comma-separated cyclic orders, e.g. 2,4,4")
    p.add_argument("--n1", type=int)
    p.add_argument("--n2", type=int)
    p.add_argument("--n3", type=int)
    p.add_argument("--left")
    p.add_argument("--right")
    p.add_argument("--file")
    p.add_argument("--text")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("invariants", parents=[common], help="invariant report for a group file")
    p.add_argument("file")
    p.add_argument("--id")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("verify", parents=[common], help="run a claim verification suite")
    p.add_argument("suite", choices=["paper", "alpha-c", "p5", "multiple", "corpus"])
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--k-max", type=int, default=4)
    p.add_argument("--max-order", type=int, default=512)
    p.add_argument("-o", "--out", help="write the full JSON report here")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("search", parents=[common], help="alpha-C groups up to an order, with reports")
    p.add_argument("--max-order", type=int, required=True)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("iso", parents=[common], help="isomorphism test between two group files")
    p.add_argument("left")
    p.add_argument("right")
    p.set_defaults(func=cmd_iso)

    p = sub.add_parser("export", parents=[common], help="text export for computer algebra systems")
    p.add_argument("file")
    p.add_argument("--style", choices=["table", "perm"], default="table")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_export)
    return parser


def _check_construct_args(parser, args) -> None:
    needed = {
        "cyclic": ["n"], "dihedral": ["n"], "abelian": ["ns"], "alpha-c": ["n1", "n2", "n3"],
        "product": ["left", "right"], "table": ["file"],
    }
    missing = [f"--{name}" for name in needed.get(args.kind, []) if getattr(args, name) is None]
    if missing:
        parser.error(f"construct {args.kind} needs {', '.join(missing)}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR, format="%(levelname)s %(message)s")
    if args.command == "construct":
        _check_construct_args(parser, args)
    try:
        cfg = resolve_config(args)
        return args.func(args, cfg)
    except VerificationFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (CGroupsError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
