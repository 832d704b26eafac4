"""Command line front end.

Every artifact carries the tool version, the echoed configuration and the
seed.  Wall-clock timings and the worker count are left out unless
``--timings`` is given, so identical runs produce identical bytes.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

import mpmath

from . import __version__
from .algebra import algebra_to_dict
from .asymptotics import AsymptoticParams, conjecture_report, regev_beckner_lhs, regev_beckner_rhs
from .builders import build
from .codim import codim_sequence, records_to_csv
from .errors import PicodimError
from .kemer import admissible_chains, basicness_check, exp_gz
from .linalg import format_scalar
from .paths import (
    bounds_to_csv,
    enumerate_path_structures,
    enumerate_symbols,
    path_count_bound,
    upper_bound_series,
    acal_s,
)
from .structure import wedderburn_data

TOOL = "picodim"


def _default_workers() -> int:
    try:
        return max(1, int(os.environ.get("PICODIM_WORKERS", "1")))
    except ValueError:
        return 1


def _config(args) -> dict:
    skip = {"func", "workers", "out", "timings"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _envelope(args, result) -> str:
    doc = {"tool": {"name": TOOL, "version": __version__}, "config": _config(args),
           "seed": getattr(args, "seed", None), "result": result}
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def _csv_header(args) -> str:
    cfg = json.dumps(_config(args), sort_keys=True)
    return f"# {TOOL} {__version__}\n# config: {cfg}\n# seed: {getattr(args, 'seed', None)}\n"


def _emit(args, text: str):
    if getattr(args, "out", None):
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _algebra(args):
    if args.builder:
        return build(args.builder)
    if args.file:
        return build("file:" + args.file)
    raise PicodimError("give --builder or --file")


# -- subcommands --------------------------------------------------------

def cmd_algebra(args):
    a = _algebra(args)
    if args.action == "build":
        doc = algebra_to_dict(a)
        doc["provenance"] = {"tool": {"name": TOOL, "version": __version__},
                             "config": _config(args), "seed": args.seed}
        _emit(args, json.dumps(doc, indent=1) + "\n")
        return
    wd = wedderburn_data(a, seed=args.seed)
    info = {
        "name": a.name,
        "dim": a.dim,
        "basis": list(a.basis_labels),
        "associative": a.is_associative(),
        "unit": None if a.unit is None else [format_scalar(c) for c in a.unit],
        "radical_dim": wd.radical.dim,
        "q": wd.q,
        "block_dims": list(wd.block_dims),
    }
    _emit(args, _envelope(args, info))


def cmd_invariants(args):
    a = _algebra(args)
    wd = wedderburn_data(a, seed=args.seed)
    info = {
        "algebra": a.name,
        "dim": a.dim,
        "radical": [[format_scalar(c) for c in row] for row in wd.radical.rows],
        "wedderburn": {
            "q": wd.q,
            "block_dims": list(wd.block_dims),
            "dim_ss": wd.dim_ss,
            "nildeg": wd.nildeg,
            "component_idempotents": [[format_scalar(c) for c in e] for e in wd.component_idempotents],
        },
        "par": [wd.par.dim_ss, wd.par.s],
        "exp": exp_gz(a, wd),
        "admissible_chains": [list(c) for c in admissible_chains(a, wd)],
    }
    _emit(args, _envelope(args, info))


def cmd_codim(args):
    a = _algebra(args)
    seq = codim_sequence(a, args.n, method=args.method, seed=args.seed,
                         workers=args.workers, strategy=args.strategy)
    if args.format == "csv":
        _emit(args, _csv_header(args) + records_to_csv(seq.records, timing=args.timings))
        return
    result = {
        "algebra": a.name,
        "records": [r.to_dict(args.timings) for r in seq.records],
        "nondecreasing_from": seq.nondecreasing_from,
        "eventually_nondecreasing": seq.eventually_nondecreasing,
    }
    _emit(args, _envelope(args, result))


def cmd_kemer(args):
    a = _algebra(args)
    res = basicness_check(a, nu=args.nu, budget=args.budget, seed=args.seed,
                          exhaustive_extra_vars=args.exhaustive)
    out = res.estimate.to_dict(a)
    out["basicness"] = {"status": res.status, "details": res.details}
    _emit(args, _envelope(args, out))


def cmd_conjecture(args):
    a = _algebra(args)
    rep = conjecture_report(a, args.n, seed=args.seed, workers=args.workers,
                            nu=args.nu, budget=args.budget)
    if args.format == "csv":
        _emit(args, _csv_header(args) + rep.to_csv())
        return
    _emit(args, _envelope(args, rep.to_dict(args.timings)))


def cmd_paths(args):
    a = _algebra(args)
    s = acal_s(a) if args.s is None else args.s
    symbols = enumerate_symbols(a)
    structures = enumerate_path_structures(a, s, extended=args.extended)
    wd = wedderburn_data(a, seed=args.seed)
    rows = []
    for n in range(1, args.n + 1):
        series = upper_bound_series(a, n, s=s)
        norm = Fraction(series) / (Fraction(wd.dim_ss) ** n)
        t = Fraction(wd.q - wd.dim_ss, 2) + s
        ratio = float(norm) / (n ** float(t))
        rows.append((n, series, None, ratio))
    if args.format == "csv":
        _emit(args, _csv_header(args) + bounds_to_csv(rows))
        return
    result = {
        "algebra": a.name,
        "symb_count": len(symbols),
        "s": s,
        "structures": [st.to_dict(a) for st in structures],
        "structure_count": len(structures),
        "path_count_bound": path_count_bound(len(symbols), s),
        "upper_bound_series": [[n, series] for n, series, _, _ in rows],
        "normalized": [[n, float(f"{r:.12g}")] for n, _, _, r in rows],
        "constant": 1,
    }
    _emit(args, _envelope(args, result))


def _floats(text):
    return tuple(Fraction(t) for t in text.split(","))


def cmd_rb(args):
    params = AsymptoticParams(_floats(args.k), _floats(args.r))
    ns = [int(t) for t in args.n.split(",")]
    lines = [_csv_header(args), "n,lhs,rhs,ratio\n"]
    with mpmath.workprec(args.prec):
        for n in ns:
            lhs = regev_beckner_lhs(params, n, args.prec)
            rhs = regev_beckner_rhs(params, n, args.prec)
            lines.append(f"{n},{mpmath.nstr(lhs, 25)},{mpmath.nstr(rhs, 25)},{mpmath.nstr(lhs / rhs, 25)}\n")
    _emit(args, "".join(lines))


# -- parser -------------------------------------------------------------

def _source(p):
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--builder", help="mat:d | ut:d1,d2,... | assoc:blocks;r;u | prod:A×B")
    g.add_argument("--file", help="algebra JSON file")


def _common(p, workers=False):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write the artifact here instead of stdout")
    if workers:
        p.add_argument("--workers", type=int, default=_default_workers(),
                       help="worker processes (default from PICODIM_WORKERS)")
        p.add_argument("--timings", action="store_true", help="include wall-clock seconds")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog=TOOL, description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"{TOOL} {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("algebra", help="build or inspect an algebra")
    p.add_argument("action", choices=["build", "inspect"])
    _source(p)
    _common(p)
    p.set_defaults(func=cmd_algebra)

    p = sub.add_parser("invariants", help="radical, Wedderburn data, Par and exponent")
    _source(p)
    _common(p)
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("codim", help="codimension sequence c_1..c_N")
    _source(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--method", choices=["modular", "exact"], default="modular")
    p.add_argument("--strategy", choices=["spin", "rows"], default="spin")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    _common(p, workers=True)
    p.set_defaults(func=cmd_codim)

    p = sub.add_parser("kemer", help="Kemer index estimate and basicness")
    _source(p)
    p.add_argument("--nu", type=int, default=2)
    p.add_argument("--budget", type=int, default=2000)
    p.add_argument("--exhaustive", type=int, default=2, help="extra variables in exhaustive mode")
    _common(p)
    p.set_defaults(func=cmd_kemer)

    p = sub.add_parser("conjecture", help="predicted t against computed codimensions")
    _source(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--nu", type=int, default=2)
    p.add_argument("--budget", type=int, default=2000)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    _common(p, workers=True)
    p.set_defaults(func=cmd_conjecture)

    p = sub.add_parser("paths", help="path structures and upper-bound series")
    _source(p)
    p.add_argument("--s", type=int, default=None, help="radical words allowed (default u)")
    p.add_argument("--extended", action="store_true", help="include edge-radical structures")
    p.add_argument("--n", type=int, default=6)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    _common(p)
    p.set_defaults(func=cmd_paths)

    p = sub.add_parser("rb", help="Regev-Beckner sum against its asymptotic")
    p.add_argument("--k", required=True, help="comma separated positive k_i")
    p.add_argument("--r", required=True, help="comma separated r_i")
    p.add_argument("--n", required=True, help="comma separated degrees")
    p.add_argument("--prec", type=int, default=128, help="working precision in bits")
    p.add_argument("--out")
    p.set_defaults(func=cmd_rb)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except PicodimError as exc:
        print(f"{TOOL}: error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # internal fault
        print(f"{TOOL}: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
