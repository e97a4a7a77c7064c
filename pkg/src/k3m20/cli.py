"""Command-line front end.

Subcommands expose the verification report, individual lattice and
group queries, the disjoint-conic search, and the closure cache.  Exit
codes: 0 on success with all checks passing, 1 when a report contains a
failed check, 2 for usage or input errors.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import catalog
from .lattice import (
    LatticeError,
    classify_invariant_cases,
    det_int,
    index_squared,
    isometry_group,
    orthogonal_complement,
    vectors_of_norm,
)
from .matgroup import (
    CACHE_ENV_VAR,
    MatGroup,
    MatGroupError,
    ProjectiveGroup,
    cache_entries,
    invariant_polynomials,
    load_group_spec,
    resolve_cache_dir,
)
from .polyring import sigma_format
from .projgeom import intersection_graph, max_disjoint_set, conic_strings
from .scenarios import GROUP_CAP, Context, run_all

L20_GRAM = "4,0,-2;0,4,-2;-2,-2,12"


class CliError(Exception):
    """Bad arguments or unreadable input; maps to exit code 2."""


def _parse_gram(text: str):
    try:
        rows = tuple(
            tuple(int(x) for x in row.split(","))
            for row in text.split(";"))
    except ValueError as exc:
        raise CliError(f"cannot parse Gram matrix {text!r}: {exc}")
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise CliError("Gram matrix must be square")
    if any(rows[i][j] != rows[j][i] for i in range(n) for j in range(n)):
        raise CliError("Gram matrix must be symmetric")
    return rows


def _parse_vector(text: str):
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise CliError(f"cannot parse vector {text!r}: {exc}")


def _fmt_rows(mat) -> str:
    return "[" + ", ".join(
        "[" + ", ".join(str(x) for x in row) + "]" for row in mat) + "]"


def cmd_report(args) -> int:
    report = run_all(profile=args.profile, cache_dir=args.cache_dir)
    if args.output == "json":
        print(report.to_json())
    else:
        print(report.to_text())
    return report.exit_code


def cmd_lattice(args) -> int:
    gram = _parse_gram(args.gram)
    if args.query == "det":
        print(det_int(gram))
    elif args.query == "short":
        vecs = sorted(vectors_of_norm(gram, args.norm))
        print(f"{len(vecs)} vectors of norm {args.norm}")
        for v in vecs:
            print("(" + ",".join(str(x) for x in v) + ")")
    elif args.query == "isometries":
        grp = isometry_group(gram)
        print(f"order {grp.order}")
    elif args.query == "complement":
        v = _parse_vector(args.vector)
        if len(v) != len(gram):
            raise CliError("vector length does not match the Gram matrix")
        comp, basis = orthogonal_complement(gram, v)
        print(f"complement gram: {_fmt_rows(comp)}")
        for b in basis:
            print("basis: (" + ",".join(str(x) for x in b) + ")")
        print(f"index^2: {index_squared(gram, (v,) + basis)}")
    else:  # classify
        cls = classify_invariant_cases(gram)
        for case in sorted(cls.cases, key=lambda c: c.n):
            print(f"n={case.n}  NS={_fmt_rows(case.ns_gram)}"
                  f"  T={_fmt_rows(case.t_gram)}  abc={case.abc}")
        print(f"{len(cls.cases)} cases")
    return 0


def _load_group(name: str, cache_dir):
    if os.path.sep in name or name.endswith(".json"):
        try:
            field, gens = load_group_spec(name)
        except (OSError, ValueError) as exc:
            raise CliError(str(exc))
    else:
        try:
            field, gens = catalog.group_generators(name)
        except KeyError:
            raise CliError(f"unknown group {name!r}")
    return field, gens


def cmd_group(args) -> int:
    field, gens = _load_group(args.name, args.cache_dir)
    if args.query == "invariants":
        # invariant forms need no closure, only the generators
        n = len(gens[0])
        variables = ("x", "y", "z", "t") if n == 4 else tuple(
            f"x{k + 1}" for k in range(n))
        basis = invariant_polynomials(field, gens, variables, args.degree)
        print(f"dimension {len(basis)} in degree {args.degree}")
        for p in basis:
            print(sigma_format(p.monic()))
        return 0
    group = MatGroup(field, gens, cap=GROUP_CAP, cache_dir=args.cache_dir)
    if args.query == "order":
        print(group.order)
    elif args.query == "center":
        cen = group.center()
        print(f"order {len(cen)}")
    elif args.query == "derived-index":
        print(group.order // group.derived_subgroup().order)
    elif args.query == "projective-order":
        print(ProjectiveGroup(group).order)
    else:  # spectrum
        hist = ProjectiveGroup(group).order_histogram()
        for k in sorted(hist):
            print(f"order {k}: {hist[k]}")
    return 0


def cmd_nikulin(args) -> int:
    ctx = Context(cache_dir=args.cache_dir)
    if args.surface == "bh":
        if args.orbit == 96:
            conics = ctx.conic_orbit("bh-second")
        else:
            conics = ctx.conic_orbit("a-base")
    else:
        conics = ctx.conic_orbit("mukai-plus") + ctx.conic_orbit(
            "mukai-minus")
    graph = intersection_graph(conics)
    if args.dot:
        print(graph.to_dot())
        return 0
    size, witness = max_disjoint_set(conics, graph)
    print(f"conics: {len(conics)}")
    print(f"disjoint pairs: {graph.edge_count()}")
    print(f"maximum pairwise-disjoint set: {size}")
    index = {c: k for k, c in enumerate(conics)}
    ids = sorted(index[c] for c in witness)
    print("witness: " + ", ".join(f"n{k}" for k in ids))
    if args.verbose:
        for k in ids:
            lin, quad = conic_strings(conics[k])
            print(f"n{k}: " + "; ".join(list(lin) + [quad]))
    return 0


def cmd_cache(args) -> int:
    cache_dir = resolve_cache_dir(args.cache_dir)
    if args.action == "dir":
        print(cache_dir if cache_dir else "(not configured)")
        return 0
    if cache_dir is None:
        raise CliError(
            f"no cache directory: pass --cache-dir or set {CACHE_ENV_VAR}")
    entries = cache_entries(cache_dir)
    if args.action == "list":
        if not entries:
            print("cache is empty")
        for digest, count in entries:
            print(f"{digest}  {count} elements")
    else:  # clear
        removed = 0
        for digest, _ in entries:
            path = os.path.join(cache_dir, digest + ".json")
            if os.path.exists(path):
                os.remove(path)
                removed += 1
        print(f"removed {removed} entries")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="k3m20",
        description="exact verification toolkit for a family of highly"
                    " symmetric quartic surfaces")
    parser.add_argument("--cache-dir", default=None,
                        help=f"closure cache directory (default from"
                             f" {CACHE_ENV_VAR})")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("report", help="run the verification suites")
    p.add_argument("--profile", choices=("quick", "full"), default="full")
    p.add_argument("--output", choices=("text", "json"), default="text")
    p.set_defaults(fn=cmd_report)

    p = sub.add_parser("lattice", help="lattice queries")
    p.add_argument("query",
                   choices=("det", "short", "isometries", "complement",
                            "classify"))
    p.add_argument("--gram", default=L20_GRAM,
                   help="rows separated by ';', entries by ','")
    p.add_argument("--norm", type=int, default=4,
                   help="norm for the short-vector query")
    p.add_argument("--vector", default="1,0,0",
                   help="vector for the complement query")
    p.set_defaults(fn=cmd_lattice)

    p = sub.add_parser("group", help="matrix group queries")
    p.add_argument("name",
                   help="built-in group name or path to a JSON group file")
    p.add_argument("query",
                   choices=("order", "center", "derived-index",
                            "projective-order", "spectrum", "invariants"))
    p.add_argument("--degree", type=int, default=4,
                   help="degree for the invariants query")
    p.set_defaults(fn=cmd_group)

    p = sub.add_parser("nikulin", help="disjoint-conic search")
    p.add_argument("surface", choices=("bh", "mukai"))
    p.add_argument("--orbit", type=int, choices=(16, 96), default=16,
                   help="which orbit to search on the 6x6 side")
    p.add_argument("--dot", action="store_true",
                   help="print the disjointness graph in DOT format")
    p.add_argument("--verbose", action="store_true",
                   help="also print the witness conics")
    p.set_defaults(fn=cmd_nikulin)

    p = sub.add_parser("cache", help="closure cache maintenance")
    p.add_argument("action", choices=("list", "clear", "dir"))
    p.set_defaults(fn=cmd_cache)

    return parser


def entry(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 0 for --help, 2 for usage errors
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (LatticeError, MatGroupError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(entry())


if __name__ == "__main__":
    main()
