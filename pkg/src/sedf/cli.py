'''
Command-line front end: parameter enumeration, group listing, search,
classification, constructions, verification and table reproduction.

    python -m src.sedf.cli tables --which 5
    python -m src.sedf.cli params enumerate --max-order 64 --format json
    python -m src.sedf.cli verify --family "Z17: {0,1,4,5},{6,8,14,16}" --kind sedf --lambda 1

Exit codes: 0 success (empty results included), 1 usage or input error,
2 verification failure.
'''
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence
import argparse
import json
import logging
import sys
import time

from src.sedf import __version__
from src.sedf.errors import SedfError
from src.sedf.family import (BlockFamily, GsedfProfile, difference_table, ensure_family,
                             external_difference_counts, plot_differences, verify)
from src.sedf.group.catalog import catalog, describe, parse_group_spec
from src.sedf.optim import constructions
from src.sedf.optim.classify import Classifier
from src.sedf.optim.search import BacktrackSearch
from src.sedf.params import GROUP_CLASSES, ParamSet, enumerate_admissible, is_admissible, nonexistence_filters
from src.sedf.tables import (admissible_table, existence_table, format_cells, format_parameter_rows,
                             search_parameter_table)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID = 2

TABLES = ("admissible", "searchable", "abelian", "nonabelian")
TABLE_IDS = {"1": "admissible", "4": "searchable", "5": "abelian", "6": "nonabelian"}
FORMATS = ("table", "text", "json")


@dataclass
class RunReport:
    '''
    What a command ran and what it found. Every family in the payload can be
    read back and re-verified.
    '''
    command: List[str]
    group: Optional[str] = None
    parameters: Dict = field(default_factory=dict)
    wall_time: Optional[float] = None
    payload: Dict = field(default_factory=dict)
    version: str = __version__

    def to_json_obj(self) -> Dict:
        obj = {"command": self.command, "version": self.version}
        if self.group is not None:
            obj["group"] = self.group
        obj["parameters"] = self.parameters
        if self.wall_time is not None:
            obj["wall_time"] = round(self.wall_time, 6)
        obj["payload"] = self.payload
        return obj


class _ArgumentParser(argparse.ArgumentParser):

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _configure_logging(level: str):
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.WARNING),
        format="%(asctime)s | %(levelname)s | %(name)s | %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
        stream=sys.stderr,
    )


def _emit(args, report: RunReport, text: str):
    if args.format == "json":
        print(json.dumps(report.to_json_obj(), indent=2))
    else:
        print(text)


def _table_name(value: str) -> str:
    return TABLE_IDS.get(value, value)


def _common_options() -> argparse.ArgumentParser:
    '''
    --format, --jobs and --seed for use after a subcommand. SUPPRESS keeps the
    value given before the subcommand when the option is not repeated.
    '''
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default=argparse.SUPPRESS)
    common.add_argument("--jobs", type=int, default=argparse.SUPPRESS, help="worker processes")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="reserved, every command is deterministic")
    return common


def _int_list(value: str) -> List[int]:
    try:
        return [int(x) for x in value.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of integers, got {value!r}")


def _load_families(path: str, group_spec: Optional[str] = None) -> List[BlockFamily]:
    '''
    Families from a JSON file (one family, a list of families, or a search
    report) or from a text file with one family per line
    '''
    group = parse_group_spec(group_spec) if group_spec else None
    text = Path(path).read_text()
    if path.endswith(".json"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as err:
            raise SedfError(f"{path} is not valid JSON: {err}") from err
        if isinstance(data, dict) and "payload" in data:
            data = data["payload"].get("families", [])
        if isinstance(data, dict):
            data = [data]
        return [ensure_family(obj, group) for obj in data]
    return [ensure_family(line, group) for line in text.splitlines() if line.strip()]


def _family_arg(args) -> BlockFamily:
    if args.family:
        group = parse_group_spec(args.group) if args.group else None
        return ensure_family(args.family, group)
    families = _load_families(args.input, args.group)
    if len(families) != 1:
        raise SedfError(f"{args.input} holds {len(families)} families, expected one")
    return families[0]


def _cmd_params_enumerate(args) -> int:
    start = time.perf_counter()
    rows = enumerate_admissible(args.max_n, include_trivial=args.include_trivial, group_class=args.group_class)
    if args.surviving:
        rows = [row for row in rows if not row.filters_hit]
    report = RunReport(["params", "enumerate"],
                       parameters={"max_n": args.max_n, "group_class": args.group_class,
                                   "include_trivial": args.include_trivial},
                       wall_time=time.perf_counter() - start,
                       payload={"rows": [row.to_json_obj() for row in rows], "count": len(rows)})
    _emit(args, report, format_parameter_rows(rows) + f"\n{len(rows)} parameter sets")
    return EXIT_OK


def _cmd_params_check(args) -> int:
    params = ParamSet(args.n, args.m, args.k, args.lam)
    admissible = is_admissible(*params.as_tuple())
    hits = nonexistence_filters(params, args.group_class) if admissible else []
    report = RunReport(["params", "check"], parameters=params.to_json_obj(),
                       payload={"admissible": admissible, "filters": hits})
    text = f"{params}: {'admissible' if admissible else 'not admissible'}"
    if hits:
        text += f"; ruled out in {args.group_class} groups by {', '.join(hits)}"
    _emit(args, report, text)
    return EXIT_OK


def _cmd_groups_list(args) -> int:
    groups = catalog(args.max_order, abelian=not args.nonabelian_only, nonabelian=not args.abelian_only)
    rows = [describe(g) for g in groups]
    report = RunReport(["groups", "list"], parameters={"max_order": args.max_order},
                       payload={"groups": rows})
    text = "\n".join(f"{row['order']:>4}  {row['spec']:<16} {'abelian' if row['abelian'] else 'nonabelian'}"
                     for row in rows)
    _emit(args, report, text)
    return EXIT_OK


def _cmd_search(args) -> int:
    group = parse_group_spec(args.group)
    params = {"jobs": args.jobs, "incremental": not args.naive, "split_depth": args.split_depth,
              "allow_large": args.allow_large, "first_only": args.first, "debug_checks": args.debug_checks}
    engine = BacktrackSearch(params)
    start = time.perf_counter()
    families = engine.run(group, args.m, args.k, args.lam)
    report = RunReport(["search"], group=group.name,
                       parameters={"n": group.order, "m": args.m, "k": args.k, "lambda": args.lam,
                                   "first_only": args.first},
                       wall_time=time.perf_counter() - start,
                       payload={"count": len(families), "families": [f.to_json_obj() for f in families],
                                "stats": engine.stats.to_json_obj()})
    if args.output:
        Path(args.output).write_text(json.dumps(report.to_json_obj(), indent=2))
    text = "\n".join(f.to_text() for f in families)
    _emit(args, report, (text + "\n" if text else "") + f"{len(families)} SEDFs, {engine.stats.nodes} nodes")
    return EXIT_OK


def _cmd_classify(args) -> int:
    families = _load_families(args.input, args.group)
    start = time.perf_counter()
    classes = Classifier().run(families, {"allow_block_permutation": not args.strict})
    group_name = families[0].group.name if families else None
    report = RunReport(["classify"], group=group_name, parameters={"strict": args.strict},
                       wall_time=time.perf_counter() - start,
                       payload={"count": len(classes), "classes": [c.to_json_obj() for c in classes]})
    lines = [f"{len(classes)} classes among {len(families)} families"]
    lines.extend(f"  [{len(c.members)}] {c.representative.to_text()}" for c in classes)
    _emit(args, report, "\n".join(lines))
    return EXIT_OK


def _construct(args) -> List[BlockFamily]:
    kind = args.kind
    if kind == "pa-st":
        return [constructions.construct_pa_st(args.k)]
    if kind == "paley":
        return [constructions.construct_paley(args.q)]
    if kind == "cyclotomic":
        return constructions.construct_cyclotomic(args.q, args.e)
    if kind == "even-k":
        return [constructions.construct_even_k(args.a)]
    if kind == "recursive":
        base = _load_families(args.base)[0]
        return [constructions.recursive_lambda1(base, args.a)]
    if kind == "gsedf-recursive":
        base = _load_families(args.base)[0]
        s, t = base.sizes
        return [constructions.recursive_gsedf(base, constructions.RecursionSpec(args.a, args.b, s, t))]
    if kind == "multiple-of-six":
        return [constructions.sedf_from_multiple_of_six(args.k)]
    if kind == "composite-pair":
        return list(constructions.composite_pair(args.r, args.a))
    if kind == "dihedral":
        return [constructions.construct_dihedral_sedf(args.k)]
    if kind == "trivial":
        return [constructions.construct_trivial(parse_group_spec(args.group))]
    raise SedfError(f"unknown construction {kind!r}")


def _cmd_construct(args) -> int:
    start = time.perf_counter()
    families = _construct(args)
    arguments = {key: value for key, value in vars(args).items()
                 if key in ("k", "q", "e", "a", "b", "r", "base", "group") and value is not None}
    report = RunReport(["construct", args.kind], group=families[0].group.name, parameters=arguments,
                       wall_time=time.perf_counter() - start,
                       payload={"families": [f.to_json_obj() for f in families]})
    _emit(args, report, "\n".join(f.to_text() for f in families))
    return EXIT_OK


def _render_histogram(fam: BlockFamily, mirrored: bool) -> str:
    counts = external_difference_counts(fam, mirrored)
    g = fam.group
    lines = []
    for i in range(fam.m):
        cells = " ".join(f"{g.label(x)}:{int(counts[i, x])}" for x in range(g.order))
        lines.append(f"  A{i + 1}: {cells}")
    return "\n".join(lines)


def _render_tables(fam: BlockFamily) -> str:
    g = fam.group
    parts = []
    for i, a in enumerate(fam.blocks):
        for j, b in enumerate(fam.blocks):
            if i == j:
                continue
            grid = difference_table(a, b, g)
            width = max(len(g.label(x)) for x in range(g.order)) + 1
            header = " " * width + "|" + "".join(f"{g.label(y):>{width}}" for y in b)
            rows = [f"{g.label(x):>{width}}|" + "".join(f"{g.label(d):>{width}}" for d in row)
                    for x, row in zip(a, grid)]
            parts.append(f"A{i + 1} - A{j + 1}\n" + "\n".join([header, "-" * len(header)] + rows))
    return "\n\n".join(parts)


def _cmd_verify(args) -> int:
    fam = _family_arg(args)
    profile = None
    if args.kind == "gsedf":
        if not args.lambdas:
            raise SedfError("gsedf verification needs --lambdas")
        profile = GsedfProfile(fam.sizes, tuple(args.lambdas))
    pds = tuple(args.pds) if args.pds else None
    if pds is not None and len(pds) != 3:
        raise SedfError("--pds takes k,lambda,mu")
    verdict = verify(fam, args.kind, lam=args.lam, profile=profile, pds=pds)
    mirrored = args.kind in ("coedf", "cosedf")
    counts = external_difference_counts(fam, mirrored)
    report = RunReport(["verify", args.kind], group=fam.group.name,
                       parameters={"lambda": args.lam, "profile": str(profile) if profile else None,
                                   "pds": list(pds) if pds else None},
                       payload={"family": fam.to_json_obj(), "verdict": verdict,
                                "counts": counts.astype(int).tolist()})
    text = f"{fam.to_text()} is {'' if verdict else 'not '}a {args.kind.upper()}"
    if not verdict and args.kind != "pds":
        text += "\nexternal difference counts:\n" + _render_histogram(fam, mirrored)
    if args.table:
        text += "\n\n" + _render_tables(fam)
    if args.plot:
        plot_differences(fam, mirrored=mirrored).savefig(args.plot)
        logger.info("difference plot saved to %s", args.plot)
    _emit(args, report, text)
    return EXIT_OK if verdict else EXIT_INVALID


def _cmd_tables(args) -> int:
    which = args.which
    if which in ("admissible", "searchable"):
        rows = admissible_table() if which == "admissible" else search_parameter_table()
        report = RunReport(["tables", which], payload={"rows": [row.to_json_obj() for row in rows]})
        _emit(args, report, format_parameter_rows(rows))
        return EXIT_OK
    cells = existence_table(which == "abelian", skip_filtered=not args.no_filters, jobs=args.jobs)
    report = RunReport(["tables", which], parameters={"skip_filtered": not args.no_filters},
                       payload={"cells": [cell.to_json_obj() for cell in cells if cell.searched or args.show_filtered]})
    _emit(args, report, format_cells(cells, show_filtered=args.show_filtered))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="sedf", description="Strong external difference family toolkit")
    parser.add_argument("--format", choices=FORMATS, default="table")
    parser.add_argument("--jobs", type=int, default=1, help="worker processes")
    parser.add_argument("--seed", type=int, default=None, help="reserved, every command is deterministic")
    parser.add_argument("--log-level", default="WARNING")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = [_common_options()]
    sub = parser.add_subparsers(dest="command", required=True)

    p_params = sub.add_parser("params", help="admissible parameter sets", parents=common)
    params_sub = p_params.add_subparsers(dest="action", required=True)
    p = params_sub.add_parser("enumerate", help="list admissible (n,m,k,lambda)", parents=common)
    p.add_argument("--max-order", "--max-n", dest="max_n", type=int, default=64)
    p.add_argument("--include-trivial", action="store_true")
    p.add_argument("--group-class", choices=GROUP_CLASSES, default="any")
    p.add_argument("--surviving", action="store_true", help="drop sets ruled out by a filter")
    p.set_defaults(func=_cmd_params_enumerate)
    p = params_sub.add_parser("check", help="admissibility and filters of one parameter set", parents=common)
    for name in ("n", "m", "k", "lam"):
        p.add_argument(name, type=int)
    p.add_argument("--group-class", choices=GROUP_CLASSES, default="any")
    p.set_defaults(func=_cmd_params_check)

    p_groups = sub.add_parser("groups", help="built-in group catalogue", parents=common)
    groups_sub = p_groups.add_subparsers(dest="action", required=True)
    p = groups_sub.add_parser("list", parents=common)
    p.add_argument("--max-order", type=int, default=24)
    only = p.add_mutually_exclusive_group()
    only.add_argument("--abelian-only", action="store_true")
    only.add_argument("--nonabelian-only", action="store_true")
    p.set_defaults(func=_cmd_groups_list)

    p = sub.add_parser("search", help="exhaustive SEDF search in one group", parents=common)
    p.add_argument("--group", required=True, help="group spec, e.g. Z17, Z3xZ3, D10, SD(7,3,2), file:path")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--lambda", "--lam", dest="lam", type=int, required=True)
    scope = p.add_mutually_exclusive_group()
    scope.add_argument("--all", dest="first", action="store_false", default=False, help="every family (default)")
    scope.add_argument("--first", dest="first", action="store_true", help="stop at the first family")
    p.add_argument("--naive-check", "--naive", dest="naive", action="store_true",
                   help="recount differences at every node")
    p.add_argument("--split-depth", type=int, default=3)
    p.add_argument("--allow-large", action="store_true")
    p.add_argument("--debug-checks", action="store_true")
    p.add_argument("--output", help="also write the JSON report to this file")
    p.set_defaults(func=_cmd_search, first=False)

    p = sub.add_parser("classify", help="equivalence classes of families", parents=common)
    p.add_argument("--input", required=True, help="JSON families, a search report, or text lines")
    p.add_argument("--group", help="group spec overriding the one named in the input")
    p.add_argument("--strict", action="store_true", help="keep block order")
    p.set_defaults(func=_cmd_classify)

    p_construct = sub.add_parser("construct", help="explicit and recursive constructions", parents=common)
    kinds = p_construct.add_subparsers(dest="kind", required=True)
    p = kinds.add_parser("pa-st", parents=common)
    p.add_argument("--k", type=int, required=True)
    p = kinds.add_parser("paley", parents=common)
    p.add_argument("--q", type=int, required=True)
    p = kinds.add_parser("cyclotomic", parents=common)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--e", type=int, choices=(4, 6), required=True)
    p = kinds.add_parser("even-k", parents=common)
    p.add_argument("--a", type=int, required=True)
    p = kinds.add_parser("recursive", parents=common)
    p.add_argument("--base", required=True)
    p.add_argument("--a", type=int, required=True)
    p = kinds.add_parser("gsedf-recursive", parents=common)
    p.add_argument("--base", required=True)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p = kinds.add_parser("multiple-of-six", parents=common)
    p.add_argument("--k", type=int, required=True)
    p = kinds.add_parser("composite-pair", parents=common)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--a", type=int, required=True)
    p = kinds.add_parser("dihedral", parents=common)
    p.add_argument("--k", type=int, required=True)
    p = kinds.add_parser("trivial", parents=common)
    p.add_argument("--group", required=True)
    p_construct.set_defaults(func=_cmd_construct)

    p = sub.add_parser("verify", help="check a family", parents=common)
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--family", help='terse form, e.g. "Z5: {0,1},{2,4}"')
    source.add_argument("--input", help="file holding one family")
    p.add_argument("--group", help="group spec overriding the one named in the family")
    p.add_argument("--kind", choices=("edf", "sedf", "coedf", "cosedf", "gsedf", "pds"), default="sedf")
    p.add_argument("--lambda", "--lam", dest="lam", type=int)
    p.add_argument("--lambdas", type=_int_list, help="gsedf lambdas, comma-separated")
    p.add_argument("--pds", type=_int_list, help="k,lambda,mu of the first block")
    p.add_argument("--table", action="store_true", help="print the difference tables")
    p.add_argument("--plot", help="save the difference-count chart to this file")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("tables", help="reproduce the parameter and existence tables", parents=common)
    p.add_argument("--which", type=_table_name, choices=TABLES, required=True,
                   help="1 or admissible: parameters up to order 64, 4 or searchable: up to order 24, "
                        "5 or abelian, 6 or nonabelian: existence counts up to order 24")
    p.add_argument("--no-filters", action="store_true", help="search every cell, even ruled-out ones")
    p.add_argument("--show-filtered", action="store_true")
    p.set_defaults(func=_cmd_tables)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.log_level)
    try:
        return args.func(args)
    except SedfError as err:
        logger.error("%s", err)
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, KeyError) as err:
        logger.error("cannot read input: %s", err)
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
