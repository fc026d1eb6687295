"""Command line front end: compute, rank, check and group subcommands."""

from __future__ import annotations

import argparse
import sys
from importlib import resources

from .errors import InputError, RadonError
from .group import (
    DEFAULT_CAP,
    closure,
    default_modular_primes,
    derived_series,
    invariant_decomposition,
    modular_group_analysis,
)
from .radon import (
    check_relations,
    dump_json,
    load_fundamental_data,
    radon_rank,
    radon_transform,
    result_to_dict,
    validate,
)

_FIXTURE_PREFIX = "fixture:"


def fixture_path(name: str) -> str:
    """Filesystem path of a bundled input file, e.g. fixture_path("four_lines")."""
    if not name.endswith(".json"):
        name += ".json"
    path = resources.files("radonmono").joinpath("fixtures", name)
    if not path.is_file():
        raise InputError(f"no bundled fixture named {name!r}")
    return str(path)


def _resolve_input(value: str) -> str:
    if value.startswith(_FIXTURE_PREFIX):
        return fixture_path(value[len(_FIXTURE_PREFIX) :])
    return value


def _write_output(text: str, output: str | None):
    if output in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="utf-8") as handle:
            handle.write(text)


def _warn(messages):
    for msg in messages:
        print(f"warning: {msg}", file=sys.stderr)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="radonmono",
        description="Monodromy of the Radon transform of a local system on a "
        "plane curve complement, in exact arithmetic.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--input", "-i", required=True, help="input JSON (or fixture:NAME)")
        p.add_argument("--output", "-o", default="-", help="output path, '-' for stdout")
        p.add_argument("--verify", action="store_true", help="enable runtime stability assertions")
        p.add_argument("--jobs", type=int, default=1, help="parallel workers for the output tuple")

    p_compute = sub.add_parser("compute", help="compute the output monodromy tuple")
    common(p_compute)

    p_rank = sub.add_parser("rank", help="print the expected output rank")
    common(p_rank)

    p_check = sub.add_parser("check", help="validate the input and test bundled relations")
    common(p_check)

    p_group = sub.add_parser("group", help="analyze the group generated by the output tuple")
    common(p_group)
    p_group.add_argument("--cap", type=int, default=DEFAULT_CAP, help="element cap for closures")
    p_group.add_argument("--primes", default=None, help="comma separated modular primes")
    p_group.add_argument("--exact", action="store_true", help="force the exact closure")
    return parser


def cmd_compute(args) -> int:
    fd = load_fundamental_data(_resolve_input(args.input))
    result = radon_transform(fd, verify=args.verify, jobs=args.jobs)
    _warn(result.validation.warnings)
    _write_output(dump_json(result_to_dict(result)), args.output)
    return 0


def cmd_rank(args) -> int:
    fd = load_fundamental_data(_resolve_input(args.input))
    _write_output(f"{radon_rank(fd)}\n", args.output)
    return 0


def cmd_check(args) -> int:
    fd = load_fundamental_data(_resolve_input(args.input))
    report = validate(fd)
    _warn(report.warnings)
    doc = {
        "product_ok": report.product_ok,
        "vankampen_ok": report.vankampen_ok,
        "strand_ok": report.strand_ok,
        "relations_checked": len(fd.relations),
        "relations_ok": None,
    }
    if report.product_ok and fd.relations:
        result = radon_transform(fd, verify=args.verify, jobs=args.jobs)
        doc["relations_ok"] = check_relations(result.gtilde, fd.relations)
    elif report.product_ok:
        doc["relations_ok"] = True
    _write_output(dump_json(doc), args.output)
    return 0 if report.product_ok else 2


def cmd_group(args) -> int:
    fd = load_fundamental_data(_resolve_input(args.input))
    result = radon_transform(fd, verify=args.verify, jobs=args.jobs)
    _warn(result.validation.warnings)
    doc = result_to_dict(result)
    gens = list(result.gtilde)
    group_doc: dict = {"cap": args.cap}
    if result.dim_w == 0 or not gens:
        group_doc.update({"mode": "none", "order": 1 if result.dim_w == 0 else None})
    elif args.exact:
        enum = closure(gens, cap=args.cap)
        group_doc.update({"mode": "exact", "status": enum.status, "order": enum.order})
        if enum.complete:
            series = derived_series(gens, cap=args.cap)
            group_doc["derived_series"] = series
            group_doc["solvable"] = series[-1] == 1
    else:
        primes = (
            [int(x) for x in args.primes.split(",")]
            if args.primes
            else default_modular_primes(fd.spec)
        )
        analysis = modular_group_analysis(gens, primes, cap=args.cap)
        group_doc.update({"mode": "modular", "status": "complete"})
        group_doc.update(analysis)
    if gens:
        group_doc["decomposition"] = invariant_decomposition(gens)
    doc["group"] = group_doc
    _write_output(dump_json(doc), args.output)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "compute": cmd_compute,
        "rank": cmd_rank,
        "check": cmd_check,
        "group": cmd_group,
    }
    try:
        return handlers[args.command](args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except RadonError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 1


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
