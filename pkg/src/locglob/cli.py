"""Command line interface.

Subcommands:
  analyze       report germs, globalisation, coherence and foliation data
  verify        run every structural checker on an instance or a suite
  oracle-check  compare fast computations against brute-force oracles

Exit codes: 0 completed (checker counterexamples are reported outcomes,
not failures), 1 usage or parse error, 2 invalid instance, 3 resource
cap exceeded, 4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys

from .coherence import (coherence_report, foliation_space,
                        is_totally_coherent, subgroupoid_coherence,
                        verify_component_clopenness,
                        verify_connectivity_globalization,
                        verify_foliation_components,
                        verify_local_connectivity_coherence,
                        verify_restriction_coherence)
from .errors import (AssociativityError, AtlasConsistencyError,
                     AtlasCoverError, EndpointMismatchError,
                     InvariantViolationError, InverseLawError,
                     MissingIdentityError, ParseError, ResourceLimitError,
                     ValidationError)
from .groupoids import transitivity_components
from .instance_io import ParsedInstance, load_instance
from .oracle import (cross_check_connectivity, cross_check_enumeration,
                     cross_check_glob, instance_suite)
from .sections import Atlas, glob, loc, section_from_atlas
from .spaces import (connected_components, label_key, sorted_labels,
                     sorted_sets)

ERROR_CATEGORIES = (
    (AssociativityError, "associativity"),
    (MissingIdentityError, "missing-identity"),
    (InverseLawError, "inverse-law"),
    (EndpointMismatchError, "endpoint-mismatch"),
    (AtlasCoverError, "atlas-cover"),
    (AtlasConsistencyError, "atlas-consistency"),
)


class UsageError(Exception):
    """Command line invocation problem; exits 1 like a parse error."""


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors by default; 2 is reserved for
    # invalid instances here, so route usage problems to exit 1
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(1) from None


def _build_parser() -> _Parser:
    parser = _Parser(prog="locglob",
                     description="local subgroupoids of finite groupoids "
                                 "over finite spaces")
    commands = parser.add_subparsers(dest="command", required=True)

    def common(sub, with_suite):
        sub.add_argument("--input", metavar="PATH",
                         help="instance file (JSON)")
        sub.add_argument("--format", choices=("json", "text"),
                         default="text", help="report format")
        sub.add_argument("--max-opens", type=int, default=4096,
                         metavar="N", help="open-set scan cap")
        if with_suite:
            sub.add_argument("--suite", metavar="POINTS,ARROWS",
                             help="generated suite instead of a file")

    common(commands.add_parser(
        "analyze", help="summarise one instance"), with_suite=False)
    common(commands.add_parser(
        "verify", help="run the structural checkers"), with_suite=True)
    oracle = commands.add_parser(
        "oracle-check", help="brute-force cross checks")
    common(oracle, with_suite=True)
    oracle.add_argument("--max-arrows", type=int, default=16, metavar="N",
                        help="non-identity arrow cap for enumeration oracles")
    return parser


def _parse_suite_arg(text: str) -> tuple:
    parts = text.split(",")
    try:
        points, arrows = (int(p.strip()) for p in parts)
    except ValueError:
        raise UsageError(
            f"--suite expects \"points,arrows\", got {text!r}") from None
    return points, arrows


def _section_source(parsed: ParsedInstance):
    """The section an instance describes, with an atlas defining it."""
    if parsed.atlas is not None:
        return section_from_atlas(parsed.atlas), parsed.atlas
    if parsed.subgroupoid is not None:
        wide = parsed.subgroupoid
        if wide.base != parsed.space.points:
            raise ValidationError(
                "subgroupoid must be based on the whole space")
        atlas = Atlas(parsed.space, ((parsed.space.points, wide),))
        return section_from_atlas(atlas), atlas
    raise UsageError("instance has neither an atlas nor a subgroupoid")


def _set_list(sets) -> list:
    return [sorted_labels(s) for s in sorted_sets(sets)]


def cmd_analyze(parsed: ParsedInstance, max_opens: int) -> dict:
    section, atlas = _section_source(parsed)
    space, g = parsed.space, parsed.groupoid
    globalised = glob(section)
    report = coherence_report(section)
    total, failing = is_totally_coherent(section, max_opens)
    foliated = foliation_space(section, atlas)
    doc = {
        "space": {
            "points": sorted_labels(space.points),
            "open_sets": len(space.opens),
        },
        "groupoid": {
            "objects": len(g.objects),
            "arrows": len(g.arrow_ids),
            "non_identity_arrows": g.non_identity_count(),
        },
        "germs": {
            label_key(x): {
                "neighbourhood": sorted_labels(section.germs[x].rep.base),
                "arrows": sorted_labels(section.germs[x].rep.arrows),
            }
            for x in sorted_labels(space.points)
        },
        "globalisation": {
            "arrows": sorted_labels(globalised.arrows),
            "transitivity_components":
                _set_list(transitivity_components(globalised)),
        },
        "coherence": {
            "coherent": report.coherent,
            "globally_coherent": report.globally_coherent,
            "witness_points": [label_key(w[0]) for w in report.witnesses],
        },
        "totally_coherent": total,
        "first_failing_open": None if failing is None else sorted_labels(failing),
        "foliation": {
            "opens": _set_list(foliated.opens),
            "components":
                _set_list(connected_components(foliated, foliated.points)),
        },
    }
    if parsed.subgroupoid is not None:
        locally, coherent = subgroupoid_coherence(space, parsed.subgroupoid)
        doc["subgroupoid_coherence"] = {
            "locally_coherent": locally,
            "coherent": coherent,
        }
    return doc


def _minimal_cover(space) -> list:
    return sorted_sets({space.minimal_open(x) for x in space.points})


def _theorem_reports(space, section, atlas, wide, max_opens) -> list:
    # sections on finite spaces are always coherent; a failure here is a
    # germ or closure bug, not a property of the instance
    if not coherence_report(section).coherent:
        raise InvariantViolationError(
            "section is not coherent; germ canonicalisation is broken")
    cover = _minimal_cover(space)
    reports = [
        verify_component_clopenness(loc(space, wide), wide, cover),
        verify_local_connectivity_coherence(space, wide),
    ]
    reports.extend(verify_connectivity_globalization(space, wide))
    reports.append(verify_foliation_components(section, atlas))
    reports.extend(verify_restriction_coherence(section, cover, max_opens))
    return reports


def cmd_verify_instance(parsed: ParsedInstance, max_opens: int) -> dict:
    section, atlas = _section_source(parsed)
    wide = parsed.subgroupoid
    if wide is None:
        wide = glob(section)
    reports = _theorem_reports(parsed.space, section, atlas, wide, max_opens)
    summary = {"pass": 0, "vacuous": 0, "counterexample": 0}
    for report in reports:
        summary[report.status] += 1
    return {"mode": "instance",
            "reports": [r.as_dict() for r in reports],
            "summary": summary}


def cmd_verify_suite(max_points: int, max_extra_arrows: int,
                     max_opens: int) -> dict:
    suite = instance_suite(max_points, max_extra_arrows)
    theorems = {}
    sections = 0
    for inst, section, atlas in suite.iter_sections():
        cross_check_glob(section, atlas)
        sections += 1
        wide = glob(section)
        for report in _theorem_reports(inst.space, section, atlas, wide,
                                       max_opens):
            tally = theorems.setdefault(
                report.theorem, {"pass": 0, "vacuous": 0, "counterexample": 0})
            tally[report.status] += 1
    return {"mode": "suite",
            "suite": {"max_points": max_points,
                      "max_extra_arrows": max_extra_arrows},
            "instances": len(suite.instances),
            "sections": sections,
            "glob_cross_checked": sections,
            "theorems": theorems}


def cmd_oracle_check_instance(parsed: ParsedInstance,
                              max_arrows: int) -> dict:
    doc = {"mode": "instance"}
    doc["connectivity"] = {
        "subsets_checked": cross_check_connectivity(parsed.space)}
    doc["enumeration"] = cross_check_enumeration(
        parsed.groupoid, parsed.space.points, max_arrows)
    if parsed.atlas is not None or parsed.subgroupoid is not None:
        section, atlas = _section_source(parsed)
        confirmed = cross_check_glob(section, atlas, max_arrows)
        doc["glob"] = {"checked": True,
                       "arrows": sorted_labels(confirmed.arrows)}
    else:
        doc["glob"] = {"checked": False,
                       "reason": "no atlas or subgroupoid in the instance"}
    return doc


def cmd_oracle_check_suite(max_points: int, max_extra_arrows: int,
                           max_arrows: int) -> dict:
    suite = instance_suite(max_points, max_extra_arrows)
    glob_checked = 0
    subsets = 0
    enumerations = {"checked": 0, "skipped": 0}
    for inst in suite.instances:
        subsets += cross_check_connectivity(inst.space)
        outcome = cross_check_enumeration(inst.groupoid, inst.space.points,
                                          max_arrows)
        enumerations["checked" if outcome["checked"] else "skipped"] += 1
    for _, section, atlas in suite.iter_sections():
        cross_check_glob(section, atlas, max_arrows)
        glob_checked += 1
    return {"mode": "suite",
            "suite": {"max_points": max_points,
                      "max_extra_arrows": max_extra_arrows},
            "instances": len(suite.instances),
            "glob_cross_checked": glob_checked,
            "connectivity_subsets_checked": subsets,
            "enumeration": enumerations}


def _inline(value) -> str | None:
    """Single-line rendering for scalars and lists of scalars."""
    if isinstance(value, dict):
        return "{}" if not value else None
    if isinstance(value, list):
        parts = [_inline(item) for item in value]
        if all(p is not None for p in parts):
            return "[" + ", ".join(parts) + "]"
        return None
    if value is True:
        return "true"
    if value is False:
        return "false"
    if value is None:
        return "none"
    return str(value)


def _text_lines(value, indent: int) -> list:
    pad = "  " * indent
    lines = []
    if isinstance(value, dict):
        for key, item in value.items():
            flat = _inline(item)
            if flat is not None and len(flat) <= 72:
                lines.append(f"{pad}{key}: {flat}")
            else:
                lines.append(f"{pad}{key}:")
                lines.extend(_text_lines(item, indent + 1))
    elif isinstance(value, list):
        for item in value:
            flat = _inline(item)
            if flat is not None and len(flat) <= 72:
                lines.append(f"{pad}- {flat}")
            else:
                lines.append(f"{pad}-")
                lines.extend(_text_lines(item, indent + 1))
    else:
        lines.append(f"{pad}{_inline(value)}")
    return lines


def _render(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, indent=2, sort_keys=True)
    return "\n".join(_text_lines(doc, 0))


def _dispatch(args) -> dict:
    suite_arg = getattr(args, "suite", None)
    if args.command == "analyze":
        if args.input is None:
            raise UsageError("analyze needs --input")
        return cmd_analyze(load_instance(args.input), args.max_opens)
    if args.command == "verify":
        if (args.input is None) == (suite_arg is None):
            raise UsageError("verify needs exactly one of --input or --suite")
        if suite_arg is not None:
            points, arrows = _parse_suite_arg(suite_arg)
            return cmd_verify_suite(points, arrows, args.max_opens)
        return cmd_verify_instance(load_instance(args.input), args.max_opens)
    if (args.input is None) == (suite_arg is None):
        raise UsageError(
            "oracle-check needs exactly one of --input or --suite")
    if suite_arg is not None:
        points, arrows = _parse_suite_arg(suite_arg)
        return cmd_oracle_check_suite(points, arrows, args.max_arrows)
    return cmd_oracle_check_instance(load_instance(args.input),
                                     args.max_arrows)


def _category(exc: ValidationError) -> str:
    for cls, name in ERROR_CATEGORIES:
        if isinstance(exc, cls):
            return name
    return "validation"


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        doc = _dispatch(args)
    except UsageError as exc:
        print(f"error[usage]: {exc}", file=sys.stderr)
        return 1
    except ParseError as exc:
        print(f"error[parse]: {exc}", file=sys.stderr)
        return 1
    except ResourceLimitError as exc:
        print(f"error[resource-limit]: {exc}", file=sys.stderr)
        return 3
    except ValidationError as exc:
        print(f"error[{_category(exc)}]: {exc}", file=sys.stderr)
        return 2
    except InvariantViolationError as exc:
        print(f"error[invariant]: {exc}", file=sys.stderr)
        return 4
    print(_render(doc, args.format))
    return 0
