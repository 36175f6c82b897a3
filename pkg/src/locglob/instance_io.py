"""JSON reading and writing for problem instances.

A document carries a finite space, an ambient groupoid, and optionally
an atlas and a wide subgroupoid over the whole space. Structural
problems with the document (wrong shapes, missing keys) raise
ParseError; semantic problems surface as the validation errors of the
core modules. Serialisation always emits the explicit groupoid form,
and parse(serialize(parse(doc))) equals parse(doc) value for value.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import ParseError
from .groupoids import (FiniteGroup, Groupoid, WideSubgroupoid,
                        finite_group, group_bundle, pair_groupoid,
                        rel_times_group, validate_groupoid,
                        wide_subgroupoid)
from .sections import Atlas
from .spaces import (FiniteSpace, enumerate_opens, label_key, sorted_labels,
                     space_from_basis)

GROUPOID_KINDS = ("pair", "bundle", "rel_times_group", "explicit")


@dataclass(frozen=True, eq=False)
class ParsedInstance:
    space: FiniteSpace
    groupoid: Groupoid
    atlas: Atlas | None
    subgroupoid: WideSubgroupoid | None


def _expect(doc, key, kind, where):
    if not isinstance(doc, dict):
        raise ParseError(f"{where} must be an object")
    if key not in doc:
        raise ParseError(f"{where} is missing the key {key!r}")
    value = doc[key]
    if not isinstance(value, kind):
        raise ParseError(
            f"{where}.{key} must be of type {kind.__name__}")
    return value


def _string_list(value, where) -> list:
    if not isinstance(value, list) or not all(isinstance(x, str) for x in value):
        raise ParseError(f"{where} must be a list of strings")
    return value


def _parse_space(doc) -> FiniteSpace:
    points = _string_list(_expect(doc, "points", list, "space"),
                          "space.points")
    basis_raw = _expect(doc, "basis", list, "space")
    basis = [frozenset(_string_list(b, f"space.basis[{i}]"))
             for i, b in enumerate(basis_raw)]
    return space_from_basis(frozenset(points), basis)


def _parse_group(doc, where) -> FiniteGroup:
    elements = _string_list(_expect(doc, "elements", list, where),
                            f"{where}.elements")
    unit = _expect(doc, "unit", str, where)
    triples = _expect(doc, "mul", list, where)
    mul = {}
    for i, row in enumerate(triples):
        if (not isinstance(row, list) or len(row) != 3
                or not all(isinstance(v, str) for v in row)):
            raise ParseError(
                f"{where}.mul[{i}] must be a [left, right, product] triple")
        key = (row[0], row[1])
        if key in mul:
            raise ParseError(f"{where}.mul repeats the pair {key!r}")
        mul[key] = row[2]
    return finite_group(frozenset(elements), unit, mul)


def _parse_explicit_groupoid(doc, points) -> Groupoid:
    # the ambient groupoid always lives on the space's points
    arrows_raw = _expect(doc, "arrows", list, "groupoid")
    source, target = {}, {}
    for i, row in enumerate(arrows_raw):
        where = f"groupoid.arrows[{i}]"
        aid = _expect(row, "id", str, where)
        if aid in source:
            raise ParseError(f"groupoid.arrows repeats the id {aid!r}")
        source[aid] = _expect(row, "src", str, where)
        target[aid] = _expect(row, "tgt", str, where)
    identity_raw = _expect(doc, "identity_of", dict, "groupoid")
    inverse_raw = _expect(doc, "inverse_of", dict, "groupoid")
    for name, mapping in (("identity_of", identity_raw),
                          ("inverse_of", inverse_raw)):
        for k, v in mapping.items():
            if not isinstance(k, str) or not isinstance(v, str):
                raise ParseError(f"groupoid.{name} must map strings to strings")
    compose_raw = _expect(doc, "compose", list, "groupoid")
    table = {}
    for i, row in enumerate(compose_raw):
        if (not isinstance(row, list) or len(row) != 3
                or not all(isinstance(v, str) for v in row)):
            raise ParseError(
                f"groupoid.compose[{i}] must be a [first, second, composite] "
                f"triple")
        key = (row[0], row[1])
        if key in table:
            raise ParseError(f"groupoid.compose repeats the pair {key!r}")
        table[key] = row[2]
    candidate = Groupoid(frozenset(points), source, target,
                         dict(identity_raw), dict(inverse_raw), table)
    return validate_groupoid(candidate)


def _parse_groupoid(doc, space: FiniteSpace) -> Groupoid:
    kind = _expect(doc, "kind", str, "groupoid")
    if kind not in GROUPOID_KINDS:
        raise ParseError(
            f"groupoid.kind must be one of {', '.join(GROUPOID_KINDS)}")
    if kind == "pair":
        return pair_groupoid(space.points)
    if kind == "bundle":
        fibers_raw = _expect(doc, "fibers", dict, "groupoid")
        fibers = {point: _parse_group(body, f"groupoid.fibers[{point!r}]")
                  for point, body in fibers_raw.items()}
        return group_bundle(space.points, fibers)
    if kind == "rel_times_group":
        pairs_raw = _expect(doc, "relation", list, "groupoid")
        arrows = set()
        for i, row in enumerate(pairs_raw):
            if (not isinstance(row, list) or len(row) != 2
                    or not all(isinstance(v, str) for v in row)):
                raise ParseError(
                    f"groupoid.relation[{i}] must be an [x, y] pair")
            arrows.add(f"{row[0]}:{row[1]}")
        relation = wide_subgroupoid(pair_groupoid(space.points),
                                    space.points, arrows)
        group = _parse_group(_expect(doc, "group", dict, "groupoid"),
                             "groupoid.group")
        return rel_times_group(relation, group)
    return _parse_explicit_groupoid(doc, space.points)


def parse_instance(doc) -> ParsedInstance:
    if not isinstance(doc, dict):
        raise ParseError("instance document must be a JSON object")
    space = _parse_space(_expect(doc, "space", dict, "instance"))
    groupoid = _parse_groupoid(_expect(doc, "groupoid", dict, "instance"),
                               space)
    atlas = None
    if doc.get("atlas") is not None:
        charts_raw = doc["atlas"]
        if not isinstance(charts_raw, list):
            raise ParseError("atlas must be a list of charts")
        charts = []
        for i, chart in enumerate(charts_raw):
            where = f"atlas.charts[{i}]"
            open_set = frozenset(_string_list(
                _expect(chart, "open", list, where), f"{where}.open"))
            arrows = _string_list(_expect(chart, "arrows", list, where),
                                  f"{where}.arrows")
            # identity arrows are implied by wideness; listing them is fine
            charts.append((open_set,
                           wide_subgroupoid(groupoid, open_set, arrows)))
        atlas = Atlas(space, tuple(charts))
    subgroupoid = None
    if doc.get("subgroupoid") is not None:
        sub_doc = doc["subgroupoid"]
        base = frozenset(_string_list(
            _expect(sub_doc, "base", list, "subgroupoid"), "subgroupoid.base"))
        arrows = _string_list(_expect(sub_doc, "arrows", list, "subgroupoid"),
                              "subgroupoid.arrows")
        subgroupoid = wide_subgroupoid(groupoid, base, arrows)
    return ParsedInstance(space, groupoid, atlas, subgroupoid)


def load_instance(path) -> ParsedInstance:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            doc = json.load(handle)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from exc
    return parse_instance(doc)


def _serialize_space(space: FiniteSpace) -> dict:
    return {"points": sorted_labels(space.points),
            "basis": [sorted_labels(o) for o in enumerate_opens(space)]}


def _serialize_groupoid(g: Groupoid) -> dict:
    arrows = [{"id": a, "src": g.source[a], "tgt": g.target[a]}
              for a in sorted(g.source, key=label_key)]
    compose = [[a, b, c] for (a, b), c in sorted(
        g.table.items(),
        key=lambda kv: (label_key(kv[0][0]), label_key(kv[0][1])))]
    return {"kind": "explicit",
            "arrows": arrows,
            "identity_of": {x: g.identity[x]
                            for x in sorted_labels(g.objects)},
            "inverse_of": {a: g.inverse[a]
                           for a in sorted(g.source, key=label_key)},
            "compose": compose}


def serialize_instance(parsed: ParsedInstance) -> dict:
    doc = {"space": _serialize_space(parsed.space),
           "groupoid": _serialize_groupoid(parsed.groupoid)}
    if parsed.atlas is not None:
        doc["atlas"] = [
            {"open": sorted_labels(open_set),
             "arrows": sorted_labels(sub.arrows)}
            for open_set, sub in parsed.atlas.charts]
    if parsed.subgroupoid is not None:
        doc["subgroupoid"] = {
            "base": sorted_labels(parsed.subgroupoid.base),
            "arrows": sorted_labels(parsed.subgroupoid.arrows)}
    return doc
