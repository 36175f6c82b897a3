"""Finite groupoids and their wide subgroupoids.

Arrows carry opaque ids; a subgroupoid is an id set over a base of
objects, which keeps closure, intersection and comparison plain set
algebra. Composition order is diagrammatic: compose(a, b) means
"a then b" and is defined exactly when the target of a is the source
of b. Everything is finite and validated exhaustively.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

from .errors import (AssociativityError, EndpointMismatchError,
                     InverseLawError, MissingIdentityError, ValidationError)
from .spaces import label_key, sorted_labels
from .unionfind import UnionFind


@dataclass(frozen=True, eq=False)
class Groupoid:
    """Objects plus arrows with explicit identity, inverse and
    composition tables. Values are immutable; equality is structural."""

    objects: frozenset
    source: dict
    target: dict
    identity: dict
    inverse: dict
    table: dict  # (first, second) -> composite, diagrammatic order

    def __post_init__(self):
        object.__setattr__(self, "objects", frozenset(self.objects))

    @cached_property
    def arrow_ids(self) -> frozenset:
        return frozenset(self.source)

    @cached_property
    def identity_ids(self) -> frozenset:
        return frozenset(self.identity.values())

    def src(self, arrow):
        return self.source[arrow]

    def tgt(self, arrow):
        return self.target[arrow]

    def unit(self, obj):
        return self.identity[obj]

    def inv(self, arrow):
        return self.inverse[arrow]

    def compose(self, first, second):
        """first then second; defined when tgt(first) == src(second)."""
        return self.table[(first, second)]

    def non_identity_count(self) -> int:
        return len(self.arrow_ids - self.identity_ids)

    def arrows_within(self, region) -> frozenset:
        reg = frozenset(region)
        return frozenset(a for a in self.source
                         if self.source[a] in reg and self.target[a] in reg)

    @cached_property
    def _signature(self):
        return (self.objects,
                frozenset(self.source.items()),
                frozenset(self.target.items()),
                frozenset(self.identity.items()),
                frozenset(self.inverse.items()),
                frozenset(self.table.items()))

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Groupoid):
            return NotImplemented
        return self._signature == other._signature

    def __hash__(self):
        return hash(self._signature)


def validate_groupoid(candidate: Groupoid) -> Groupoid:
    """Check every groupoid law exhaustively and return the value.

    Each defect kind raises its own error; scans run in sorted order so
    the first reported witness is deterministic.
    """
    g = candidate
    if set(g.source) != set(g.target):
        raise ValidationError("source and target must cover the same arrows")
    arrows = sorted(g.source, key=label_key)
    for a in arrows:
        if g.source[a] not in g.objects or g.target[a] not in g.objects:
            raise ValidationError(
                f"arrow {a!r} has endpoints outside the object set")
    unknown_objs = set(g.identity) - set(g.objects)
    if unknown_objs:
        raise ValidationError(
            f"identity assigned to unknown objects: {sorted_labels(unknown_objs)}")
    for x in sorted(g.objects, key=label_key):
        e = g.identity.get(x)
        if e is None or e not in g.source or g.source[e] != x or g.target[e] != x:
            raise MissingIdentityError(
                f"object {x!r} lacks an identity loop arrow")
    for a in arrows:
        b = g.inverse.get(a)
        if b is None or b not in g.source:
            raise InverseLawError(f"arrow {a!r} has no inverse arrow")
    for (a, b), c in sorted(g.table.items(),
                            key=lambda kv: (label_key(kv[0][0]), label_key(kv[0][1]))):
        if a not in g.source or b not in g.source or c not in g.source:
            raise ValidationError(
                f"composition entry ({a!r}, {b!r}) -> {c!r} mentions unknown arrows")
        if g.target[a] != g.source[b]:
            raise EndpointMismatchError(
                f"composition defined on non-composable pair ({a!r}, {b!r})")
        if g.source[c] != g.source[a] or g.target[c] != g.target[b]:
            raise EndpointMismatchError(
                f"compose({a!r}, {b!r}) = {c!r} should run "
                f"{g.source[a]!r} -> {g.target[b]!r}")
    for a in arrows:
        for b in arrows:
            if g.target[a] == g.source[b] and (a, b) not in g.table:
                raise ValidationError(
                    f"composition missing for composable pair ({a!r}, {b!r})")
    for a in arrows:
        x, y = g.source[a], g.target[a]
        if g.table[(g.identity[x], a)] != a or g.table[(a, g.identity[y])] != a:
            raise ValidationError(f"identity law fails at arrow {a!r}")
    for a in arrows:
        b = g.inverse[a]
        if (g.table[(a, b)] != g.identity[g.source[a]]
                or g.table[(b, a)] != g.identity[g.target[a]]):
            raise InverseLawError(f"inverse law fails at arrow {a!r}")
    for a in arrows:
        for b in arrows:
            if g.target[a] != g.source[b]:
                continue
            ab = g.table[(a, b)]
            for c in arrows:
                if g.target[b] != g.source[c]:
                    continue
                if g.table[(ab, c)] != g.table[(a, g.table[(b, c)])]:
                    raise AssociativityError(
                        f"associativity fails on triple ({a!r}, {b!r}, {c!r})",
                        triple=(a, b, c))
    return g


@dataclass(frozen=True, eq=False)
class WideSubgroupoid:
    """A subgroupoid of parent restricted to `base`, containing every
    identity of the base. Closure is checked on construction."""

    parent: Groupoid
    base: frozenset
    arrows: frozenset

    def __post_init__(self):
        object.__setattr__(self, "base", frozenset(self.base))
        object.__setattr__(self, "arrows", frozenset(self.arrows))
        g = self.parent
        if not self.base <= g.objects:
            raise ValidationError(
                f"base contains unknown objects: "
                f"{sorted_labels(self.base - g.objects)}")
        unknown = self.arrows - g.arrow_ids
        if unknown:
            raise ValidationError(
                f"unknown arrows: {sorted_labels(unknown)}")
        for a in self.arrows:
            if g.source[a] not in self.base or g.target[a] not in self.base:
                raise ValidationError(f"arrow {a!r} leaves the base")
        for u in self.base:
            if g.identity[u] not in self.arrows:
                raise ValidationError(
                    f"not wide: identity arrow of {u!r} is missing")
        for a in self.arrows:
            if g.inverse[a] not in self.arrows:
                raise ValidationError(f"not closed under inverse at {a!r}")
        for a in self.arrows:
            for b in self.arrows:
                if g.target[a] == g.source[b] and g.table[(a, b)] not in self.arrows:
                    raise ValidationError(
                        f"not closed under composition at ({a!r}, {b!r})")

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, WideSubgroupoid):
            return NotImplemented
        if self.base != other.base or self.arrows != other.arrows:
            return False
        return self.parent is other.parent or self.parent == other.parent

    def __hash__(self):
        return hash((self.base, self.arrows))


def wide_subgroupoid(parent: Groupoid, base, arrows=()) -> WideSubgroupoid:
    """Build a wide subgroupoid, adding the identity arrows of the base."""
    base = frozenset(base)
    if not base <= parent.objects:
        raise ValidationError(
            f"base contains unknown objects: "
            f"{sorted_labels(base - parent.objects)}")
    ids = {parent.identity[u] for u in base}
    return WideSubgroupoid(parent, base, frozenset(arrows) | ids)


def identities_only(parent: Groupoid, base) -> WideSubgroupoid:
    return wide_subgroupoid(parent, base)


def full_wide(parent: Groupoid, base) -> WideSubgroupoid:
    return wide_subgroupoid(parent, base, parent.arrows_within(base))


def full_restriction(g: Groupoid, region) -> Groupoid:
    """The groupoid of all arrows of g that start and end in `region`."""
    reg = frozenset(region)
    if not reg <= g.objects:
        raise ValidationError(
            f"unknown objects: {sorted_labels(reg - g.objects)}")
    keep = g.arrows_within(reg)
    return Groupoid(
        objects=reg,
        source={a: g.source[a] for a in keep},
        target={a: g.target[a] for a in keep},
        identity={x: g.identity[x] for x in reg},
        inverse={a: g.inverse[a] for a in keep},
        table={pair: c for pair, c in g.table.items()
               if pair[0] in keep and pair[1] in keep},
    )


def restrict_wide(h: WideSubgroupoid, region) -> WideSubgroupoid:
    """Arrows of h with both endpoints in `region`; closure is automatic
    and re-verified by construction."""
    reg = frozenset(region)
    if not reg <= h.base:
        raise ValidationError("restriction region must lie inside the base")
    g = h.parent
    keep = frozenset(a for a in h.arrows
                     if g.source[a] in reg and g.target[a] in reg)
    return WideSubgroupoid(g, reg, keep)


def _arrow_closure(g: Groupoid, base: frozenset, seed) -> frozenset:
    """Least arrow set over `base` containing the base identities and
    `seed`, closed under inverse and composition. Worklist fixpoint."""
    current = {g.identity[u] for u in base}
    current.update(seed)
    grew = True
    while grew:
        grew = False
        items = list(current)
        for a in items:
            b = g.inverse[a]
            if b not in current:
                current.add(b)
                grew = True
        items = list(current)
        for a in items:
            for b in items:
                if g.target[a] == g.source[b]:
                    c = g.table[(a, b)]
                    if c not in current:
                        current.add(c)
                        grew = True
    return frozenset(current)


def generate_wide(g: Groupoid, base, seed=()) -> WideSubgroupoid:
    """Smallest wide subgroupoid over `base` containing the seed arrows."""
    base = frozenset(base)
    if not base <= g.objects:
        raise ValidationError(
            f"unknown objects: {sorted_labels(base - g.objects)}")
    seed = frozenset(seed)
    unknown = seed - g.arrow_ids
    if unknown:
        raise ValidationError(f"unknown seed arrows: {sorted_labels(unknown)}")
    for a in seed:
        if g.source[a] not in base or g.target[a] not in base:
            raise ValidationError(f"seed arrow {a!r} leaves the base")
    return WideSubgroupoid(g, base, _arrow_closure(g, base, seed))


def transitivity_components(h: WideSubgroupoid) -> frozenset:
    """Partition of the base: objects linked by arrows of h."""
    uf = UnionFind(h.base)
    g = h.parent
    for a in h.arrows:
        uf.union(g.source[a], g.target[a])
    return uf.partition()


def intersect_wide(subgroupoids) -> WideSubgroupoid:
    subs = list(subgroupoids)
    if not subs:
        raise ValidationError("intersection of no subgroupoids is undefined")
    first = subs[0]
    for h in subs[1:]:
        if h.parent != first.parent:
            raise ValidationError("parent mismatch")
        if h.base != first.base:
            raise ValidationError("base mismatch")
    arrows = frozenset.intersection(*(h.arrows for h in subs))
    return WideSubgroupoid(first.parent, first.base, arrows)


def is_subgroupoid(inner: WideSubgroupoid, outer: WideSubgroupoid) -> bool:
    if inner.parent != outer.parent:
        raise ValidationError("parent mismatch")
    if not inner.base <= outer.base:
        raise ValidationError(
            "base of the smaller must lie inside the base of the larger")
    return inner.arrows <= outer.arrows


def _check_printable_labels(labels, what):
    """Synthesized arrow ids embed labels as strings, so labels must
    stringify injectively and avoid the id separators."""
    seen = {}
    for x in labels:
        s = str(x)
        if ":" in s or "#" in s:
            raise ValidationError(
                f"{what} label {x!r} may not contain ':' or '#'")
        if s in seen and seen[s] != x:
            raise ValidationError(
                f"{what} labels {seen[s]!r} and {x!r} collide as strings")
        seen[s] = x


def pair_groupoid(points) -> Groupoid:
    """One arrow p:q for every ordered pair; compose(p:q, q:r) = p:r."""
    pts = frozenset(points)
    if not pts:
        raise ValidationError("pair groupoid needs at least one point")
    _check_printable_labels(pts, "point")
    aid = {(p, q): f"{p}:{q}" for p in pts for q in pts}
    source = {aid[(p, q)]: p for (p, q) in aid}
    target = {aid[(p, q)]: q for (p, q) in aid}
    identity = {p: aid[(p, p)] for p in pts}
    inverse = {aid[(p, q)]: aid[(q, p)] for (p, q) in aid}
    table = {}
    for p in pts:
        for q in pts:
            for r in pts:
                table[(aid[(p, q)], aid[(q, r)])] = aid[(p, r)]
    return Groupoid(pts, source, target, identity, inverse, table)


def identity_groupoid(points) -> Groupoid:
    """Only identity loops: the discrete groupoid on the points."""
    pts = frozenset(points)
    _check_printable_labels(pts, "point")
    aid = {p: f"{p}:{p}" for p in pts}
    source = {aid[p]: p for p in pts}
    target = dict(source)
    identity = {p: aid[p] for p in pts}
    inverse = {aid[p]: aid[p] for p in pts}
    table = {(aid[p], aid[p]): aid[p] for p in pts}
    return Groupoid(pts, source, target, identity, inverse, table)


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A finite group given by its multiplication table."""

    elements: frozenset
    unit: object
    mul: dict
    inv: dict


def finite_group(elements, unit, mul) -> FiniteGroup:
    """Validate the table exhaustively and derive the inverse map."""
    els = frozenset(elements)
    if unit not in els:
        raise ValidationError("group unit must be an element")
    _check_printable_labels(els, "group element")
    mul = dict(mul)
    for key in mul:
        if not (isinstance(key, tuple) and len(key) == 2
                and key[0] in els and key[1] in els):
            raise ValidationError(f"multiplication keyed on unknown pair {key!r}")
    for a in els:
        for b in els:
            if (a, b) not in mul:
                raise ValidationError(
                    f"multiplication undefined for ({a!r}, {b!r})")
            if mul[(a, b)] not in els:
                raise ValidationError(
                    f"product of ({a!r}, {b!r}) escapes the element set")
    for a in els:
        if mul[(unit, a)] != a or mul[(a, unit)] != a:
            raise ValidationError(f"unit law fails at element {a!r}")
    for a in els:
        for b in els:
            for c in els:
                if mul[(mul[(a, b)], c)] != mul[(a, mul[(b, c)])]:
                    raise ValidationError(
                        f"group multiplication not associative at "
                        f"({a!r}, {b!r}, {c!r})")
    inv = {}
    for a in sorted(els, key=label_key):
        found = [b for b in sorted(els, key=label_key)
                 if mul[(a, b)] == unit and mul[(b, a)] == unit]
        if not found:
            raise ValidationError(f"element {a!r} has no inverse")
        inv[a] = found[0]
    return FiniteGroup(els, unit, mul, inv)


def cyclic_group(order: int) -> FiniteGroup:
    if order < 1:
        raise ValidationError("cyclic group order must be positive")
    els = range(order)
    mul = {(a, b): (a + b) % order for a in els for b in els}
    return finite_group(els, 0, mul)


def trivial_group() -> FiniteGroup:
    return cyclic_group(1)


def group_bundle(points, fibers) -> Groupoid:
    """A loops-only groupoid: source equals target everywhere, with the
    fiber group sitting over each point. Arrow ids are p#g."""
    pts = frozenset(points)
    _check_printable_labels(pts, "point")
    for p in pts:
        if p not in fibers:
            raise ValidationError(f"missing fiber for point {p!r}")
    source, target, identity, inverse, table = {}, {}, {}, {}, {}
    for p in pts:
        grp = fibers[p]
        aid = {k: f"{p}#{k}" for k in grp.elements}
        for k in grp.elements:
            source[aid[k]] = p
            target[aid[k]] = p
            inverse[aid[k]] = aid[grp.inv[k]]
        identity[p] = aid[grp.unit]
        for k1 in grp.elements:
            for k2 in grp.elements:
                table[(aid[k1], aid[k2])] = aid[grp.mul[(k1, k2)]]
    return Groupoid(pts, source, target, identity, inverse, table)


def rel_times_group(relation: WideSubgroupoid, group: FiniteGroup) -> Groupoid:
    """Pairs (relation arrow, group element) with componentwise
    composition: compose((x:y, k1), (y:z, k2)) = (x:z, k1 k2). The
    relation must be an equivalence relation, which is exactly a wide
    subgroupoid of a pair groupoid. Arrow ids are x:y#k."""
    pg = relation.parent
    if pg != pair_groupoid(pg.objects):
        raise ValidationError(
            "relation must be a wide subgroupoid of a pair groupoid")
    pts = relation.base
    pairs = {(pg.source[a], pg.target[a]) for a in relation.arrows}
    aid = {(x, y, k): f"{x}:{y}#{k}"
           for (x, y) in pairs for k in group.elements}
    source, target, inverse, table = {}, {}, {}, {}
    identity = {}
    for (x, y, k), name in aid.items():
        source[name] = x
        target[name] = y
        inverse[name] = aid[(y, x, group.inv[k])]
    for x in pts:
        identity[x] = aid[(x, x, group.unit)]
    for (x, y, k1), first in aid.items():
        for (y2, z, k2), second in aid.items():
            if y2 != y:
                continue
            table[(first, second)] = aid[(x, z, group.mul[(k1, k2)])]
    return Groupoid(pts, source, target, identity, inverse, table)


def anchor_image(h: WideSubgroupoid) -> WideSubgroupoid:
    """Image of h under arrow -> (source, target), inside the pair
    groupoid on the base. Always an equivalence relation."""
    pg = pair_groupoid(h.base)
    g = h.parent
    image = frozenset(f"{g.source[a]}:{g.target[a]}" for a in h.arrows)
    return WideSubgroupoid(pg, h.base, image)
