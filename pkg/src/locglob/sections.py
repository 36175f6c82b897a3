"""Germs, atlases and local subgroupoids.

On a finite space every point x has a minimal open neighbourhood m(x),
so a germ at x has a canonical representative: the defining chart
restricted to m(x). Any witness neighbourhood appearing in a germ
statement can be shrunk to m(x), which turns existential clauses into
single containment checks of canonical representatives. This
canonicalisation is the load-bearing device of the package; the
brute-force oracles recompute the same values from raw definitions.

A local subgroupoid (here: section) assigns a germ to every point and
satisfies the gluing law rep(y) = rep(x)|m(y) for y in m(x), enforced
at construction.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (AtlasConsistencyError, AtlasCoverError, ValidationError)
from .groupoids import (Groupoid, WideSubgroupoid, full_restriction,
                        generate_wide, restrict_wide)
from .spaces import FiniteSpace, label_key, sorted_labels, subspace


@dataclass(frozen=True, eq=False)
class Germ:
    """Canonical germ at a point: the defining chart restricted to the
    point's minimal open neighbourhood."""

    at: object
    rep: WideSubgroupoid

    def __eq__(self, other):
        if not isinstance(other, Germ):
            return NotImplemented
        return self.at == other.at and self.rep == other.rep

    def __hash__(self):
        return hash((label_key(self.at), self.rep.base, self.rep.arrows))


def germ_at(space: FiniteSpace, chart: WideSubgroupoid, x) -> Germ:
    """Germ at x of a wide subgroupoid over an open chart domain."""
    if not space.is_open(chart.base):
        raise ValidationError("chart domain is not an open set")
    if x not in chart.base:
        raise ValidationError(f"point {x!r} is not in the chart domain")
    return Germ(x, restrict_wide(chart, space.minimal_open(x)))


def germ_leq(lower: Germ, upper: Germ) -> bool:
    """Germ order at a point.

    The raw definition asks for some open neighbourhood W of the point
    on which one chart restricts into the other. Restricting further
    only shrinks arrow sets, so W can always be taken to be the minimal
    open neighbourhood, and the order collapses to one arrow-set
    inclusion of canonical representatives. The refinement oracle
    exercises this reduction.
    """
    if lower.at != upper.at:
        raise ValidationError("germs at different points are incomparable")
    if lower.rep.base != upper.rep.base:
        raise ValidationError(
            "germs live over different minimal neighbourhoods")
    return lower.rep.arrows <= upper.rep.arrows


@dataclass(frozen=True, eq=False)
class Atlas:
    """Charts (open set, wide subgroupoid over it) that cover the space
    and induce equal germs at every shared point."""

    space: FiniteSpace
    charts: tuple

    def __post_init__(self):
        charts = tuple((frozenset(open_set), sub)
                       for open_set, sub in self.charts)
        object.__setattr__(self, "charts", charts)
        if not charts:
            if self.space.points:
                raise AtlasCoverError("atlas has no charts")
            return
        parent = charts[0][1].parent
        for i, (open_set, sub) in enumerate(charts):
            if not self.space.is_open(open_set):
                raise ValidationError(f"chart {i} domain is not an open set")
            if sub.base != open_set:
                raise ValidationError(
                    f"chart {i} subgroupoid base differs from its open set")
            if sub.parent != parent:
                raise ValidationError("charts must share one ambient groupoid")
        if parent.objects != self.space.points:
            raise ValidationError(
                "ambient groupoid must have the space's points as objects")
        covered = frozenset().union(*(o for o, _ in charts))
        if covered != self.space.points:
            missing = sorted_labels(self.space.points - covered)
            raise AtlasCoverError(
                f"charts do not cover the space; missing points: {missing}")
        # report the earliest witness in (point, chart pair) order
        for x in sorted_labels(self.space.points):
            hits = [i for i, (o, _) in enumerate(charts) if x in o]
            first = germ_at(self.space, charts[hits[0]][1], x)
            for j in hits[1:]:
                if germ_at(self.space, charts[j][1], x) != first:
                    raise AtlasConsistencyError(
                        f"charts {hits[0]} and {j} induce different germs "
                        f"at point {x!r}",
                        point=x, charts=(hits[0], j))

    @property
    def parent(self) -> Groupoid:
        if not self.charts:
            raise ValidationError("empty atlas has no ambient groupoid")
        return self.charts[0][1].parent


@dataclass(frozen=True, eq=False)
class LocalSubgroupoid:
    """A total assignment of germs satisfying the gluing law
    rep(y) = rep(x)|m(y) whenever y lies in m(x)."""

    space: FiniteSpace
    parent: Groupoid
    germs: dict

    def __post_init__(self):
        object.__setattr__(self, "germs", dict(self.germs))
        if set(self.germs) != set(self.space.points):
            raise ValidationError(
                "section must assign a germ to exactly the points of the space")
        if self.parent.objects != self.space.points:
            raise ValidationError(
                "ambient groupoid must live on the space's points")
        for x, germ in self.germs.items():
            if germ.at != x:
                raise ValidationError(
                    f"germ stored at {x!r} claims to live at {germ.at!r}")
            rep = germ.rep
            if not (rep.parent is self.parent or rep.parent == self.parent):
                raise ValidationError(
                    f"germ at {x!r} lives in a different ambient groupoid")
            if rep.base != self.space.minimal_open(x):
                raise ValidationError(
                    f"germ at {x!r} must be represented on the minimal "
                    f"open neighbourhood")
        for x in self.space.points:
            rx = self.germs[x].rep
            for y in self.space.minimal_open(x):
                if y == x:
                    continue
                expected = restrict_wide(rx, self.space.minimal_open(y))
                if self.germs[y].rep != expected:
                    raise ValidationError(
                        f"gluing law fails from {x!r} to {y!r}")

    def germ(self, x) -> Germ:
        if x not in self.germs:
            raise ValidationError(f"unknown point {x!r}")
        return self.germs[x]

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, LocalSubgroupoid):
            return NotImplemented
        return (self.space == other.space and self.parent == other.parent
                and self.germs == other.germs)

    def __hash__(self):
        return hash((self.space,
                     tuple(sorted((label_key(x), hash(g))
                                  for x, g in self.germs.items()))))


def section_from_atlas(atlas: Atlas) -> LocalSubgroupoid:
    """Assemble the section induced by an atlas. Atlas validation has
    already checked that the chart choice at a point does not matter."""
    germs = {}
    for x in atlas.space.points:
        for open_set, sub in atlas.charts:
            if x in open_set:
                germs[x] = germ_at(atlas.space, sub, x)
                break
    return LocalSubgroupoid(atlas.space, atlas.parent, germs)


def loc(space: FiniteSpace, wide: WideSubgroupoid) -> LocalSubgroupoid:
    """The section of germs of one wide subgroupoid over the whole space."""
    if wide.base != space.points:
        raise ValidationError(
            "loc needs a wide subgroupoid over the whole space")
    germs = {x: germ_at(space, wide, x) for x in space.points}
    return LocalSubgroupoid(space, wide.parent, germs)


def glob(section: LocalSubgroupoid) -> WideSubgroupoid:
    """Least wide subgroupoid H over the whole space with
    section <= loc(H).

    Computed as the closure of the union of the canonical germ
    representatives: every qualifying H contains each representative
    (shrink the germ witness to the minimal neighbourhood), and the
    closure itself qualifies. The enumeration and refinement oracles
    recompute this from raw definitions and must agree arrow for arrow.
    """
    seed = set()
    for germ in section.germs.values():
        seed |= germ.rep.arrows
    return generate_wide(section.parent, section.space.points, seed)


def restrict_section(section: LocalSubgroupoid, region) -> LocalSubgroupoid:
    """Restrict a section to an open set. Minimal neighbourhoods inside
    an open set are unchanged, so germs carry over verbatim; only the
    ambient groupoid is cut down."""
    reg = frozenset(region)
    if not section.space.is_open(reg):
        raise ValidationError("sections restrict to open sets only")
    sub_space = subspace(section.space, reg)
    sub_parent = full_restriction(section.parent, reg)
    germs = {}
    for x in reg:
        old = section.germs[x].rep
        germs[x] = Germ(x, WideSubgroupoid(sub_parent,
                                           sub_space.minimal_open(x),
                                           old.arrows))
    return LocalSubgroupoid(sub_space, sub_parent, germs)


def section_leq(lower: LocalSubgroupoid, upper: LocalSubgroupoid) -> bool:
    """Pointwise germ order."""
    if lower.space != upper.space or lower.parent != upper.parent:
        raise ValidationError(
            "sections over different spaces or groupoids are incomparable")
    return all(germ_leq(lower.germs[x], upper.germs[x])
               for x in lower.space.points)


def generated_from_atlas(atlas: Atlas) -> WideSubgroupoid:
    """Wide subgroupoid generated by every chart's arrows."""
    seed = set()
    for _, sub in atlas.charts:
        seed |= sub.arrows
    return generate_wide(atlas.parent, atlas.space.points, seed)


def refines(finer: Atlas, coarser: Atlas) -> bool:
    """True when every chart of `finer` is the restriction of some chart
    of `coarser` to a smaller open set."""
    if finer.space != coarser.space or finer.parent != coarser.parent:
        raise ValidationError(
            "atlases over different spaces or groupoids are incomparable")
    for open_set, sub in finer.charts:
        if not any(open_set <= big
                   and restrict_wide(big_sub, open_set) == sub
                   for big, big_sub in coarser.charts):
            return False
    return True


def canonical_atlas(section: LocalSubgroupoid) -> Atlas:
    """Point-indexed atlas of minimal-neighbourhood charts. It is defined
    for every section, defines the section back, and refines any atlas
    that defines the section."""
    charts = []
    seen = set()
    for x in sorted_labels(section.space.points):
        rep = section.germs[x].rep
        key = (rep.base, rep.arrows)
        if key in seen:
            continue
        seen.add(key)
        charts.append((rep.base, rep))
    return Atlas(section.space, tuple(charts))
