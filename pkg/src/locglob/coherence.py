"""Coherence predicates and empirical checkers for the structural
statements about sections and their globalisations.

Each checker evaluates a hypothesis and a conclusion on one concrete
instance and reports both, with a machine-readable certificate when the
hypothesis holds and the conclusion fails. A counterexample is a
reported outcome, never an exception: on finite spaces one of the
checked statements does fail, and the bundled fixtures pin that down.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InvariantViolationError, ResourceLimitError, ValidationError
from .groupoids import (WideSubgroupoid, generate_wide, restrict_wide,
                        transitivity_components)
from .sections import (Atlas, LocalSubgroupoid, glob, loc, restrict_section,
                       section_from_atlas)
from .sections import germ_leq
from .spaces import (FiniteSpace, connected_components, enumerate_opens,
                     generate_topology, label_key, relative_openness,
                     sorted_labels, sorted_sets)


@dataclass(frozen=True, eq=False)
class CoherenceReport:
    """Comparison of a section with the germs of its globalisation.

    coherent: the section sits below loc(glob(section)) pointwise.
    globally_coherent: the two agree at every point.
    witnesses: (point, section germ, globalised germ) wherever the germs
    differ; nonempty exactly when some flag is false or the containment
    is strict somewhere.
    """

    coherent: bool
    globally_coherent: bool
    witnesses: tuple


@dataclass(frozen=True, eq=False)
class TheoremReport:
    """Outcome of one checker run on one instance."""

    theorem: str
    hypothesis_holds: bool
    conclusion_holds: bool
    counterexample: dict | None
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        expected = self.hypothesis_holds and not self.conclusion_holds
        if (self.counterexample is not None) != expected:
            raise InvariantViolationError(
                "certificate must be present exactly when the hypothesis "
                "holds and the conclusion fails")

    @property
    def status(self) -> str:
        if not self.hypothesis_holds:
            return "vacuous"
        return "pass" if self.conclusion_holds else "counterexample"

    def as_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "status": self.status,
            "hypothesis_holds": self.hypothesis_holds,
            "conclusion_holds": self.conclusion_holds,
            "counterexample": self.counterexample,
            "details": self.details,
        }


def coherence_report(section: LocalSubgroupoid) -> CoherenceReport:
    globalised = loc(section.space, glob(section))
    coherent = True
    witnesses = []
    for x in sorted_labels(section.space.points):
        mine = section.germs[x]
        theirs = globalised.germs[x]
        if not germ_leq(mine, theirs):
            coherent = False
        if mine != theirs:
            witnesses.append((x, mine, theirs))
    return CoherenceReport(coherent, not witnesses, tuple(witnesses))


def is_totally_coherent(section: LocalSubgroupoid, max_opens: int = 4096):
    """Scan every open restriction; (flag, first failing open or None).

    The scan is guarded: more opens than `max_opens` raises instead of
    silently passing.
    """
    opens = enumerate_opens(section.space)
    if len(opens) > max_opens:
        raise ResourceLimitError(
            f"{len(opens)} open sets exceeds the configured cap of {max_opens}")
    for u in opens:
        if not coherence_report(restrict_section(section, u)).coherent:
            return False, u
    return True, None


def subgroupoid_coherence(space: FiniteSpace, wide: WideSubgroupoid):
    """(locally coherent, coherent) for a wide subgroupoid over the whole
    space: its germ section is coherent, and the subgroupoid equals the
    globalisation of its germ section."""
    section = loc(space, wide)
    locally = coherence_report(section).coherent
    return locally, glob(section) == wide


def foliation_space(section: LocalSubgroupoid, atlas: Atlas) -> FiniteSpace:
    """Refine the topology by the transitivity components of every chart
    of an atlas defining the section. The result is finer than the
    original space."""
    if section_from_atlas(atlas) != section:
        raise ValidationError("atlas does not define the given section")
    extras = []
    for _, sub in atlas.charts:
        extras.extend(transitivity_components(sub))
    return generate_topology(section.space, extras)


def _report(theorem, hypothesis, conclusion, counterexample=None, details=None):
    return TheoremReport(theorem, hypothesis, conclusion,
                         counterexample, details or {})


def _set_list(sets) -> list:
    return [sorted_labels(s) for s in sorted_sets(sets)]


def verify_component_clopenness(section: LocalSubgroupoid,
                                wide: WideSubgroupoid,
                                cover) -> TheoremReport:
    """Checked statement: when `section` is the germ section of `wide`,
    every transitivity component of the subgroupoid generated by the
    restrictions of `wide` to an open cover is relatively open and
    relatively closed inside the component of `wide` containing it."""
    space = section.space
    if loc(space, wide) != section:
        raise ValidationError(
            "section must be the germ section of the wide subgroupoid")
    cover_sets = [frozenset(v) for v in cover]
    for v in cover_sets:
        if not space.is_open(v):
            raise ValidationError("cover members must be open sets")
    covered = frozenset().union(frozenset(), *cover_sets)
    if covered != space.points:
        raise ValidationError("cover must cover the space")
    seed = set()
    for v in cover_sets:
        seed |= restrict_wide(wide, v).arrows
    generated = generate_wide(wide.parent, space.points, seed)
    ambient = {x: comp
               for comp in transitivity_components(wide) for x in comp}
    counterexample = None
    checked = 0
    for comp in sorted_sets(transitivity_components(generated)):
        container = ambient[next(iter(comp))]
        if not comp <= container:
            raise InvariantViolationError(
                "component of the generated subgroupoid escapes its "
                "ambient component")
        rel_open, rel_closed = relative_openness(space, comp, container)
        checked += 1
        if not (rel_open and rel_closed) and counterexample is None:
            counterexample = {
                "component": sorted_labels(comp),
                "ambient_component": sorted_labels(container),
                "relatively_open": rel_open,
                "relatively_closed": rel_closed,
            }
    return _report(
        "component-clopenness", True, counterexample is None, counterexample,
        {"cover": _set_list(cover_sets), "components_checked": checked})


def verify_local_connectivity_coherence(space: FiniteSpace,
                                        wide: WideSubgroupoid,
                                        neighborhood_choice=None) -> TheoremReport:
    """Checked statement: if every point has an open neighbourhood W such
    that the restriction of `wide` to W has connected transitivity
    components, then the germ section of `wide` is coherent.

    With no explicit choice the minimal open neighbourhood is tried
    first, then every other open containing the point: the hypothesis is
    existential. An explicit choice is used as given.
    """
    if wide.base != space.points:
        raise ValidationError(
            "checker needs a wide subgroupoid over the whole space")
    witnesses = {}
    failed = []
    for x in sorted_labels(space.points):
        if neighborhood_choice is not None:
            if x not in neighborhood_choice:
                raise ValidationError(
                    f"no neighbourhood chosen for point {x!r}")
            w = frozenset(neighborhood_choice[x])
            if not space.is_open(w) or x not in w:
                raise ValidationError(
                    f"chosen neighbourhood of {x!r} must be an open set "
                    f"containing it")
            candidates = [w]
        else:
            m = space.minimal_open(x)
            candidates = [m] + [o for o in enumerate_opens(space)
                                if x in o and o != m]
        for w in candidates:
            comps = transitivity_components(restrict_wide(wide, w))
            if all(len(connected_components(space, c)) == 1 for c in comps):
                witnesses[x] = w
                break
        else:
            failed.append(x)
    hypothesis = not failed
    conclusion = coherence_report(loc(space, wide)).coherent
    counterexample = None
    if hypothesis and not conclusion:
        counterexample = {"incoherent_points": [
            label_key(x) for x in sorted_labels(space.points)
            if not germ_leq(loc(space, wide).germs[x],
                            loc(space, glob(loc(space, wide))).germs[x])]}
    details = {
        "neighbourhoods": {label_key(x): sorted_labels(w)
                           for x, w in witnesses.items()},
        "points_without_neighbourhood": [label_key(x) for x in failed],
    }
    return _report("local-connectivity-coherence", hypothesis, conclusion,
                   counterexample, details)


def verify_connectivity_globalization(space: FiniteSpace,
                                      wide: WideSubgroupoid):
    """Two checked directions. Forward: connected transitivity components
    force the subgroupoid to equal the globalisation of its germ
    section. Converse: a subgroupoid equal to that globalisation whose
    components are all closed has connected components."""
    if wide.base != space.points:
        raise ValidationError(
            "checker needs a wide subgroupoid over the whole space")
    comps = sorted_sets(transitivity_components(wide))
    connected = {comp: len(connected_components(space, comp)) == 1
                 for comp in comps}
    closed = {comp: relative_openness(space, comp, space.points)[1]
              for comp in comps}
    globalised = glob(loc(space, wide))
    equal = globalised == wide
    details = {
        "components": _set_list(comps),
        "all_connected": all(connected.values()),
        "all_closed": all(closed.values()),
        "equals_globalisation": equal,
    }

    fwd_hyp = all(connected.values())
    fwd_cx = None
    if fwd_hyp and not equal:
        fwd_cx = {
            "missing_arrows": sorted(wide.arrows - globalised.arrows,
                                     key=label_key),
            "extra_arrows": sorted(globalised.arrows - wide.arrows,
                                   key=label_key),
        }
    forward = _report("connectivity-globalization-forward",
                      fwd_hyp, equal, fwd_cx, details)

    conv_hyp = equal and all(closed.values())
    conv_conc = all(connected.values())
    conv_cx = None
    if conv_hyp and not conv_conc:
        bad = next(c for c in comps if not connected[c])
        conv_cx = {"disconnected_component": sorted_labels(bad)}
    converse = _report("connectivity-globalization-converse",
                       conv_hyp, conv_conc, conv_cx, details)
    return forward, converse


def verify_foliation_components(section: LocalSubgroupoid,
                                atlas: Atlas) -> TheoremReport:
    """Checked statement: for a coherent section, the transitivity
    components of its globalisation are connected components of the
    space refined by the chart components. A failing instance yields a
    certificate rather than an exception; the bundled fixtures include
    one such recorded counterexample."""
    if not coherence_report(section).coherent:
        return _report("foliation-components", False, False, None,
                       {"note": "section is not coherent"})
    foliated = foliation_space(section, atlas)
    glob_comps = sorted_sets(transitivity_components(glob(section)))
    fol_comps = sorted_sets(connected_components(foliated, foliated.points))
    fol_set = set(fol_comps)
    counterexample = None
    for comp in glob_comps:
        if comp not in fol_set:
            counterexample = {
                "transitivity_component": sorted_labels(comp),
                "foliation_components_meeting_it":
                    [sorted_labels(c) for c in fol_comps if c & comp],
            }
            break
    details = {
        "transitivity_components": _set_list(glob_comps),
        "foliation_components": _set_list(fol_comps),
        "foliation_opens": _set_list(foliated.opens),
    }
    return _report("foliation-components", True, counterexample is None,
                   counterexample, details)


def verify_restriction_coherence(section: LocalSubgroupoid, cover,
                                 max_opens: int = 4096):
    """Two checked statements about restriction. First: a globally and
    totally coherent section stays globally coherent on every open set.
    Second: if the section is globally and totally coherent on each
    member of an open cover, it is totally coherent."""
    space = section.space
    cover_sets = [frozenset(v) for v in cover]
    for v in cover_sets:
        if not space.is_open(v):
            raise ValidationError("cover members must be open sets")
    if frozenset().union(frozenset(), *cover_sets) != space.points:
        raise ValidationError("cover must cover the space")

    def globally(s):
        return coherence_report(s).globally_coherent

    hyp1 = globally(section) and is_totally_coherent(section, max_opens)[0]
    conc1 = True
    cx1 = None
    for u in enumerate_opens(space):
        if not globally(restrict_section(section, u)):
            conc1 = False
            if hyp1:
                cx1 = {"open_set": sorted_labels(u)}
            break
    first = _report("restriction-global-coherence", hyp1, conc1, cx1,
                    {"opens_checked": len(space.opens)})

    hyp2 = all(
        globally(restrict_section(section, v))
        and is_totally_coherent(restrict_section(section, v), max_opens)[0]
        for v in cover_sets)
    conc2, failing = is_totally_coherent(section, max_opens)
    cx2 = None
    if hyp2 and not conc2:
        cx2 = {"failing_open": sorted_labels(failing)}
    second = _report("restriction-total-coherence", hyp2, conc2, cx2,
                     {"cover": _set_list(cover_sets)})
    return first, second
