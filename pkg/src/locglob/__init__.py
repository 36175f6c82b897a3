"""Local subgroupoids of finite groupoids over finite topological
spaces: germs, atlases, the loc and glob operators, coherence
predicates, transitivity components and the foliation topology,
together with brute-force oracles for every fast computation."""

from .coherence import (CoherenceReport, TheoremReport, coherence_report,
                        foliation_space, is_totally_coherent,
                        subgroupoid_coherence, verify_component_clopenness,
                        verify_connectivity_globalization,
                        verify_foliation_components,
                        verify_local_connectivity_coherence,
                        verify_restriction_coherence)
from .errors import (AssociativityError, AtlasConsistencyError,
                     AtlasCoverError, EndpointMismatchError,
                     InvariantViolationError, InverseLawError, LocglobError,
                     MissingIdentityError, ParseError, ResourceLimitError,
                     ValidationError)
from .groupoids import (FiniteGroup, Groupoid, WideSubgroupoid, anchor_image,
                        cyclic_group, finite_group, full_restriction,
                        full_wide, generate_wide, group_bundle,
                        identities_only, identity_groupoid, intersect_wide,
                        is_subgroupoid, pair_groupoid, rel_times_group,
                        restrict_wide, transitivity_components,
                        trivial_group, validate_groupoid, wide_subgroupoid)
from .instance_io import (ParsedInstance, load_instance, parse_instance,
                          serialize_instance)
from .oracle import (Instance, InstanceSuite, all_topologies,
                     connected_by_partition, cross_check_connectivity,
                     cross_check_enumeration, cross_check_glob,
                     enumerate_wide_subgroupoids, glob_by_refinements,
                     glob_by_subgroupoid_defn, instance_suite)
from .sections import (Atlas, Germ, LocalSubgroupoid, canonical_atlas,
                       generated_from_atlas, germ_at, germ_leq, glob, loc,
                       refines, restrict_section, section_from_atlas,
                       section_leq)
from .spaces import (FiniteSpace, connected_components, enumerate_opens,
                     generate_topology, is_finer, relative_openness,
                     space_from_basis, subspace)

__all__ = [name for name in dir() if not name.startswith("_")]
