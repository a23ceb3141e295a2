"""Finite multicontact posets and join semilattices.

Construct and validate multicontact families on finite posets, decide
the additivity and refinement conditions with witnesses, build the
canonical powerset embeddings, enumerate all small structures, and run
the exhaustive verification harness over them.
"""

from .catalog import (
    CATALOG_CONTACT_NAMES,
    CatalogEntry,
    CatalogStructures,
    catalog_entries,
    evaluate_entry,
    resolve_catalog,
    run_catalog_checks,
)
from .conditions import (
    ClaimReport,
    ConditionReport,
    RowSystem,
    check_additivity,
    check_claim_3_3,
    check_condition_6_1,
    check_m1,
    check_m1_plus,
    check_m1_restricted,
    check_m2,
    derived_m1_plus,
    derived_m2,
    replay,
    row_system,
)
from .contacts import (
    AxiomCheck,
    EventStructure,
    Multicontact,
    PreClosure,
    ValidationReport,
    WeakContact,
    antichain_generators,
    atom_generated,
    binary_reduct,
    delta_n,
    dominates,
    event_structure_to_poset,
    generate_multicontact,
    is_antichain,
    largest_multicontact,
    multicontact_from_family,
    multicontact_from_oracle,
    overlap_multicontact,
    overlap_weak_contact,
    poset_to_event_structure,
    preclosure_multicontact,
    reduced_antichain_generators,
    smallest_multicontact,
    topological_multicontact,
    validate_event_structure,
    validate_multicontact,
    validate_weak_contact,
    weak_contact_additive,
    weak_contact_from_pairs,
)
from .dsl import (
    Declaration,
    ParseError,
    StructureFile,
    catalog_structure_file,
    emit_catalog,
    parse,
    serialize,
)
from .embedding import (
    CanonicalEmbedding,
    EmbeddingVerdict,
    FiniteSpaceModel,
    as_topological_model,
    canonical_embedding,
    minimal_non_members,
    phi,
    smallest_extension,
    verify_embedding,
)
from .explorer import (
    EnumerationRequest,
    HarnessReport,
    THEOREM_SUITES,
    enumerate_event_structures,
    enumerate_multicontacts,
    enumerate_preclosures,
    enumerate_semilattices,
    enumerate_weak_contacts,
    expansions,
    run_catalog_regressions,
    verify_theorem,
)
from .order import (
    DEFAULT_CARRIER_GUARD,
    GuardError,
    JoinSemilattice,
    Poset,
    StructureError,
    atoms,
    bits,
    catalog,
    mask_of,
    poset_from_relation,
    powerset_semilattice,
    semilattice_from_poset,
    structural_predicates,
    submasks,
)

__all__ = [name for name in dir() if not name.startswith("_")]
