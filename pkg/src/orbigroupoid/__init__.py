"""Finite combinatorial models of orbit groupoids.

Spaces are finite simple graphs, groupoids carry graph structure on both
objects and arrows, and every construction here (quotients, atlas gluing,
mapping groupoids, inertia, spans) stays exhaustively checkable.
"""
from .errors import (
    BadOverlap,
    BadWitness,
    CodomainMismatch,
    CompositionNotClosed,
    DanglingId,
    GlueNotIso,
    InvalidAction,
    NotEtale,
    OrbiError,
    ParseError,
    UndefinedVertex,
)
from .combspace import (
    CombSpace,
    ContinuousMap,
    check_continuous,
    compose_maps,
    cycle_space,
    fiber_product,
    identity_map,
    path_space,
    tagged_union,
)
from .groupoid import (
    FiniteGroup,
    GroupAction,
    Groupoid,
    QuotientSpace,
    Violation,
    build_point_groupoid,
    build_translation_groupoid,
    check_etale,
    disjoint_union_groupoids,
    group_isomorphic,
    isotropy_group,
    orbit_local_structure,
    quotient,
    unit_groupoid,
    validate_groupoid,
)
from .atlas import (
    Gluing,
    build_atlas_groupoid,
    build_interval_chain,
    chart_collapse,
    interval_cover,
)
from .morphism import (
    EssEquivReport,
    Homomorphism,
    IsoPair,
    NatTrans,
    check_essential_equivalence,
    check_isomorphism,
    compose_homomorphisms,
    identity_homomorphism,
    identity_nat_trans,
    validate_homomorphism,
    validate_nat_trans,
    vertical_compose,
    whisker_map_nat,
)
from .gmap import (
    GmapComponent,
    MappingGroupoid,
    build_gmap,
    component_report,
    enumerate_homomorphisms,
    enumerate_nat_trans,
)
from .inertia import (
    PhiReport,
    build_inertia,
    minimal_exponent,
    phi_functor,
    verify_inertia_iso,
    verify_phi_properties,
)
from .bicat import (
    ComposedSpan,
    MoritaReport,
    Span,
    TwoCellDiagram,
    TwoCellWitness,
    compose_spans,
    find_two_cell_witness,
    identity_span,
    morita_equivalent,
    two_cells_equal,
    validate_span,
    validate_two_cell,
)
from .textfmt import (
    Bundle,
    WitnessData,
    format_id,
    parse_bundle,
    parse_groupoid,
    parse_id_text,
    serialize_bundle,
    serialize_groupoid,
)
from .dot import export_dot
from .kernels import active_backend, set_backend

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
