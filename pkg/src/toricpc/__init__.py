"""Primitive collections and bundle structures of smooth complete toric fans."""

from .bundle import (
    CLASSIFIED_FAMILIES,
    FAMILIES,
    BundleStructure,
    SplitBundleSpec,
    base_fan,
    bundle_structure,
    classification_family,
    exceptional_set,
    open_subset_fan,
    split_bundle_fan,
)
from .chow import ch2_blowup_check, ch2_dot_surface, intersection_number, two_fano_invariant_test
from .fan import (
    Fan,
    FanError,
    build_fan,
    canonical_form,
    faces,
    hirzebruch,
    is_isomorphic,
    minimal_cone_containing,
    product,
    projective_space,
    star_fan,
    star_subdivision,
)
from .io import parse_fan, parse_polytope_db, tabulate_m, write_fan
from .mori import blowdown, curve_class, is_fano, picard_rank, reduce_order2
from .primcoll import (
    batyrev_rho3_structure,
    centrally_symmetric_collections,
    minimal_p_dimension,
    opponent_table,
    primitive_collections,
    primitive_relation,
    primitive_relations,
)

__version__ = "0.1.0"
