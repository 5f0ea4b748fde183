"""handlecalc: diagram calculus for handle diagrams of 4- and 5-manifolds.

The package represents Kirby diagrams, (singular) banded unlink diagrams and
5-dimensional Heegaard diagrams as purely combinatorial codes, applies the
standard move catalogs to them, compiles surgery/double/Gluck constructions,
and computes diagram invariants (integral homology via Smith normal form,
fundamental group presentations, Euler characteristics).
"""

from .bandmoves import BandMove, applicable_band_moves, apply_band
from .codes import (
    Band,
    BandedUnlink,
    Component,
    Crossing,
    DiagramCode,
    DiagramError,
    Piercing,
    Vertex,
    band_surgery,
    disjoint_union,
    linking_matrix,
    linking_number,
    pair_connected_sum,
    push_off,
    resolve_vertices,
    surface_euler_characteristic,
    validate,
)
from .ddc import DdcSyntaxError, canonically_equal, parse_ddc, serialize
from .engine import (
    MoveScript,
    canonical_recognize,
    check_resolutions_trivial,
    run_script,
    simplify_search,
    watch_invariants,
)
from .heegaard import (
    FiveManifoldClass,
    HeegaardDiagram,
    HeegaardMove,
    apply_heegaard,
    double_kirby,
    euler_class,
    gluck_cobordism,
    handlebody_heegaard,
    homology_5manifold,
    one_surgery,
    pi1_heegaard,
    s2bundles_to_double,
    surgery_kirby,
    twisted_double_heegaard,
    validate_heegaard,
)
from .hgd import parse_hgd, serialize_hgd
from .invariants import (
    AbelianGroup,
    Presentation,
    abelianization,
    alternating_group,
    hom_count,
    homology_4manifold,
    pi1_presentation,
    tietze_simplify,
)
from .kirby import (
    KirbyMove,
    MoveError,
    annihilable_pairs,
    apply_kirby,
    boundary_diagram,
    dot_zero_exchange,
)
from .snf import IntMatrix, SmithForm, smith_normal_form

__all__ = [
    "AbelianGroup",
    "Band",
    "BandMove",
    "BandedUnlink",
    "Component",
    "Crossing",
    "DdcSyntaxError",
    "DiagramCode",
    "DiagramError",
    "FiveManifoldClass",
    "HeegaardDiagram",
    "HeegaardMove",
    "IntMatrix",
    "KirbyMove",
    "MoveError",
    "MoveScript",
    "Piercing",
    "Presentation",
    "SmithForm",
    "Vertex",
    "abelianization",
    "alternating_group",
    "annihilable_pairs",
    "applicable_band_moves",
    "apply_band",
    "apply_heegaard",
    "apply_kirby",
    "band_surgery",
    "boundary_diagram",
    "canonical_recognize",
    "canonically_equal",
    "check_resolutions_trivial",
    "disjoint_union",
    "dot_zero_exchange",
    "double_kirby",
    "euler_class",
    "gluck_cobordism",
    "handlebody_heegaard",
    "hom_count",
    "homology_4manifold",
    "homology_5manifold",
    "linking_matrix",
    "linking_number",
    "one_surgery",
    "pair_connected_sum",
    "parse_ddc",
    "parse_hgd",
    "pi1_heegaard",
    "pi1_presentation",
    "push_off",
    "resolve_vertices",
    "run_script",
    "s2bundles_to_double",
    "serialize",
    "serialize_hgd",
    "simplify_search",
    "smith_normal_form",
    "surface_euler_characteristic",
    "surgery_kirby",
    "tietze_simplify",
    "twisted_double_heegaard",
    "validate",
    "validate_heegaard",
    "watch_invariants",
]
