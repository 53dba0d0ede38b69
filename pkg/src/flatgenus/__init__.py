"""Exact profinite-genus arithmetic for Bieberbach groups with cyclic
square-free holonomy: lattice invariants, isomorphism deciders, cyclotomic
class-group orbit counting, integer group cohomology, and an analytic
relative-class-number oracle.
"""

from .arith import (
    PrimeRatioPair,
    SquarefreeContext,
    build_context,
    compute_v,
    cyclotomic_poly,
    euler_phi,
    mult_order,
    prime_ratio_pairs,
)
from .abelian import (
    ActionMatrix,
    FinAbGroup,
    SubgroupHD,
    UnitGroup,
    brute_force_orbits,
    fixed_point_count,
    group_action_from_generators,
    orbit_count,
    smith_normal_form,
    subgroup_hd,
    unit_group,
)
from .classgroups import (
    ClassGroupRecord,
    DirichletCharacter,
    Registry,
    characters,
    load_registry,
    loads_registry,
    minus_class_number,
    restriction_action,
    validate_record,
)
from .lattice import (
    UNDECIDABLE,
    IdealBlock,
    InvariantTuple,
    LatticeSpec,
    RegularBlock,
    TrivialBlock,
    compile_matrix,
    direct_sum,
    invariants_of,
    linearly_isomorphic,
    parse_lattice,
    profinitely_isomorphic,
    semilinearly_isomorphic,
)
from .cohomology import (
    BlockCensus,
    CohomologyResult,
    census,
    fixed_nonzero_count,
    h2,
    is_exceptional_at,
    special_primes,
    x_size,
)
from .genus import (
    CharlapReport,
    GenusReport,
    OrbitPolicy,
    OrbitTerm,
    charlap_enumerate,
    crystal_class_size,
    genus_cardinality,
    genus_special,
    genus_upper_bound,
    representatives_T,
)
from . import errors

__version__ = "0.1.0"
