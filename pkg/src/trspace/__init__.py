"""Finite-truncation engine for topological Ramsey spaces.

Concrete instances (the Ellentuck space, block sequences, strong
subtrees) are modeled as finite towers of approximations; on top of
that sit the structural axiom checks, front enumeration, mixing and
separation analysis for colorings, fusion, canonization by inner
maps with an exhaustive oracle, and canonical partition numbers.
"""

from .errors import (
    BudgetExceededError,
    DomainError,
    FusionExhaustedError,
    InstanceMismatchError,
    NoInnerWitnessError,
    ParameterError,
    SpaceError,
    TruncationTooShallowError,
)
from .model import (
    DEFAULT_CONFIG,
    EMPTY,
    Approx,
    Block,
    Config,
    PropertyOracle,
    SpaceModel,
    approx_sort_key,
    basic,
    check_axioms,
    compat,
    depth,
    derive_seed,
    extensions,
    fuse,
    leq_fin,
    pigeonhole_A4,
    restrict,
    witness_sort_key,
)
from .spaces import (
    EllentuckModel,
    FinModel,
    TreeModel,
    build_ellentuck,
    build_fin,
    build_tree,
    closure,
    combinations,
    full_initial_segments,
    instance_from_json,
    instance_to_json,
    lx1,
    solid_in,
)
from .fronts import (
    GENERATORS,
    Coloring,
    Front,
    color_front,
    coloring_from_json,
    coloring_to_json,
    front_from_json,
    front_to_json,
    generated_coloring,
    hat,
    is_front,
    members_extending,
    restrict_front,
    subfront,
    uniform_front,
)
from .mixing import (
    MIXES,
    SEPARATES,
    UNDECIDED,
    MixingEngine,
    MixingTable,
    Verdict,
    decide,
    mixing_table,
    transitivity_check,
    weak_mixing_detect,
)
from .canonize import (
    CanonReport,
    InnerMap,
    avoidance_check,
    canonize,
    eval_inner,
    inner_family,
    lemma_suite,
    maximality_check,
    oracle_agreement,
    oracle_canonize,
    property_p_check,
    search_inner_A4star,
    verify_canonical,
)
from .ramsey import canonical_ramsey_number, restricted_growth_strings
from .reportio import (
    approx_from_json,
    approx_to_json,
    block_from_json,
    block_to_json,
    canonical_json,
    report_envelope,
    to_jsonable,
)

__version__ = "0.1.0"

__all__ = [
    "Approx",
    "Block",
    "BudgetExceededError",
    "CanonReport",
    "Coloring",
    "Config",
    "DEFAULT_CONFIG",
    "DomainError",
    "EMPTY",
    "EllentuckModel",
    "FinModel",
    "Front",
    "FusionExhaustedError",
    "GENERATORS",
    "InnerMap",
    "InstanceMismatchError",
    "MIXES",
    "MixingEngine",
    "MixingTable",
    "NoInnerWitnessError",
    "ParameterError",
    "PropertyOracle",
    "SEPARATES",
    "SpaceError",
    "SpaceModel",
    "TreeModel",
    "TruncationTooShallowError",
    "UNDECIDED",
    "Verdict",
    "approx_from_json",
    "approx_sort_key",
    "approx_to_json",
    "avoidance_check",
    "basic",
    "block_from_json",
    "block_to_json",
    "build_ellentuck",
    "build_fin",
    "build_tree",
    "canonical_json",
    "canonical_ramsey_number",
    "canonize",
    "check_axioms",
    "closure",
    "color_front",
    "coloring_from_json",
    "coloring_to_json",
    "combinations",
    "compat",
    "decide",
    "depth",
    "derive_seed",
    "eval_inner",
    "extensions",
    "front_from_json",
    "front_to_json",
    "full_initial_segments",
    "fuse",
    "generated_coloring",
    "hat",
    "inner_family",
    "instance_from_json",
    "instance_to_json",
    "is_front",
    "lemma_suite",
    "leq_fin",
    "lx1",
    "maximality_check",
    "members_extending",
    "mixing_table",
    "oracle_agreement",
    "oracle_canonize",
    "pigeonhole_A4",
    "property_p_check",
    "report_envelope",
    "restrict",
    "restrict_front",
    "restricted_growth_strings",
    "search_inner_A4star",
    "solid_in",
    "subfront",
    "to_jsonable",
    "transitivity_check",
    "uniform_front",
    "verify_canonical",
    "weak_mixing_detect",
    "witness_sort_key",
]
