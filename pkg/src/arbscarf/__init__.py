"""Stable matchings on arborescence hypergraphs via Scarf's algorithm.

``run_ffl`` is the polynomial engine for instances given with their
arborescence; ``run_scarf`` is the generic exact-rational engine on the
block-partitioned matrices. ``verify`` holds the checkers and oracles.
"""

from .blocks import BlockSystem, OrdinalView, build_block_system, build_blocks
from .errors import (
    ArbScarfError,
    BadInterval,
    DimensionMismatch,
    InstanceError,
    InvalidSystem,
    InvariantViolation,
    IterationLimitExceeded,
    NoForwardArc,
    NotABasis,
    NotArborescence,
    NotATree,
    NotDirectedPath,
    ParseError,
    RightmostIsSingleton,
    TooLarge,
    Unbounded,
)
from .ffl import FflResult, check_nice_basis, run_ffl, separator_of
from .instance import (
    ArbInstance,
    Arborescence,
    PreferenceSystem,
    build_arb_instance,
    depth_first_relabel,
    interval_instance,
    parse_instance,
    random_instance,
    serialize_instance,
    validate,
)
from .network import basis_tree, classify_pivot, inverse_identity_check, representation_vector
from .scarf_core import cardinal_pivot, is_feasible_cardinal_basis, is_ordinal_basis, ordinal_pivot, run_scarf
from .verify import (
    Matching,
    brute_force_stable_matchings,
    builtin_counterexample,
    is_extreme_point_Q,
    is_fractional_stable,
    is_stable_matching,
    q_membership,
)

__version__ = "0.1.0"
