"""Regular path queries under minimal-walk semantics, and a 3-SAT reduction
showing why enumerating them with polynomial delay is hard."""

from .engine import (
    Product,
    SearchStats,
    UnknownVertexError,
    enumerate_matches,
    enumerate_product_simple,
    enumerate_trail_matches,
    nonempty,
    shortest_matches,
)
from .graph import (
    Graph,
    GraphError,
    Walk,
    WalkError,
    bag_lt,
    concat,
    edge_bag,
    edge_set,
    is_trail,
    red_edge_bag,
    set_lt,
    to_dot,
    validate_walk,
)
from .reduction import (
    DimacsError,
    InstanceTooLargeError,
    Literal,
    ReductionInstance,
    SatInstance,
    build_enum_instance,
    build_instance,
    build_membership_instance,
    build_sms_instance,
    make_instance,
    parse_dimacs,
    random_instance,
    sat_oracle,
)
from .regex import Nfa, RegexSyntaxError, RegExp, accepts, parse, to_nfa, to_string
from .semantics import (
    iter_minimal,
    match_set,
    mm_membership,
    mm_set,
    shortest_set,
    sms_membership,
    sms_set,
    trail_set,
)
from .verify import VerificationReport, check_all, delay_profile

__version__ = "0.1.0"
