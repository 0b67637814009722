"""Verification toolchain for social-network privacy policies.

Models a social network as a guarded state machine over bit-vector
encoded sets and relations, checks policy executability through chained
verification conditions, decides compliance between policies by
permission-set inclusion, and checks non-interference of one user's
actions on another user's observations.
"""

from .kernel import BRel, BSet, ElemId, UniverseConfig, UniverseError, ElementOutOfRange, identity_on, product
from .snstate import InvariantViolation, SnState, check_invariants, empty_state, state_to_json
from .operations import (
    DisjointnessViolation,
    FailedGuard,
    OpCall,
    OPERATIONS,
    PreconditionFailure,
    apply,
)
from .policy_lang import ParseError, ResolveError, Scenario, parse, pretty_print, resolve
from .vcgen import (
    DEFAULT_MAX_ENVS,
    EnvBoundExceeded,
    ExecutabilityVerdict,
    base_state,
    check_executability,
    enumerate_environments,
    literal_vc_chain,
)
from .compliance import ComplianceVerdict, compare, list_subset_check
from .noninterference import NiConfig, NiVerdict, Observation, check_noninterference, observe, purge
from .smt_emit import emit_prelude, emit_vc_script

__version__ = "0.1.0"
