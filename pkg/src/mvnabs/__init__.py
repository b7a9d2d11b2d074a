"""Multi-valued networks: synchronous trace semantics, attractors, and
abstraction by state merging.

The central objects are Mvn (a network of entities with finite state ranges,
neighbourhoods, and total update tables), Trace (a canonical run to its first
repeated state), and AbstractionMapping (a per-entity merging of states).
check_abstraction decides whether one network abstracts another under a
mapping; find_abstractions enumerates every abstraction a mapping admits.
"""

from ._kernels import available_backends, backend as kernel_backend, set_backend as set_kernel_backend
from .abstraction import (
    AbstractedTrace,
    AbstractionCheck,
    AbstractionMapping,
    ExactnessCheck,
    StateMapping,
    abstract_language,
    abstract_trace,
    apply_to_state,
    check_abstraction,
    check_exact,
    corresponding_states,
    enumerate_state_mappings,
)
from .errors import GuardExceeded, MvnError, ParseError
from .model import (
    Attractor,
    Mvn,
    Trace,
    Violation,
    decode_state,
    encode_state,
    format_state,
    parse_state,
    state_space,
    state_space_size,
    structurally_equal,
    validate_model,
)
from .parser import (
    parse_mapping,
    parse_model,
    serialize_mapping,
    serialize_model,
)
from .search import (
    CandidateTableSet,
    MappingSearch,
    MappingSearchReport,
    abstract_tables,
    brute_force_abstractions,
    enumerate_candidates,
    find_abstractions,
    find_abstractions_all_mappings,
    find_exact,
    mapping_families,
    total_model_count,
)
from .semantics import (
    attractor_of,
    attractors,
    iter_language,
    language,
    reachable,
    state_graph_dot,
    successor,
    trace_from,
)

__version__ = "0.1.0"

__all__ = [
    "AbstractedTrace",
    "AbstractionCheck",
    "AbstractionMapping",
    "Attractor",
    "CandidateTableSet",
    "ExactnessCheck",
    "GuardExceeded",
    "MappingSearch",
    "MappingSearchReport",
    "Mvn",
    "MvnError",
    "ParseError",
    "StateMapping",
    "Trace",
    "Violation",
    "abstract_language",
    "abstract_tables",
    "abstract_trace",
    "apply_to_state",
    "attractor_of",
    "attractors",
    "available_backends",
    "brute_force_abstractions",
    "check_abstraction",
    "check_exact",
    "corresponding_states",
    "decode_state",
    "encode_state",
    "enumerate_candidates",
    "enumerate_state_mappings",
    "find_abstractions",
    "find_abstractions_all_mappings",
    "find_exact",
    "format_state",
    "iter_language",
    "kernel_backend",
    "language",
    "mapping_families",
    "parse_mapping",
    "parse_model",
    "parse_state",
    "reachable",
    "serialize_mapping",
    "serialize_model",
    "set_kernel_backend",
    "state_graph_dot",
    "state_space",
    "state_space_size",
    "structurally_equal",
    "successor",
    "total_model_count",
    "trace_from",
    "validate_model",
]
