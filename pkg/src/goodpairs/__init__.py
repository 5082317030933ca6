"""Arc-disjoint out- and in-branchings (good pairs) in digraphs.

The package computes arc connectivity, packs arc-disjoint paths and
branchings, searches for good pairs exactly, builds them constructively
through reduction rules, and stress-tests the construction on random and
exhaustive families of 2-arc-strong digraphs.
"""

from .branchings import (
    Branching,
    DEFAULT_NODE_BUDGET,
    GoodPairCert,
    SearchResult,
    branching_roots,
    cert_from_json,
    cert_to_json,
    enumerate_branchings,
    find_good_pair_exact,
    reverse_cert,
    verify_branching,
    verify_good_pair,
)
from .connectivity import (
    CutWitness,
    PathPacking,
    arc_connectivity,
    cut_degree,
    edmonds_branchings,
    max_arc_disjoint_paths,
)
from .constructions import (
    ConditionNotMet,
    PairingArtifacts,
    ReductionTrace,
    TraceStep,
    TRACE_RULES,
    absorb_external_vertices,
    component_pairing,
    digon_root_transfer,
    hamilton_dipath,
    longest_dipath,
    pair_from_hamilton,
    pair_with_spare_vertex,
    reduce_and_lift,
    small_good_pair,
)
from .digraph import (
    Digraph,
    Dipath,
    MAX_VERTICES,
    ParseError,
    StrongDecomposition,
    VertexSet,
    bits,
    independence_number,
    induced_subdigraph,
    mask_of,
    parse_digraph,
    reverse,
    serialize_digraph,
    sniff_format,
    strong_decomposition,
    verify_dipath,
)
from .genlab import (
    GEN_KINDS,
    GenModel,
    VerificationReport,
    arc_minimize,
    canonical_form,
    derive_seed,
    enumerate_small,
    random_2arc_strong,
    verify_theorem_sample,
)

__version__ = "0.1.0"

__all__ = [
    "Branching",
    "ConditionNotMet",
    "CutWitness",
    "DEFAULT_NODE_BUDGET",
    "Digraph",
    "Dipath",
    "GEN_KINDS",
    "GenModel",
    "GoodPairCert",
    "MAX_VERTICES",
    "PairingArtifacts",
    "ParseError",
    "PathPacking",
    "ReductionTrace",
    "SearchResult",
    "StrongDecomposition",
    "TRACE_RULES",
    "TraceStep",
    "VerificationReport",
    "VertexSet",
    "absorb_external_vertices",
    "arc_connectivity",
    "arc_minimize",
    "bits",
    "branching_roots",
    "canonical_form",
    "cert_from_json",
    "cert_to_json",
    "component_pairing",
    "cut_degree",
    "derive_seed",
    "digon_root_transfer",
    "edmonds_branchings",
    "enumerate_branchings",
    "enumerate_small",
    "find_good_pair_exact",
    "hamilton_dipath",
    "independence_number",
    "induced_subdigraph",
    "longest_dipath",
    "mask_of",
    "max_arc_disjoint_paths",
    "pair_from_hamilton",
    "pair_with_spare_vertex",
    "parse_digraph",
    "random_2arc_strong",
    "reduce_and_lift",
    "reverse",
    "reverse_cert",
    "serialize_digraph",
    "small_good_pair",
    "sniff_format",
    "strong_decomposition",
    "verify_branching",
    "verify_dipath",
    "verify_good_pair",
    "verify_theorem_sample",
]
