"""Incremental verification-condition pruning.

Given an old verification condition already known to be UNSAT and a new,
similar one, rename the old constants to line up with the new ones and prune
the new formula down to an equisatisfiable residual.
"""
from .matcher import (
    DEFAULT_WEIGHTS, SimilarityWeights, build_substitution, env_similarity,
    environments, lcs_length, max_weight_matching, similarity,
)
from .pruner import flatten, implies, prune, prune_rec, prune_simple
from .terms import (
    DEFAULT_REGISTRY, CommutativityRegistry, ParseError, Session, Substitution,
    SubstitutionError, Symbol, SymbolKind, Term, apply_substitution,
    collect_constants, compare_terms, normalize, parse_term, print_term,
    simplify,
)
from .vcgen import (
    DsaGraph, GraphError, behaviors, demote_shared_assertions,
    graph_correspondence, parse_graph, vc,
)

__version__ = "0.1.0"
