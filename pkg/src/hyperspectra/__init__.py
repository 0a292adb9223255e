"""Spectral radii of k-uniform hypergraphs: power iteration, alpha-normal
certificates, named extremal families and exhaustive enumeration."""

from .canonical import are_isomorphic, canonical_form
from .certificates import (
    CertificateSolution,
    Subnormality,
    SubnormalWitness,
    WeightedIncidenceMatrix,
    check_alpha_normal,
    check_alpha_subnormal,
    check_consistency,
    rho_from_alpha,
    solve_certificate,
    subnormal_witness,
)
from .errors import (
    CapacityError,
    CertificateError,
    ClassificationError,
    ConvergenceError,
    HyperspectraError,
    InputError,
    SolverError,
    StructureError,
)
from .extremal import (
    EnumerationResult,
    TheoremReport,
    enumerate_unicyclic_pm,
    resolve_open_comparison,
    verify_theorem,
)
from .families import FamilySpec, LabeledHypergraph, build_family, edge_release, move_edges
from .hypergraph import (
    ClassLabel,
    Matching,
    UniformHypergraph,
    capped_hypergraph,
    classify,
    cyclomatic_number,
    degree,
    find_perfect_matching,
    is_connected,
    is_linear,
)
from .spectral import EigenPair, apply_adjacency, spectral_radius

__version__ = "0.1.0"
