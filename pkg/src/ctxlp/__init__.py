"""Exact contextuality analysis for systems of ±1 random variables.

The package decides whether a finite system of dichotomous random variables
admits a coupling with prescribed cross-context behaviour, by exact rational
linear-programming feasibility. Both the traditional criterion (identity
couplings, consistently connected systems only) and the generalized
maximal-coupling criterion for signaling systems are provided, along with
the closed-form check for cyclic four-variable systems, a float cross-check
oracle, seeded generators, and a CLI.
"""

__version__ = "0.1.0"

from .analysis import (
    CONTEXTUAL,
    NONCONTEXTUAL,
    AnalysisReport,
    ChshReport,
    InvalidSystemError,
    NotCyclicError,
    analyze,
    chsh_criterion,
    cyclic_rank4_layout,
    input_digest,
    specialization_check,
)
from .coupling import (
    CBD,
    TRADITIONAL,
    ConstraintRow,
    InconsistentSystemError,
    LpInstance,
    MaximalCouplingTable,
    SizeCapError,
    build_lp,
    bunch_constraints,
    connection_constraints,
    enumerate_atoms,
    maximal_coupling_pair,
)
from .generate import random_system
from .oracle import (
    FEASIBLE,
    INFEASIBLE,
    MARGINAL,
    CrossCheckReport,
    float_feasibility,
    run_corpus,
)
from .rational import RationalSyntaxError, format_rational, parse_rational
from .simplex import (
    Feasible,
    FeasibilityResult,
    Infeasible,
    solve_feasibility,
    verify_certificate,
    verify_solution,
)
from .system import (
    AuditViolation,
    ConnectednessAudit,
    Connection,
    ContextBlock,
    MomentSpec,
    ParseError,
    System,
    audit_connectedness,
    connections,
    drop_context,
    from_moments,
    marginal_one,
    pairwise_moment,
    parse_system,
    serialize_system,
    validate,
)

__all__ = [
    "__version__",
    "CONTEXTUAL",
    "NONCONTEXTUAL",
    "TRADITIONAL",
    "CBD",
    "FEASIBLE",
    "INFEASIBLE",
    "MARGINAL",
    "AnalysisReport",
    "AuditViolation",
    "ChshReport",
    "ConnectednessAudit",
    "Connection",
    "ConstraintRow",
    "ContextBlock",
    "CrossCheckReport",
    "Feasible",
    "FeasibilityResult",
    "Infeasible",
    "InconsistentSystemError",
    "InvalidSystemError",
    "LpInstance",
    "MaximalCouplingTable",
    "MomentSpec",
    "NotCyclicError",
    "ParseError",
    "RationalSyntaxError",
    "SizeCapError",
    "System",
    "analyze",
    "audit_connectedness",
    "build_lp",
    "bunch_constraints",
    "chsh_criterion",
    "connection_constraints",
    "connections",
    "cyclic_rank4_layout",
    "drop_context",
    "enumerate_atoms",
    "float_feasibility",
    "format_rational",
    "from_moments",
    "input_digest",
    "marginal_one",
    "maximal_coupling_pair",
    "pairwise_moment",
    "parse_rational",
    "parse_system",
    "random_system",
    "run_corpus",
    "serialize_system",
    "solve_feasibility",
    "specialization_check",
    "validate",
    "verify_certificate",
    "verify_solution",
]
