"""Top-level contextuality decisions and reports.

`analyze` is the ground truth: it builds the coupling-feasibility LP for the
requested mode, decides it exactly, and returns the decision together with a
verified witness (a coupling distribution when noncontextual, a Farkas
certificate when contextual).

`chsh_criterion` is the closed form available for one special shape, the
four-content four-context cyclic system: the four cycle correlations must
satisfy every inequality of the odd-sign-flip family (equivalently the
compact statistic below is at most 2) and every shared content must have
equal marginals across its two contexts. Its agreement with `analyze` is a
tested property, not an assumption.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from fractions import Fraction

from .coupling import (
    CBD,
    TRADITIONAL,
    InconsistentSystemError,
    LpInstance,
    Mode,
    build_lp,
)
from .rational import format_rational
from .simplex import (
    Feasible,
    FeasibilityResult,
    solve_feasibility,
    verify_certificate,
    verify_solution,
)
from .system import (
    ConnectednessAudit,
    System,
    audit_connectedness,
    pairwise_moment,
    serialize_system,
    validate,
)

CONTEXTUAL = "contextual"
NONCONTEXTUAL = "noncontextual"

REPORT_VERSION = 1


class InvalidSystemError(ValueError):
    """The system fails validation; carries the violation list."""

    def __init__(self, problems: list[str]):
        self.problems = list(problems)
        super().__init__("; ".join(problems))


class NotCyclicError(ValueError):
    """The system is not a four-content, four-context cyclic arrangement."""


def input_digest(sys_: System) -> str:
    """Stable digest of the canonical document, for report provenance."""
    blob = serialize_system(sys_).encode("utf-8")
    return "sha256:" + hashlib.sha256(blob).hexdigest()


def _audit_json(audit: ConnectednessAudit) -> dict:
    return {
        "consistent": audit.consistent,
        "violations": [
            {
                "content": v.content,
                "context_a": v.context_a,
                "context_b": v.context_b,
                "prob_a": format_rational(v.prob_a),
                "prob_b": format_rational(v.prob_b),
            }
            for v in audit.violations
        ],
    }


@dataclass(frozen=True)
class AnalysisReport:
    """Decision plus its audit trail and machine-checkable witness."""

    mode: Mode
    decision: str
    audit: ConnectednessAudit
    lp_shape: tuple[int, int]
    witness_kind: str
    witness: dict[str, Fraction]
    atom_order: tuple[str, ...]
    input_digest: str
    result: FeasibilityResult = field(compare=False, repr=False)

    def to_json_dict(self, include_witness: bool = True) -> dict:
        witness: dict = {
            "kind": self.witness_kind,
            "nonzero_entries": len(self.witness),
        }
        if include_witness:
            if self.witness_kind == "coupling":
                witness["atom_order"] = list(self.atom_order)
            witness["entries"] = {
                label: format_rational(value)
                for label, value in self.witness.items()
            }
        return {
            "report_version": REPORT_VERSION,
            "mode": self.mode,
            "decision": self.decision,
            "audit": _audit_json(self.audit),
            "lp_shape": list(self.lp_shape),
            "witness": witness,
            "input_digest": self.input_digest,
        }


def analyze(sys_: System, mode: Mode, cap_exp: int | None = None) -> AnalysisReport:
    """Decide (non)contextuality of a valid system in the given mode.

    Noncontextual iff the coupling LP is feasible. The returned witness has
    already passed its independent verifier. Traditional mode refuses
    inconsistently connected systems (InconsistentSystemError); cbd mode
    accepts any valid system.
    """
    problems = validate(sys_)
    if problems:
        raise InvalidSystemError(problems)
    audit = audit_connectedness(sys_)
    lp = build_lp(sys_, mode, cap_exp)
    matrix = lp.matrix()
    rhs = lp.rhs()
    result = solve_feasibility(matrix, rhs)
    if isinstance(result, Feasible):
        if not verify_solution(matrix, rhs, result.x):
            raise RuntimeError("solver returned a coupling that fails verification")
        decision = NONCONTEXTUAL
        witness_kind = "coupling"
        witness = {
            lp.atom_label(j): value
            for j, value in enumerate(result.x)
            if value
        }
    else:
        if not verify_certificate(matrix, rhs, result.y):
            raise RuntimeError(
                "solver returned an infeasibility certificate that fails verification"
            )
        decision = CONTEXTUAL
        witness_kind = "certificate"
        witness = {
            lp.rows[i].label.text(): value
            for i, value in enumerate(result.y)
            if value
        }
    return AnalysisReport(
        mode=mode,
        decision=decision,
        audit=audit,
        lp_shape=lp.shape,
        witness_kind=witness_kind,
        witness=witness,
        atom_order=tuple(f"{q}@{c}" for q, c in lp.pairs),
        input_digest=input_digest(sys_),
        result=result,
    )


# ---------------------------------------------------------------------------
# Closed form for the four-variable cyclic shape
# ---------------------------------------------------------------------------


def cyclic_rank4_layout(sys_: System) -> list[tuple[str, tuple[str, str]]]:
    """Walk the cycle of a 4-content/4-context system.

    Returns (context id, (content, content)) in walk order starting from the
    first declared context, oriented by its variable order. Raises
    NotCyclicError when the structure is anything else (wrong counts, a
    content in more or fewer than two contexts, or two disjoint short
    cycles).
    """
    if len(sys_.contents) != 4 or len(sys_.contexts) != 4:
        raise NotCyclicError(
            f"need 4 contents and 4 contexts, found {len(sys_.contents)} "
            f"and {len(sys_.contexts)}"
        )
    for block in sys_.contexts:
        if len(block.variables) != 2:
            raise NotCyclicError(
                f"context {block.id!r} measures {len(block.variables)} contents, "
                "expected 2"
            )
    for q in sys_.contents:
        if len(sys_.contexts_of(q)) != 2:
            raise NotCyclicError(
                f"content {q!r} appears in {len(sys_.contexts_of(q))} contexts, "
                "expected 2"
            )

    first = sys_.contexts[0]
    qa, qb = first.variables
    layout = [(first.id, (qa, qb))]
    current, lead = first, qb
    for _ in range(3):
        nxt = next(
            (b for b in sys_.contexts if b.id != current.id and lead in b.variables),
            None,
        )
        if nxt is None:
            raise NotCyclicError(f"content {lead!r} has no second context to walk to")
        other = nxt.variables[0] if nxt.variables[1] == lead else nxt.variables[1]
        layout.append((nxt.id, (lead, other)))
        current, lead = nxt, other
    if lead != qa or len({cid for cid, _ in layout}) != 4:
        raise NotCyclicError("contexts do not form a single four-step cycle")
    return layout


@dataclass(frozen=True)
class ChshReport:
    """Closed-form decision for the cyclic four-variable shape."""

    layout: tuple[tuple[str, tuple[str, str]], ...]
    correlations: tuple[Fraction, Fraction, Fraction, Fraction]
    statistic: Fraction
    inequality_holds: bool
    consistency_holds: bool
    decision: str

    def to_json_dict(self) -> dict:
        return {
            "report_version": REPORT_VERSION,
            "correlations": [
                {
                    "context": cid,
                    "contents": [qx, qy],
                    "value": format_rational(value),
                }
                for (cid, (qx, qy)), value in zip(self.layout, self.correlations)
            ],
            "statistic": format_rational(self.statistic),
            "inequality_holds": self.inequality_holds,
            "consistency_holds": self.consistency_holds,
            "decision": self.decision,
        }


def chsh_criterion(sys_: System) -> ChshReport:
    """Closed-form criterion for cyclic four-variable systems.

    The statistic max(S - 2 min r, 2 max r - S), with S the sum of the four
    cycle correlations r, is the largest value of the odd-sign-flip family
    (flip one correlation, or all but one) and must not exceed 2; it equals
    |S - 2 min r| whenever that branch is the binding one. The marginal
    equalities across shared contents must hold as well; the decision is
    noncontextual iff both parts hold.
    """
    problems = validate(sys_)
    if problems:
        raise InvalidSystemError(problems)
    layout = cyclic_rank4_layout(sys_)
    correlations = tuple(
        pairwise_moment(sys_, cid, qx, qy) for cid, (qx, qy) in layout
    )
    total = sum(correlations, Fraction(0))
    statistic = max(total - 2 * min(correlations), 2 * max(correlations) - total)
    inequality_holds = statistic <= 2
    consistency_holds = audit_connectedness(sys_).consistent
    decision = (
        NONCONTEXTUAL if (inequality_holds and consistency_holds) else CONTEXTUAL
    )
    return ChshReport(
        layout=tuple(layout),
        correlations=correlations,
        statistic=statistic,
        inequality_holds=inequality_holds,
        consistency_holds=consistency_holds,
        decision=decision,
    )


def specialization_check(sys_: System, cap_exp: int | None = None) -> bool:
    """Traditional and cbd modes coincide on consistently connected systems.

    Builds both LP instances and requires them to be identical (their rhs
    tables coincide when all shared marginals agree), then runs both
    analyses and reports whether the decisions agree. Raises on
    inconsistently connected input and on differing instances.
    """
    audit = audit_connectedness(sys_)
    if not audit.consistent:
        raise InconsistentSystemError(audit.violations)
    lp_traditional: LpInstance = build_lp(sys_, TRADITIONAL, cap_exp)
    lp_cbd: LpInstance = build_lp(sys_, CBD, cap_exp)
    if lp_traditional != lp_cbd:
        raise RuntimeError(
            "traditional and cbd instances differ on a consistently "
            "connected system; this is a builder bug"
        )
    report_traditional = analyze(sys_, TRADITIONAL, cap_exp)
    report_cbd = analyze(sys_, CBD, cap_exp)
    return report_traditional.decision == report_cbd.decision
