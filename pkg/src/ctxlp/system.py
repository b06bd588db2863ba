"""Systems of dichotomous (±1) random variables.

A *system* is a set of labelled random variables R organized into contexts.
Each context carries a full joint distribution over the variables measured
together in it ("bunch"); variables measuring the same *content* in different
contexts have no joint distribution in the system itself. All probabilities
are exact `Fraction` values; nothing in this module rounds.

The JSON document format is:

    { "contents": ["q1", "q2"],
      "contexts": [
        { "id": "c1", "variables": ["q1", "q2"],
          "joint": [ { "values": {"q1": 1, "q2": 1},  "prob": "1/2" },
                     { "values": {"q1": -1, "q2": -1}, "prob": "1/2" } ] } ] }

Assignments omitted from "joint" have probability zero. Canonical
serialization keeps declaration order for contents and contexts, lists only
nonzero assignments sorted with -1 before +1, and renders probabilities in
lowest terms.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .rational import RationalSyntaxError, format_rational, parse_rational

Assignment = tuple[int, ...]


class ParseError(ValueError):
    """A system document is syntactically or referentially malformed."""


def signs(assignment: Iterable[int]) -> str:
    """Compact rendering of a ±1 assignment, e.g. (+1, -1) -> "+-"."""
    return "".join("+" if v > 0 else "-" for v in assignment)


@dataclass(frozen=True)
class ContextBlock:
    """One context: an id, an ordered variable list, and its joint distribution.

    `joint` maps full ±1 assignments (tuples aligned with `variables`) to
    probabilities; exact zeros are dropped at construction so equality and
    serialization are canonical.
    """

    id: str
    variables: tuple[str, ...]
    joint: dict[Assignment, Fraction]

    def __post_init__(self) -> None:
        object.__setattr__(self, "variables", tuple(self.variables))
        cleaned = {
            tuple(a): Fraction(p) for a, p in self.joint.items() if Fraction(p) != 0
        }
        object.__setattr__(self, "joint", cleaned)

    def probability(self, assignment: Assignment) -> Fraction:
        return self.joint.get(tuple(assignment), Fraction(0))


@dataclass(frozen=True)
class System:
    """Contents plus one ContextBlock per context, both in declaration order."""

    contents: tuple[str, ...]
    contexts: tuple[ContextBlock, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "contents", tuple(self.contents))
        object.__setattr__(self, "contexts", tuple(self.contexts))

    def block(self, context_id: str) -> ContextBlock:
        for block in self.contexts:
            if block.id == context_id:
                return block
        raise ValueError(f"unknown context {context_id!r}")

    def contexts_of(self, content: str) -> list[str]:
        """Ids of the contexts measuring `content`, in system order."""
        return [b.id for b in self.contexts if content in b.variables]

    def memberships(self) -> list[tuple[str, str]]:
        """All (content, context) measurement pairs, context-major order.

        This is the canonical pair order used everywhere downstream:
        contexts in system order, variables in context order.
        """
        return [(q, b.id) for b in self.contexts for q in b.variables]


@dataclass(frozen=True)
class Connection:
    """All contexts (two or more) measuring one shared content."""

    content: str
    contexts: tuple[str, ...]


@dataclass(frozen=True)
class AuditViolation:
    content: str
    context_a: str
    context_b: str
    prob_a: Fraction
    prob_b: Fraction


@dataclass(frozen=True)
class ConnectednessAudit:
    """Result of comparing Pr[R=+1] across each connection, pair by pair."""

    consistent: bool
    violations: tuple[AuditViolation, ...]


@dataclass(frozen=True)
class MomentSpec:
    """Mean/mean/product-moment triples for two-variable contexts.

    `moments` maps a context id to (<A>, <B>, <AB>); the induced joint is
    Pr[x, y] = (1 + x<A> + y<B> + xy<AB>) / 4 and must be nonnegative on all
    four ±1 cells.
    """

    moments: dict[str, tuple[Fraction, Fraction, Fraction]] = field(
        default_factory=dict
    )


# ---------------------------------------------------------------------------
# Document parsing and serialization
# ---------------------------------------------------------------------------


def parse_system(text: str) -> System:
    """Parse a system document; raises ParseError on malformed input.

    Only structural and referential problems raise here (bad JSON, unknown
    contents, duplicate ids, malformed literals). Distributional problems
    such as negative probabilities or sums differing from 1 are left for
    `validate`, so that broken documents can still be inspected.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from None

    if not isinstance(doc, dict):
        raise ParseError("top level must be an object")
    contents = doc.get("contents")
    raw_contexts = doc.get("contexts")
    if not isinstance(contents, list) or not all(
        isinstance(q, str) for q in contents
    ):
        raise ParseError('"contents" must be a list of strings')
    if len(set(contents)) != len(contents):
        raise ParseError('duplicate content id in "contents"')
    if not isinstance(raw_contexts, list):
        raise ParseError('"contexts" must be a list')

    declared = set(contents)
    seen_ids: set[str] = set()
    blocks: list[ContextBlock] = []
    for idx, raw in enumerate(raw_contexts):
        where = f"contexts[{idx}]"
        if not isinstance(raw, dict):
            raise ParseError(f"{where}: must be an object")
        cid = raw.get("id")
        if not isinstance(cid, str):
            raise ParseError(f"{where}: missing string id")
        if cid in seen_ids:
            raise ParseError(f"{where}: duplicate context id {cid!r}")
        seen_ids.add(cid)
        variables = raw.get("variables")
        if not isinstance(variables, list) or not variables:
            raise ParseError(f"{where} ({cid!r}): variables must be a nonempty list")
        for q in variables:
            if not isinstance(q, str):
                raise ParseError(f"{where} ({cid!r}): variable names must be strings")
            if q not in declared:
                raise ParseError(f"{where} ({cid!r}): unknown content {q!r}")
        if len(set(variables)) != len(variables):
            raise ParseError(f"{where} ({cid!r}): repeated content in variables")
        joint_entries = raw.get("joint")
        if not isinstance(joint_entries, list):
            raise ParseError(f"{where} ({cid!r}): joint must be a list")
        joint: dict[Assignment, Fraction] = {}
        for jdx, entry in enumerate(joint_entries):
            spot = f"{where} ({cid!r}) joint[{jdx}]"
            if not isinstance(entry, dict):
                raise ParseError(f"{spot}: must be an object")
            values = entry.get("values")
            if not isinstance(values, dict) or set(values) != set(variables):
                raise ParseError(
                    f"{spot}: values must assign every variable of the context"
                )
            assignment = []
            for q in variables:
                v = values[q]
                if v not in (1, -1) or isinstance(v, bool):
                    raise ParseError(f"{spot}: value for {q!r} must be 1 or -1")
                assignment.append(v)
            key = tuple(assignment)
            if key in joint:
                raise ParseError(f"{spot}: duplicate assignment {signs(key)}")
            try:
                prob = parse_rational(entry.get("prob"))
            except RationalSyntaxError as exc:
                raise ParseError(f"{spot}: {exc}") from None
            joint[key] = prob
        blocks.append(ContextBlock(cid, tuple(variables), joint))

    return System(tuple(contents), tuple(blocks))


def serialize_system(sys_: System) -> str:
    """Canonical document for a System; `parse_system` round-trips it exactly."""
    doc = {
        "contents": list(sys_.contents),
        "contexts": [
            {
                "id": block.id,
                "variables": list(block.variables),
                "joint": [
                    {
                        "values": dict(zip(block.variables, assignment)),
                        "prob": format_rational(prob),
                    }
                    for assignment, prob in sorted(block.joint.items())
                ],
            }
            for block in sys_.contexts
        ],
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# Validation and interrogation
# ---------------------------------------------------------------------------


def validate(sys_: System) -> list[str]:
    """Every invariant violation in the system, in deterministic order.

    An empty list means the system is valid. Violations are descriptions,
    not exceptions: a document with a bad distribution still parses, and this
    is where it gets reported.
    """
    problems: list[str] = []
    if not sys_.contexts:
        problems.append("system has no contexts")
    if len(set(sys_.contents)) != len(sys_.contents):
        problems.append("duplicate content ids")
    ids = [b.id for b in sys_.contexts]
    if len(set(ids)) != len(ids):
        problems.append("duplicate context ids")
    declared = set(sys_.contents)
    for block in sys_.contexts:
        where = f"context {block.id!r}"
        if not block.variables:
            problems.append(f"{where}: no variables")
            continue
        if len(set(block.variables)) != len(block.variables):
            problems.append(f"{where}: repeated content in variables")
        for q in block.variables:
            if q not in declared:
                problems.append(f"{where}: undeclared content {q!r}")
        arity = len(block.variables)
        total = Fraction(0)
        for assignment, prob in sorted(block.joint.items()):
            if len(assignment) != arity or any(v not in (1, -1) for v in assignment):
                problems.append(f"{where}: malformed assignment {assignment!r}")
                continue
            if prob < 0:
                problems.append(
                    f"{where}: negative probability {format_rational(prob)} "
                    f"for assignment {signs(assignment)}"
                )
            total += prob
        if total != 1:
            problems.append(
                f"{where}: probabilities sum to {format_rational(total)}, expected 1"
            )
    return problems


def marginal_one(sys_: System, content: str, context_id: str) -> Fraction:
    """Pr[R = +1] for `content` as measured in `context_id`."""
    block = sys_.block(context_id)
    if content not in block.variables:
        raise ValueError(f"content {content!r} is not measured in {context_id!r}")
    pos = block.variables.index(content)
    return sum(
        (p for a, p in block.joint.items() if a[pos] == 1),
        Fraction(0),
    )


def pairwise_moment(sys_: System, context_id: str, q: str, q2: str) -> Fraction:
    """Exact product moment <R_q R_q2> within one context."""
    block = sys_.block(context_id)
    if q == q2:
        raise ValueError("pairwise moment needs two distinct contents")
    for name in (q, q2):
        if name not in block.variables:
            raise ValueError(f"content {name!r} is not measured in {context_id!r}")
    i, j = block.variables.index(q), block.variables.index(q2)
    return sum(
        (p * a[i] * a[j] for a, p in block.joint.items()),
        Fraction(0),
    )


def connections(sys_: System) -> list[Connection]:
    """One Connection per content measured in at least two contexts."""
    found = []
    for content in sys_.contents:
        in_contexts = sys_.contexts_of(content)
        if len(in_contexts) >= 2:
            found.append(Connection(content, tuple(in_contexts)))
    return found


def audit_connectedness(sys_: System) -> ConnectednessAudit:
    """Compare Pr[R = +1] across every context pair of every connection."""
    violations: list[AuditViolation] = []
    for conn in connections(sys_):
        for i in range(len(conn.contexts)):
            for j in range(i + 1, len(conn.contexts)):
                ca, cb = conn.contexts[i], conn.contexts[j]
                pa = marginal_one(sys_, conn.content, ca)
                pb = marginal_one(sys_, conn.content, cb)
                if pa != pb:
                    violations.append(
                        AuditViolation(conn.content, ca, cb, pa, pb)
                    )
    return ConnectednessAudit(not violations, tuple(violations))


# ---------------------------------------------------------------------------
# Construction helpers
# ---------------------------------------------------------------------------


def two_variable_joint(
    mean_a: Fraction, mean_b: Fraction, moment: Fraction
) -> dict[Assignment, Fraction]:
    """Joint of a ±1 pair from its means and product moment.

    Raises ValueError when any induced cell is negative.
    """
    joint: dict[Assignment, Fraction] = {}
    for x in (1, -1):
        for y in (1, -1):
            p = (1 + x * mean_a + y * mean_b + x * y * moment) / 4
            if p < 0:
                raise ValueError(
                    f"assignment {signs((x, y))}: induced probability "
                    f"{format_rational(p)} is negative"
                )
            if p:
                joint[(x, y)] = p
    return joint


def from_moments(
    spec: MomentSpec, layout: Sequence[tuple[str, tuple[str, str]]]
) -> System:
    """Build a system of two-variable contexts from a MomentSpec.

    `layout` lists (context id, (content, content)) in declaration order;
    contents are declared in order of first appearance. The resulting system
    reproduces the requested means and moments exactly.
    """
    contents: list[str] = []
    blocks: list[ContextBlock] = []
    for cid, (qa, qb) in layout:
        for q in (qa, qb):
            if q not in contents:
                contents.append(q)
        if cid not in spec.moments:
            raise ValueError(f"no moments given for context {cid!r}")
        mean_a, mean_b, moment = spec.moments[cid]
        try:
            joint = two_variable_joint(
                Fraction(mean_a), Fraction(mean_b), Fraction(moment)
            )
        except ValueError as exc:
            raise ValueError(f"context {cid!r}: {exc}") from None
        blocks.append(ContextBlock(cid, (qa, qb), joint))
    return System(tuple(contents), tuple(blocks))


def drop_context(sys_: System, context_id: str) -> System:
    """The subsystem with one context removed; contents are left declared."""
    if all(b.id != context_id for b in sys_.contexts):
        raise ValueError(f"unknown context {context_id!r}")
    remaining = tuple(b for b in sys_.contexts if b.id != context_id)
    if not remaining:
        raise ValueError("cannot drop the only context of a system")
    return System(sys_.contents, remaining)
