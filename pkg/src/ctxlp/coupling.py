"""Feasibility-LP construction for coupling existence.

A coupling of a system is a single joint distribution over one ±1 variable
per (content, context) measurement pair whose restriction to each context
reproduces that context's bunch distribution. Deciding whether a coupling
with prescribed cross-context behaviour exists is a linear feasibility
problem over the probabilities of all 2^m full assignments ("atoms", m =
number of measurement pairs):

  * bunch rows: for every context and every full assignment over its
    variables, the atom masses selected by that event sum to the bunch
    probability (zero-probability assignments included; they are genuine
    equality constraints);
  * connection rows: for every content shared by two contexts and every
    value pair (s, s'), the selected atom masses sum to a prescribed joint
    for that variable pair. Traditional mode prescribes the identity
    coupling (equal values almost surely), which presupposes equal marginals
    across contexts. CbD mode prescribes the maximal coupling of the two
    actual marginals, which is defined for signaling systems as well and
    coincides with traditional mode when the marginals agree.

Canonical orders, frozen by golden-file tests: measurement pairs are
context-major; atoms are the 2^m assignments in lexicographic order with -1
before +1 (pair 0 most significant); rows list contexts, then connections in
content order, with assignments and value pairs enumerated +1 first.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal, Sequence

from .rational import format_rational
from .system import (
    AuditViolation,
    System,
    audit_connectedness,
    connections,
    marginal_one,
    signs,
)

Mode = Literal["traditional", "cbd"]
TRADITIONAL: Mode = "traditional"
CBD: Mode = "cbd"

Atom = tuple[int, ...]

DEFAULT_ATOM_CAP_EXP = 20


class SizeCapError(ValueError):
    """The system's atom count 2^m exceeds the configured cap."""

    def __init__(self, pair_count: int, cap_exp: int):
        self.pair_count = pair_count
        self.cap_exp = cap_exp
        super().__init__(
            f"system too large: {pair_count} measurement pairs would need "
            f"2^{pair_count} coupling atoms, above the 2^{cap_exp} cap"
        )


class InconsistentSystemError(ValueError):
    """Traditional mode was requested for a system with unequal marginals."""

    def __init__(self, violations: Sequence[AuditViolation]):
        self.violations = tuple(violations)
        first = self.violations[0]
        super().__init__(
            "traditional mode requires consistent connectedness, but content "
            f"{first.content!r} has Pr[+1] = {format_rational(first.prob_a)} in "
            f"context {first.context_a!r} and {format_rational(first.prob_b)} in "
            f"{first.context_b!r} ({len(self.violations)} violation(s) total); "
            "use cbd mode for signaling systems"
        )


@dataclass(frozen=True)
class BunchLabel:
    context: str
    values: tuple[int, ...]

    def text(self) -> str:
        return f"bunch:{self.context}:{signs(self.values)}"


@dataclass(frozen=True)
class ConnectionLabel:
    content: str
    context_a: str
    context_b: str
    value_a: int
    value_b: int

    def text(self) -> str:
        return (
            f"conn:{self.content}:{self.context_a}|{self.context_b}:"
            f"{signs((self.value_a, self.value_b))}"
        )


@dataclass(frozen=True)
class ConstraintRow:
    """One equality row: sum of the atom masses at `ones` equals `rhs`."""

    label: BunchLabel | ConnectionLabel
    ones: tuple[int, ...]
    rhs: Fraction


@dataclass(frozen=True)
class MaximalCouplingTable:
    """Joint distribution of a ±1 pair maximizing Pr[equal] for given marginals.

    `cells[(s, s2)]` is Pr[first variable = s, second variable = s2] where the
    first variable has Pr[+1] = p and the second Pr[+1] = p2 as passed to
    `maximal_coupling_pair`; p_low/p_high are the sorted marginals.
    """

    p_low: Fraction
    p_high: Fraction
    cells: dict[tuple[int, int], Fraction]

    def equal_probability(self) -> Fraction:
        return self.cells[(1, 1)] + self.cells[(-1, -1)]


@dataclass(frozen=True)
class LpInstance:
    """The assembled feasibility problem MX = P, X >= 0.

    Columns are atoms, rows are ConstraintRows (bunch block first). `mode`
    is excluded from equality: two instances compare equal exactly when
    their mathematical content (atoms, rows) is identical, which is how the
    traditional/CbD coincidence on consistently connected systems is stated.
    """

    pairs: tuple[tuple[str, str], ...]
    atoms: tuple[Atom, ...]
    rows: tuple[ConstraintRow, ...]
    mode: Mode = field(compare=False)

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), len(self.atoms))

    def matrix(self) -> list[list[int]]:
        """Dense 0/1 incidence matrix, row-major."""
        width = len(self.atoms)
        out = []
        for row in self.rows:
            dense = [0] * width
            for j in row.ones:
                dense[j] = 1
            out.append(dense)
        return out

    def rhs(self) -> list[Fraction]:
        return [row.rhs for row in self.rows]

    def atom_label(self, index: int) -> str:
        return signs(self.atoms[index])

    def dump(self) -> str:
        """Debug text, one `label : rhs : indices-of-1-coefficients` per row."""
        lines = [
            f"{row.label.text()} : {format_rational(row.rhs)} : "
            + " ".join(str(j) for j in row.ones)
            for row in self.rows
        ]
        return "\n".join(lines) + "\n"


def _pair_count(sys_: System, cap_exp: int | None) -> int:
    cap = DEFAULT_ATOM_CAP_EXP if cap_exp is None else cap_exp
    m = len(sys_.memberships())
    if m > cap:
        raise SizeCapError(m, cap)
    return m


def enumerate_atoms(sys_: System, cap_exp: int | None = None) -> list[Atom]:
    """All 2^m coupling atoms in canonical order (all -1 first, all +1 last)."""
    m = _pair_count(sys_, cap_exp)
    atoms = []
    for index in range(1 << m):
        atoms.append(
            tuple(1 if (index >> (m - 1 - j)) & 1 else -1 for j in range(m))
        )
    return atoms


def _matching_indices(m: int, fixed: list[tuple[int, int]]) -> tuple[int, ...]:
    """Ascending atom indices whose bits match the (position, ±1 value) pins."""
    base = 0
    pinned = set()
    for pos, value in fixed:
        pinned.add(pos)
        if value == 1:
            base |= 1 << (m - 1 - pos)
    free = [pos for pos in range(m) if pos not in pinned]
    weights = [1 << (m - 1 - pos) for pos in free]
    f = len(free)
    out = []
    for n in range(1 << f):
        idx = base
        for k in range(f):
            if (n >> (f - 1 - k)) & 1:
                idx |= weights[k]
        out.append(idx)
    return tuple(out)


def bunch_constraints(sys_: System, cap_exp: int | None = None) -> list[ConstraintRow]:
    """One row per context per full ±1 assignment over its variables."""
    m = _pair_count(sys_, cap_exp)
    rows = []
    base = 0
    for block in sys_.contexts:
        k = len(block.variables)
        for assignment in itertools.product((1, -1), repeat=k):
            fixed = [(base + i, v) for i, v in enumerate(assignment)]
            rows.append(
                ConstraintRow(
                    BunchLabel(block.id, assignment),
                    _matching_indices(m, fixed),
                    block.probability(assignment),
                )
            )
        base += k
    return rows


def maximal_coupling_pair(p: Fraction, p2: Fraction) -> MaximalCouplingTable:
    """Maximal coupling of two ±1 variables with Pr[+1] = p and p2.

    Pr[both = +1] is min(p, p2), Pr[both = -1] is 1 - max(p, p2), the
    off-diagonal on the larger-marginal side carries |p - p2| and the other
    is zero; hence Pr[equal] = 1 - |p - p2|, the maximum achievable.
    """
    p, p2 = Fraction(p), Fraction(p2)
    for value in (p, p2):
        if not 0 <= value <= 1:
            raise ValueError(f"marginal {format_rational(value)} outside [0, 1]")
    low, high = min(p, p2), max(p, p2)
    cells = {
        (1, 1): low,
        (1, -1): p - low,
        (-1, 1): p2 - low,
        (-1, -1): 1 - high,
    }
    return MaximalCouplingTable(low, high, cells)


def connection_constraints(
    sys_: System, mode: Mode, cap_exp: int | None = None
) -> list[ConstraintRow]:
    """Four rows per unordered context pair of every connection.

    Traditional mode requires a consistently connected system and prescribes
    the identity coupling; CbD mode prescribes the maximal coupling of the
    two observed marginals.
    """
    if mode not in (TRADITIONAL, CBD):
        raise ValueError(f"unknown mode {mode!r}")
    m = _pair_count(sys_, cap_exp)
    if mode == TRADITIONAL:
        audit = audit_connectedness(sys_)
        if not audit.consistent:
            raise InconsistentSystemError(audit.violations)
    position = {pair: j for j, pair in enumerate(sys_.memberships())}
    rows = []
    for conn in connections(sys_):
        for i in range(len(conn.contexts)):
            for j in range(i + 1, len(conn.contexts)):
                ca, cb = conn.contexts[i], conn.contexts[j]
                pa = marginal_one(sys_, conn.content, ca)
                pb = marginal_one(sys_, conn.content, cb)
                table = maximal_coupling_pair(pa, pb)
                pos_a = position[(conn.content, ca)]
                pos_b = position[(conn.content, cb)]
                for sa, sb in itertools.product((1, -1), repeat=2):
                    if mode == CBD:
                        rhs = table.cells[(sa, sb)]
                    elif sa != sb:
                        rhs = Fraction(0)
                    else:
                        rhs = pa if sa == 1 else 1 - pa
                    rows.append(
                        ConstraintRow(
                            ConnectionLabel(conn.content, ca, cb, sa, sb),
                            _matching_indices(m, [(pos_a, sa), (pos_b, sb)]),
                            rhs,
                        )
                    )
    return rows


def build_lp(sys_: System, mode: Mode, cap_exp: int | None = None) -> LpInstance:
    """Assemble the full feasibility LP: bunch rows, then connection rows.

    Pure function of (system, mode): rebuilding yields an identical instance.
    """
    atoms = enumerate_atoms(sys_, cap_exp)
    rows = bunch_constraints(sys_, cap_exp) + connection_constraints(
        sys_, mode, cap_exp
    )
    return LpInstance(
        pairs=tuple(sys_.memberships()),
        atoms=tuple(atoms),
        rows=tuple(rows),
        mode=mode,
    )
