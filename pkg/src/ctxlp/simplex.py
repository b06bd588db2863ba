"""Exact rational feasibility solver for {MX = P, X >= 0}.

Phase-1 simplex with one artificial variable per row, Bland's anti-cycling
pivot rule, and a dense tableau of exact rationals. There is no phase 2: the
only question is feasibility, answered with a machine-checkable witness
either way.

  * Feasible: the structural solution X read off the final basis, satisfying
    MX = P, X >= 0 exactly.
  * Infeasible: a Farkas certificate y with yM <= 0 componentwise and
    yP > 0, read off the artificial columns' reduced costs at the phase-1
    optimum (those columns hold the inverse basis, so the dual prices are
    available without extra work).

Pivot arithmetic uses gmpy2's rational type internally: it canonicalizes
after every operation, which both bounds bit growth and is severalfold
faster than `fractions.Fraction` on tableaus this dense. All inputs and
witnesses at the module boundary are `Fraction`.

Determinism: Bland's rule (smallest eligible index enters; ties in the ratio
test broken by smallest basic index) makes the entire pivot path, and hence
the witness, a pure function of (M, P). Artificial variables never re-enter
the basis once they leave; redundant rows simply keep their artificial basic
at level zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from gmpy2 import mpq


@dataclass(frozen=True)
class Feasible:
    """A coupling distribution over atoms: M x = P with x >= 0."""

    x: tuple[Fraction, ...]


@dataclass(frozen=True)
class Infeasible:
    """A Farkas certificate: y M <= 0 componentwise and y P > 0."""

    y: tuple[Fraction, ...]


FeasibilityResult = Union[Feasible, Infeasible]


def _check_dimensions(matrix: Sequence[Sequence], rhs: Sequence) -> tuple[int, int]:
    nrows = len(matrix)
    if nrows == 0:
        raise ValueError("matrix needs at least one row")
    ncols = len(matrix[0])
    if ncols == 0:
        raise ValueError("matrix needs at least one column")
    if any(len(row) != ncols for row in matrix):
        raise ValueError("ragged matrix")
    if len(rhs) != nrows:
        raise ValueError(f"rhs has {len(rhs)} entries for {nrows} rows")
    return nrows, ncols


def _fraction(value: mpq) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


def solve_feasibility(
    matrix: Sequence[Sequence[Union[int, Fraction]]],
    rhs: Sequence[Union[int, Fraction]],
) -> FeasibilityResult:
    """Decide {MX = P, X >= 0} exactly, returning a machine-checkable witness."""
    nrows, ncols = _check_dimensions(matrix, rhs)
    zero = mpq(0)
    one = mpq(1)

    # Normalize rows to nonnegative rhs; remember signs to map the
    # certificate back to the original row space.
    sign = [1 if Fraction(b) >= 0 else -1 for b in rhs]
    width = ncols + nrows + 1
    tableau: list[list[mpq]] = []
    for i in range(nrows):
        s = sign[i]
        row = [mpq(v) if s == 1 else -mpq(v) for v in matrix[i]]
        row.extend(one if k == i else zero for k in range(nrows))
        row.append(mpq(rhs[i]) if s == 1 else -mpq(rhs[i]))
        tableau.append(row)

    # Reduced-cost row for minimizing the artificial sum: with the
    # artificial basis, cost_j = -(column sum) for structural columns and 0
    # for artificials; the last entry tracks minus the objective value.
    obj = [zero] * width
    for row in tableau:
        for j in range(width):
            if row[j]:
                obj[j] -= row[j]
    for j in range(ncols, ncols + nrows):
        obj[j] += one

    basis = list(range(ncols, ncols + nrows))
    structural_in_basis = bytearray(ncols)

    while True:
        enter = -1
        for j in range(ncols):
            if not structural_in_basis[j] and obj[j] < 0:
                enter = j
                break
        if enter < 0:
            break

        leave = -1
        best = None
        for i in range(nrows):
            a = tableau[i][enter]
            if a > 0:
                ratio = tableau[i][-1] / a
                if best is None or ratio < best or (
                    ratio == best and basis[i] < basis[leave]
                ):
                    best = ratio
                    leave = i
        if leave < 0:
            raise RuntimeError("phase-1 objective unbounded; inputs are not an LP")

        # Zeros stay frequent in these 0/1-structured tableaus; skipping them
        # in the elimination saves a large share of the rational multiplies.
        pivot = tableau[leave][enter]
        pivot_row = [v / pivot if v else v for v in tableau[leave]]
        tableau[leave] = pivot_row
        for i in range(nrows):
            if i != leave:
                f = tableau[i][enter]
                if f:
                    tableau[i] = [
                        a - f * b if b else a for a, b in zip(tableau[i], pivot_row)
                    ]
        f = obj[enter]
        if f:
            obj = [a - f * b if b else a for a, b in zip(obj, pivot_row)]

        old = basis[leave]
        if old < ncols:
            structural_in_basis[old] = 0
        basis[leave] = enter
        structural_in_basis[enter] = 1

    optimum = -obj[-1]
    if optimum > 0:
        # Dual prices: the reduced cost of artificial i is 1 - y_i.
        y = [one - obj[ncols + i] for i in range(nrows)]
        certificate = tuple(
            _fraction(y[i]) if sign[i] == 1 else _fraction(-y[i])
            for i in range(nrows)
        )
        return Infeasible(certificate)

    x = [Fraction(0)] * ncols
    for i, var in enumerate(basis):
        if var < ncols:
            x[var] = _fraction(tableau[i][-1])
    return Feasible(tuple(x))


def verify_solution(
    matrix: Sequence[Sequence[Union[int, Fraction]]],
    rhs: Sequence[Union[int, Fraction]],
    x: Sequence[Union[int, Fraction]],
) -> bool:
    """True iff M x = P exactly and x >= 0. Plain arithmetic, no solver state."""
    nrows, ncols = _check_dimensions(matrix, rhs)
    if len(x) != ncols:
        raise ValueError(f"solution has {len(x)} entries for {ncols} columns")
    values = [Fraction(v) for v in x]
    if any(v < 0 for v in values):
        return False
    support = [(j, v) for j, v in enumerate(values) if v]
    for i in range(nrows):
        row = matrix[i]
        total = sum((row[j] * v for j, v in support), Fraction(0))
        if total != Fraction(rhs[i]):
            return False
    return True


def verify_certificate(
    matrix: Sequence[Sequence[Union[int, Fraction]]],
    rhs: Sequence[Union[int, Fraction]],
    y: Sequence[Union[int, Fraction]],
) -> bool:
    """True iff y M <= 0 componentwise and y P > 0, exactly."""
    nrows, ncols = _check_dimensions(matrix, rhs)
    if len(y) != nrows:
        raise ValueError(f"certificate has {len(y)} entries for {nrows} rows")
    weights = [Fraction(v) for v in y]
    combined = [Fraction(0)] * ncols
    for i, w in enumerate(weights):
        if not w:
            continue
        row = matrix[i]
        for j in range(ncols):
            if row[j]:
                combined[j] += w * row[j]
    if any(c > 0 for c in combined):
        return False
    gain = sum((w * Fraction(rhs[i]) for i, w in enumerate(weights) if w), Fraction(0))
    return gain > 0
