"""Independent cross-checks for the exact decision pipeline.

`float_feasibility` is a floating-point phase-1 simplex of separate lineage
from the exact solver (numpy arrays, Dantzig pricing with a Bland fallback,
tolerance-based comparisons; no shared pivoting code). It shares only the
LP builder: builder bugs are caught by golden row dumps, solver bugs by
disagreement between the two solvers. Verdicts inside the tolerance band
are reported as "marginal" and defer to exact arithmetic; floats are a
cross-check here, never ground truth.

`run_corpus` evaluates a seeded generator corpus with every applicable
decider (exact in both modes, the closed form on cyclic rank-4 consistent
systems, and the float oracle) and aggregates agreement statistics.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

from .analysis import (
    NONCONTEXTUAL,
    analyze,
    chsh_criterion,
)
from .coupling import CBD, TRADITIONAL, build_lp
from .generate import random_system
from .rational import format_rational
from .system import audit_connectedness

FEASIBLE = "feasible"
INFEASIBLE = "infeasible"
MARGINAL = "marginal"

_PIVOT_EPS = 1e-11
_COST_EPS = 1e-12
_STALL_LIMIT = 16

DEFAULT_TOLERANCE = 1e-9


def float_feasibility(
    matrix: Sequence[Sequence[Union[int, Fraction]]],
    rhs: Sequence[Union[int, Fraction]],
    tolerance: float = DEFAULT_TOLERANCE,
) -> str:
    """Floating-point feasibility verdict: feasible, infeasible, or marginal.

    Runs a dense phase-1 simplex in float64 and classifies by the optimum w
    of the artificial sum: w <= 0 is feasible, 0 < w <= tolerance is
    marginal (too close to call, defer to the exact solver), larger is
    infeasible. Iteration overruns also report marginal.
    """
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    a = np.asarray(matrix, dtype=float)
    if a.ndim != 2 or a.size == 0:
        raise ValueError("matrix must be a nonempty 2-d array")
    nrows, ncols = a.shape
    b = np.asarray([float(v) for v in rhs], dtype=float)
    if b.shape != (nrows,):
        raise ValueError(f"rhs has {b.size} entries for {nrows} rows")

    flip = b < 0
    a = np.where(flip[:, None], -a, a)
    b = np.where(flip, -b, b)

    width = ncols + nrows + 1
    tableau = np.zeros((nrows, width))
    tableau[:, :ncols] = a
    tableau[:, ncols : ncols + nrows] = np.eye(nrows)
    tableau[:, -1] = b
    cost = np.zeros(width)
    cost[:ncols] = -a.sum(axis=0)
    cost[-1] = -b.sum()

    basis = np.arange(ncols, ncols + nrows)
    in_basis = np.zeros(ncols, dtype=bool)
    max_iterations = 200 * (nrows + 8)
    stall = 0
    previous_value = cost[-1]

    for _ in range(max_iterations):
        reduced = cost[:ncols].copy()
        reduced[in_basis] = 0.0
        candidates = np.flatnonzero(reduced < -_COST_EPS)
        if candidates.size == 0:
            break
        if stall > _STALL_LIMIT:
            enter = int(candidates[0])
        else:
            enter = int(candidates[np.argmin(reduced[candidates])])

        column = tableau[:, enter]
        rows = np.flatnonzero(column > _PIVOT_EPS)
        if rows.size == 0:
            return MARGINAL
        ratios = tableau[rows, -1] / column[rows]
        best = ratios.min()
        tied = rows[np.flatnonzero(ratios <= best + _PIVOT_EPS)]
        leave = int(tied[np.argmin(basis[tied])])

        pivot_row = tableau[leave] / tableau[leave, enter]
        tableau -= np.outer(tableau[:, enter], pivot_row)
        tableau[leave] = pivot_row
        cost = cost - cost[enter] * pivot_row

        old = basis[leave]
        if old < ncols:
            in_basis[old] = False
        basis[leave] = enter
        in_basis[enter] = True

        if cost[-1] > previous_value + _COST_EPS:
            stall = 0
        else:
            stall += 1
        previous_value = cost[-1]
    else:
        return MARGINAL

    optimum = -cost[-1]
    if optimum <= 0:
        return FEASIBLE
    if optimum <= tolerance:
        return MARGINAL
    return INFEASIBLE


# ---------------------------------------------------------------------------
# Corpus cross-checking
# ---------------------------------------------------------------------------

_SHAPE = re.compile(r"^rank([0-9]+)-(consistent|inconsistent)$")

# Steering: every 25th corpus index of a rank4-consistent corpus is generated
# near the closed-form decision boundary, so a 500-system corpus carries 20
# boundary instances.
_BOUNDARY_STRIDE = 25
_BOUNDARY_PHASE = 13


def parse_shape(shape: str) -> tuple[int, bool]:
    match = _SHAPE.match(shape)
    if not match:
        raise ValueError(
            f"shape must look like 'rank4-consistent', got {shape!r}"
        )
    rank = int(match.group(1))
    if rank < 2:
        raise ValueError(f"shape rank must be at least 2, got {rank}")
    return rank, match.group(2) == "consistent"


@dataclass(frozen=True)
class CorpusEntry:
    index: int
    consistent: bool
    exact_cbd: str
    exact_traditional: str | None
    instances_identical: bool | None
    closed_form: str | None
    boundary_distance: Fraction | None
    float_verdict: str

    def to_json_dict(self) -> dict:
        return {
            "index": self.index,
            "consistent": self.consistent,
            "exact_cbd": self.exact_cbd,
            "exact_traditional": self.exact_traditional,
            "instances_identical": self.instances_identical,
            "closed_form": self.closed_form,
            "boundary_distance": (
                None
                if self.boundary_distance is None
                else format_rational(self.boundary_distance)
            ),
            "float_verdict": self.float_verdict,
        }


@dataclass(frozen=True)
class CrossCheckReport:
    seed: int
    count: int
    shape: str
    tolerance: float
    entries: tuple[CorpusEntry, ...]
    disagreements: tuple[dict, ...]
    marginal_count: int = field(default=0)

    @property
    def clean(self) -> bool:
        return not self.disagreements

    def to_json_dict(self) -> dict:
        return {
            "report_version": 1,
            "seed": self.seed,
            "count": self.count,
            "shape": self.shape,
            "tolerance": self.tolerance,
            "marginal_count": self.marginal_count,
            "disagreements": list(self.disagreements),
            "entries": [entry.to_json_dict() for entry in self.entries],
        }


def run_corpus(
    seed: int,
    count: int,
    shape: str,
    tolerance: float = DEFAULT_TOLERANCE,
) -> CrossCheckReport:
    """Evaluate a deterministic generator corpus with every applicable decider.

    Exact cbd analysis always runs; traditional analysis and the
    instance-identity check run on consistently connected systems; the
    closed form runs on rank-4 consistent systems (with the exact distance
    of the statistic to its boundary recorded); the float oracle runs on the
    cbd instance. Disagreements collect closed-form-vs-exact mismatches and
    hard float-vs-exact contradictions outside the marginal band.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    rank, consistent = parse_shape(shape)

    entries: list[CorpusEntry] = []
    disagreements: list[dict] = []
    marginal_count = 0
    for index in range(count):
        steer = (
            consistent
            and rank == 4
            and index % _BOUNDARY_STRIDE == _BOUNDARY_PHASE
        )
        sys_ = random_system(
            seed * 1_000_003 + index, rank, consistent, near_boundary=steer
        )
        audit = audit_connectedness(sys_)

        lp_cbd = build_lp(sys_, CBD)
        report_cbd = analyze(sys_, CBD)
        exact_traditional = None
        instances_identical = None
        if audit.consistent:
            lp_traditional = build_lp(sys_, TRADITIONAL)
            instances_identical = lp_traditional == lp_cbd
            exact_traditional = analyze(sys_, TRADITIONAL).decision
            if exact_traditional != report_cbd.decision:
                disagreements.append(
                    {
                        "index": index,
                        "kind": "traditional-vs-cbd",
                        "traditional": exact_traditional,
                        "cbd": report_cbd.decision,
                    }
                )

        closed_form = None
        boundary_distance = None
        if rank == 4 and audit.consistent:
            chsh = chsh_criterion(sys_)
            closed_form = chsh.decision
            boundary_distance = abs(chsh.statistic - 2)
            if closed_form != report_cbd.decision:
                disagreements.append(
                    {
                        "index": index,
                        "kind": "closed-form-vs-exact",
                        "closed_form": closed_form,
                        "exact": report_cbd.decision,
                        "statistic_boundary_distance": format_rational(
                            boundary_distance
                        ),
                    }
                )

        float_verdict = float_feasibility(lp_cbd.matrix(), lp_cbd.rhs(), tolerance)
        if float_verdict == MARGINAL:
            marginal_count += 1
        else:
            exact_feasible = report_cbd.decision == NONCONTEXTUAL
            float_feasible = float_verdict == FEASIBLE
            if exact_feasible != float_feasible:
                disagreements.append(
                    {
                        "index": index,
                        "kind": "float-vs-exact",
                        "float": float_verdict,
                        "exact": report_cbd.decision,
                        "statistic_boundary_distance": (
                            None
                            if boundary_distance is None
                            else format_rational(boundary_distance)
                        ),
                    }
                )

        entries.append(
            CorpusEntry(
                index=index,
                consistent=audit.consistent,
                exact_cbd=report_cbd.decision,
                exact_traditional=exact_traditional,
                instances_identical=instances_identical,
                closed_form=closed_form,
                boundary_distance=boundary_distance,
                float_verdict=float_verdict,
            )
        )

    return CrossCheckReport(
        seed=seed,
        count=count,
        shape=shape,
        tolerance=tolerance,
        entries=tuple(entries),
        disagreements=tuple(disagreements),
        marginal_count=marginal_count,
    )
