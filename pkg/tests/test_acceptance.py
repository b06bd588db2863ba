"""Acceptance suite.

Runs every acceptance criterion at its stated tolerance and prints one
PASS/FAIL line per criterion (visible with `pytest -s` or on failure).
Criteria 2, 3, and 7 share one evaluation pass over the same seeded
500-system corpus; the pass records, per system, the traditional/cbd
instance comparison and decisions (timed, for criterion 2's budget),
witness verification results, the closed-form decision with its exact
distance to the boundary, and the float-oracle verdict.
"""

import random
import time
from dataclasses import dataclass
from fractions import Fraction

import pytest

import ctxlp
from ctxlp import (
    CBD,
    CONTEXTUAL,
    FEASIBLE,
    MARGINAL,
    NONCONTEXTUAL,
    TRADITIONAL,
    Feasible,
    analyze,
    build_lp,
    chsh_criterion,
    drop_context,
    float_feasibility,
    marginal_one,
    maximal_coupling_pair,
    random_system,
    solve_feasibility,
    verify_certificate,
    verify_solution,
)
from helpers import degenerate_link_system, load_fixture

CORPUS_SEED = 7
CORPUS_SIZE = 500
BOUNDARY_STRIDE = 25
BOUNDARY_PHASE = 13
BOUNDARY_BAND = Fraction(1, 100)


def report(number: int, description: str, ok: bool) -> None:
    print(f"{'PASS' if ok else 'FAIL'} criterion {number}: {description}")
    assert ok, f"criterion {number}: {description}"


@dataclass
class CorpusEvaluation:
    identical: list[bool]
    decision_traditional: list[str]
    decision_cbd: list[str]
    witnesses_verified: list[bool]
    closed_form: list[str]
    boundary_distance: list[Fraction]
    float_verdicts: list[str]
    steered_analyze_agrees: list[bool]
    crit2_seconds: float


@pytest.fixture(scope="session")
def corpus() -> CorpusEvaluation:
    systems = [
        random_system(
            CORPUS_SEED * 1_000_003 + i,
            4,
            True,
            near_boundary=(i % BOUNDARY_STRIDE == BOUNDARY_PHASE),
        )
        for i in range(CORPUS_SIZE)
    ]

    ev = CorpusEvaluation([], [], [], [], [], [], [], [], 0.0)
    for i, sys_ in enumerate(systems):
        t0 = time.perf_counter()
        lp_t = build_lp(sys_, TRADITIONAL)
        lp_c = build_lp(sys_, CBD)
        identical = lp_t == lp_c
        matrix_t, rhs_t = lp_t.matrix(), lp_t.rhs()
        matrix_c, rhs_c = lp_c.matrix(), lp_c.rhs()
        res_t = solve_feasibility(matrix_t, rhs_t)
        res_c = solve_feasibility(matrix_c, rhs_c)
        decision_t = NONCONTEXTUAL if isinstance(res_t, Feasible) else CONTEXTUAL
        decision_c = NONCONTEXTUAL if isinstance(res_c, Feasible) else CONTEXTUAL
        ev.crit2_seconds += time.perf_counter() - t0

        ev.identical.append(identical)
        ev.decision_traditional.append(decision_t)
        ev.decision_cbd.append(decision_c)

        verified = True
        for matrix, rhs, res in ((matrix_t, rhs_t, res_t), (matrix_c, rhs_c, res_c)):
            if isinstance(res, Feasible):
                verified &= verify_solution(matrix, rhs, res.x)
            else:
                verified &= verify_certificate(matrix, rhs, res.y)
        ev.witnesses_verified.append(verified)

        chsh = chsh_criterion(sys_)
        ev.closed_form.append(chsh.decision)
        ev.boundary_distance.append(abs(chsh.statistic - 2))

        ev.float_verdicts.append(float_feasibility(matrix_c, rhs_c))

        if i % BOUNDARY_STRIDE == BOUNDARY_PHASE:
            # full analyze() path on the steered instances
            ev.steered_analyze_agrees.append(
                analyze(sys_, CBD).decision == chsh.decision
            )
    return ev


class TestCriterion1Golden:
    def test_a_pr_box_contextual_both_modes(self):
        sys_ = load_fixture("r4_pr_box.json")
        ok = True
        for mode in (TRADITIONAL, CBD):
            t0 = time.perf_counter()
            rep = analyze(sys_, mode)
            elapsed = time.perf_counter() - t0
            lp = build_lp(sys_, mode)
            y = [rep.witness.get(row.label.text(), Fraction(0)) for row in lp.rows]
            ok &= (
                rep.decision == CONTEXTUAL
                and rep.witness_kind == "certificate"
                and verify_certificate(lp.matrix(), lp.rhs(), y)
                and elapsed < 1.0
            )
        report(1, "golden (a): correlations (1,1,1,-1) contextual with verified certificate", ok)

    def test_b_aligned_noncontextual_two_atom_witness(self):
        sys_ = load_fixture("r4_aligned.json")
        t0 = time.perf_counter()
        rep = analyze(sys_, TRADITIONAL)
        elapsed = time.perf_counter() - t0
        lp = build_lp(sys_, TRADITIONAL)
        two_atom = [Fraction(0)] * 256
        two_atom[0] = Fraction(1, 2)  # every variable -1
        two_atom[255] = Fraction(1, 2)  # every variable +1
        ok = (
            rep.decision == NONCONTEXTUAL
            and verify_solution(lp.matrix(), lp.rhs(), two_atom)
            and elapsed < 1.0
        )
        report(1, "golden (b): correlations (1,1,1,1) noncontextual, two-atom witness exact", ok)

    def test_c_tsirelson_stand_in(self):
        sys_ = load_fixture("r4_near_tsirelson.json")
        t0 = time.perf_counter()
        rep = analyze(sys_, CBD)
        elapsed = time.perf_counter() - t0
        chsh = chsh_criterion(sys_)
        ok = (
            rep.decision == CONTEXTUAL
            and chsh.statistic == Fraction(14, 5)
            and elapsed < 1.0
        )
        report(1, "golden (c): correlations (7/10,...,-7/10) contextual, statistic exactly 14/5", ok)


class TestCriterion2Specialization:
    def test_instances_identical_and_decisions_agree(self, corpus):
        identical = all(corpus.identical)
        agree = corpus.decision_traditional == corpus.decision_cbd
        in_budget = corpus.crit2_seconds < 60.0
        report(
            2,
            f"specialization on {CORPUS_SIZE} systems: instances identical={identical}, "
            f"decisions agree={agree}, runtime {corpus.crit2_seconds:.1f}s < 60s",
            identical and agree and in_budget,
        )


class TestCriterion3ClosedFormEquivalence:
    def test_closed_form_matches_lp(self, corpus):
        matches = corpus.closed_form == corpus.decision_cbd
        boundary_count = sum(
            1 for d in corpus.boundary_distance if d <= BOUNDARY_BAND
        )
        steered_ok = corpus.steered_analyze_agrees and all(
            corpus.steered_analyze_agrees
        )
        report(
            3,
            f"closed form == LP on {CORPUS_SIZE} systems ({matches}); "
            f"{boundary_count} instances within 1/100 of the boundary (need >= 20)",
            matches and boundary_count >= 20 and steered_ok,
        )


class TestCriterion4WitnessAudit:
    def test_all_witnesses_verify(self, corpus):
        # Every other analyze() in the package verifies its witness before
        # returning and raises otherwise, so the corpus solves recorded here
        # are the only ones needing an explicit audit.
        ok = all(corpus.witnesses_verified)
        report(4, f"all {2 * CORPUS_SIZE} corpus witnesses pass their verifier", ok)


class TestCriterion5DegenerateConnections:
    def test_deterministic_side_implies_cbd_noncontextual(self):
        ok = True
        for seed in range(50):
            sys_ = degenerate_link_system(seed)
            assert ctxlp.validate(sys_) == []
            # construction check: every connection pair has a deterministic side
            for conn in ctxlp.connections(sys_):
                for i in range(len(conn.contexts)):
                    for j in range(i + 1, len(conn.contexts)):
                        pa = marginal_one(sys_, conn.content, conn.contexts[i])
                        pb = marginal_one(sys_, conn.content, conn.contexts[j])
                        assert pa in (0, 1) or pb in (0, 1)
            ok &= analyze(sys_, CBD).decision == NONCONTEXTUAL
        report(5, "50 systems with a deterministic side per connection: cbd noncontextual", ok)


class TestCriterion6DeletionMonotonicity:
    def test_deleting_a_context_preserves_noncontextuality(self):
        rng = random.Random(41)
        found = 0
        seed = 0
        ok = True
        while found < 100:
            seed += 1
            assert seed < 600, "generator failed to supply noncontextual systems"
            rank = 3 if seed % 4 else 4
            sys_ = random_system(seed, rank, consistent=bool(seed % 2))
            if analyze(sys_, CBD).decision != NONCONTEXTUAL:
                continue
            found += 1
            victim = rng.choice([b.id for b in sys_.contexts])
            smaller = drop_context(sys_, victim)
            ok &= analyze(smaller, CBD).decision == NONCONTEXTUAL
        report(6, "context deletion kept 100 noncontextual systems noncontextual", ok)


class TestCriterion7FloatOracleAgreement:
    def test_no_hard_contradictions(self, corpus):
        contradictions = 0
        marginal = 0
        for verdict, decision in zip(corpus.float_verdicts, corpus.decision_cbd):
            if verdict == MARGINAL:
                marginal += 1
                continue
            if (verdict == FEASIBLE) != (decision == NONCONTEXTUAL):
                contradictions += 1
        report(
            7,
            f"float oracle vs exact on {CORPUS_SIZE} systems: "
            f"{contradictions} contradictions, {marginal} marginal deferrals",
            contradictions == 0,
        )


class TestCriterion8MaximalCouplingIdentities:
    def test_thousand_random_pairs(self):
        rng = random.Random(83)
        ok = True
        for _ in range(1000):
            da, db = rng.randint(1, 1000), rng.randint(1, 1000)
            p = Fraction(rng.randint(0, da), da)
            p2 = Fraction(rng.randint(0, db), db)
            table = maximal_coupling_pair(p, p2)
            cells = table.cells
            ok &= all(v >= 0 for v in cells.values())
            ok &= sum(cells.values()) == 1
            ok &= table.equal_probability() == 1 - abs(p - p2)
            ok &= cells[(1, 1)] == min(p, p2)
            ok &= cells[(1, 1)] + cells[(1, -1)] == p
            ok &= cells[(1, 1)] + cells[(-1, 1)] == p2
        report(8, "maximal-coupling identities exact on 1000 random rational pairs", ok)
