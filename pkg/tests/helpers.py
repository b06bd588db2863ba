"""Shared builders for the test suite."""

from fractions import Fraction
from pathlib import Path

import ctxlp

DATA = Path(__file__).parent / "data"

R4_LAYOUT = [
    ("c1", ("q1", "q2")),
    ("c2", ("q2", "q3")),
    ("c3", ("q3", "q4")),
    ("c4", ("q4", "q1")),
]


def load_fixture(name: str) -> ctxlp.System:
    return ctxlp.parse_system((DATA / name).read_text())


def r4_system(correlations, means=(0, 0, 0, 0)) -> ctxlp.System:
    """Cyclic four-variable system from per-context correlations and per-content means."""
    mean_of = {f"q{i + 1}": Fraction(m) for i, m in enumerate(means)}
    moments = {
        cid: (mean_of[qa], mean_of[qb], Fraction(rho))
        for (cid, (qa, qb)), rho in zip(R4_LAYOUT, correlations)
    }
    return ctxlp.from_moments(ctxlp.MomentSpec(moments), R4_LAYOUT)


def uniform_correlated_block(cid="c1", variables=("q1", "q2")) -> ctxlp.ContextBlock:
    return ctxlp.ContextBlock(
        cid, variables, {(1, 1): Fraction(1, 2), (-1, -1): Fraction(1, 2)}
    )


def degenerate_link_system(seed: int) -> ctxlp.System:
    """Cyclic system in which every connection has one deterministic side.

    Content i is made deterministic in context i, so each connection
    (content i lives in contexts i-1 and i) includes a marginal of 0 or 1;
    the partner variable keeps a free distribution.
    """
    import random

    rng = random.Random(f"degenerate:{seed}")
    rank = rng.choice((2, 3, 4, 5))
    layout = [
        (f"c{i + 1}", (f"q{i + 1}", f"q{(i + 1) % rank + 1}")) for i in range(rank)
    ]
    moments = {}
    for cid, _pair in layout:
        fixed = Fraction(rng.choice((1, -1)))
        partner_mean = Fraction(rng.randint(-8, 8), 8)
        moments[cid] = (fixed, partner_mean, fixed * partner_mean)
    return ctxlp.from_moments(ctxlp.MomentSpec(moments), layout)
