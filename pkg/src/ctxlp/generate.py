"""Seeded generation of cyclic test systems.

`random_system` emits rank-n cyclic systems (n contents, n two-variable
contexts, content i shared by contexts i-1 and i) with exact rational
probabilities, built through the moment parameterization so every context
joint is valid by construction. Output is a pure function of the arguments;
property suites and the cross-check corpus rely on that.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .system import MomentSpec, System, from_moments

# Mean numerators are drawn over /16 and kept below 1 in absolute value so
# every correlation interval has width >= 1/2; correlations are placed on a
# 33-point grid inside their exact admissible interval.
_MEAN_DENOM = 16
_MEAN_SPAN = 12
_CORR_STEPS = 32


def _cycle_layout(rank: int) -> list[tuple[str, tuple[str, str]]]:
    return [
        (f"c{i + 1}", (f"q{i + 1}", f"q{(i + 1) % rank + 1}"))
        for i in range(rank)
    ]


def _correlation_between(
    rng: random.Random, mean_a: Fraction, mean_b: Fraction
) -> Fraction:
    low = -1 + abs(mean_a + mean_b)
    high = 1 - abs(mean_a - mean_b)
    step = Fraction(rng.randint(0, _CORR_STEPS), _CORR_STEPS)
    return low + (high - low) * step


def random_system(
    seed: int,
    rank: int,
    consistent: bool,
    *,
    near_boundary: bool = False,
) -> System:
    """Deterministic rank-`rank` cyclic system for the given seed.

    With `consistent=True` every content gets one mean shared by both of its
    contexts, so the connectedness audit passes by construction; otherwise
    each (content, context) slot draws its own mean. `near_boundary=True`
    (rank 4, consistent only) instead emits uniform-marginal systems whose
    closed-form statistic lands within 1/100 of the decision boundary,
    including exactly on it.
    """
    if rank < 2:
        raise ValueError(f"rank must be at least 2, got {rank}")
    rng = random.Random(f"ctxlp:{seed}:{rank}:{int(consistent)}:{int(near_boundary)}")
    layout = _cycle_layout(rank)

    if near_boundary:
        if rank != 4 or not consistent:
            raise ValueError("near_boundary generation needs rank=4, consistent=True")
        # Statistic of (+a, +a, +a, -a) up to rotation/global flip is 4a;
        # 4a = 2 + offset/400 stays within 1/100 of the boundary.
        offset = rng.randint(-4, 4)
        amplitude = (2 + Fraction(offset, 400)) / 4
        negative_at = rng.randrange(4)
        flip = rng.choice((1, -1))
        moments = {}
        for i, (cid, _) in enumerate(layout):
            rho = -flip * amplitude if i == negative_at else flip * amplitude
            moments[cid] = (Fraction(0), Fraction(0), rho)
        return from_moments(MomentSpec(moments), layout)

    if consistent:
        mean_of = {
            f"q{i + 1}": Fraction(rng.randint(-_MEAN_SPAN, _MEAN_SPAN), _MEAN_DENOM)
            for i in range(rank)
        }
        endpoint_means = {
            (cid, q): mean_of[q] for cid, pair in layout for q in pair
        }
    else:
        endpoint_means = {
            (cid, q): Fraction(rng.randint(-_MEAN_SPAN, _MEAN_SPAN), _MEAN_DENOM)
            for cid, pair in layout
            for q in pair
        }

    moments = {}
    for cid, (qa, qb) in layout:
        mean_a = endpoint_means[(cid, qa)]
        mean_b = endpoint_means[(cid, qb)]
        moments[cid] = (mean_a, mean_b, _correlation_between(rng, mean_a, mean_b))
    return from_moments(MomentSpec(moments), layout)
