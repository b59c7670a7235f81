"""Reductions between game payoff and stream distinguishing/prediction.

`payoff_to_distinguisher` turns a generator-backed player's payoff advantage
into an exact single-round distinguishing advantage; `predictor_strategy` turns
a next-bit predictor into an adaptive strategy whose payoff equals twice its
prediction advantage.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

from .game import Action, stage_payoff
from .prng import GeneratorSpec, PREDICTORS, check_seed_space, int_to_bits
from .strategies import (
    Seed,
    StrategySpec,
    generator_backed,
    oblivious_actions,
    predictor_backed,
    simulate,
)


def per_round_payoffs(
    s: StrategySpec,
    g: GeneratorSpec,
    n: int,
    cap: Optional[int] = None,
) -> list[Fraction]:
    """Exact per-round payoffs E[A_i] of the generator-backed seat-1 player against s.

    A_i takes values in {-1, +1}; the equivalent {0, 1} win-indicator
    normalization is Pr[seat 1 wins round i] = (E[A_i] + 1)/2, so both carry
    the same distinguishing advantage |E[A_i]| / 2.
    """
    if g.out_len < n:
        raise ValueError("generator stream too short for this horizon")
    player = generator_backed(g)
    space_g = check_seed_space(g.seed_len, cap)
    space_s = check_seed_space(s.seed_len, cap)
    sums = [0] * n
    for vg in range(space_g):
        for vs in range(space_s):
            transcript = simulate(player, Seed.from_int(vg, g.seed_len), s, Seed.from_int(vs, s.seed_len), n)
            for i, (a, b) in enumerate(transcript):
                sums[i] += stage_payoff(a, b)
    pairs = space_g * space_s
    return [Fraction(total, pairs) for total in sums]


def round_win_probabilities(
    s: StrategySpec,
    g: GeneratorSpec,
    n: int,
    cap: Optional[int] = None,
) -> list[Fraction]:
    """Per-round probabilities that the generator-backed player wins: (E[A_i] + 1)/2."""
    return [(e + 1) / 2 for e in per_round_payoffs(s, g, n, cap=cap)]


def payoff_to_distinguisher(
    s: StrategySpec,
    g: GeneratorSpec,
    n: int,
    delta: Optional[Fraction] = None,
    cap: Optional[int] = None,
) -> tuple[int, Fraction]:
    """Best single-round distinguishing advantage of playing generator g against s.

    The generator-backed player sits in seat 1.  The returned advantage is
    max_i |E[A_i]| / 2, which equals |Pr[test accepts G] - 1/2| for the test
    that outputs 1 iff seat 1 wins round i: against true uniform bits that
    round is a coin flip.  Since the maximum dominates the mean, the advantage
    is at least |E[U]| / 2.

    With `delta` set, each round's payoff is weighted delta**i first.
    """
    per_round = per_round_payoffs(s, g, n, cap=cap)
    if delta is not None:
        weight = Fraction(1)
        for i in range(n):
            weight *= delta
            per_round[i] *= weight
    best = max(range(n), key=lambda i: (abs(per_round[i]), -i))
    return best + 1, abs(per_round[best]) / 2


def predictor_strategy(predictor: str, beat: bool = False) -> StrategySpec:
    """An adaptive zero-seed strategy that plays its predictor's guess each round.

    With beat=True it plays the flip of the guess instead (seat 2's winning
    reply).  Per round, the matcher's payoff is +1 exactly when the guess is
    right, so the expected average payoff is 2q - 1 at prediction accuracy q.
    """
    return predictor_backed(predictor, beat=beat)


def predictor_accuracy(
    predictor: str,
    opponent: StrategySpec,
    n: int,
    cap: Optional[int] = None,
) -> Fraction:
    """Exact per-round prediction accuracy of a predictor against an oblivious opponent.

    Averaged over the opponent's uniform seed and all n rounds.
    """
    if not opponent.oblivious:
        raise ValueError("accuracy is defined against oblivious opponents")
    fn = PREDICTORS[predictor]
    space = check_seed_space(opponent.seed_len, cap)
    correct = 0
    for value in range(space):
        seq = oblivious_actions(opponent, int_to_bits(value, opponent.seed_len), n)
        stream = tuple(1 if a is Action.H else 0 for a in seq)
        for i in range(n):
            if fn(stream[:i]) == stream[i]:
                correct += 1
    return Fraction(correct, space * n)
