"""Stage game primitives: the two-action alphabet, transcripts, and payoff sums.

All aggregation is exact: integer payoffs and `fractions.Fraction` averages, so
equilibrium-gap comparisons downstream never need a float tolerance.
"""

from __future__ import annotations

from enum import Enum
from fractions import Fraction
from typing import Union

RationalLike = Union[Fraction, int, str]


class Action(Enum):
    """One play of the stage game."""

    H = "H"
    T = "T"

    def flip(self) -> "Action":
        return Action.T if self is Action.H else Action.H

    def __repr__(self) -> str:
        return self.value


Round = tuple[Action, Action]
Transcript = tuple[Round, ...]


def bit_to_action(bit: int) -> Action:
    """Seed/stream bit to action: 1 plays H, 0 plays T."""
    return Action.H if bit else Action.T


def action_to_bit(a: Action) -> int:
    return 1 if a is Action.H else 0


def as_fraction(x: RationalLike) -> Fraction:
    """Coerce ints, 'p/q' strings, or Fractions to an exact rational."""
    return x if isinstance(x, Fraction) else Fraction(x)


def stage_payoff(a: Action, b: Action) -> int:
    """Player 1's payoff for a single round: +1 on matching plays, -1 otherwise.

    Player 1 is the matcher; player 2's payoff is the negation.
    """
    return 1 if a is b else -1


def cumulative_payoff(t: Transcript) -> int:
    """Player 1's total payoff over the whole transcript."""
    return sum(stage_payoff(a, b) for a, b in t)


def average_payoff(t: Transcript) -> Fraction:
    """Cumulative payoff divided by the number of rounds, exact."""
    if len(t) == 0:
        raise ValueError("zero-length game")
    return Fraction(cumulative_payoff(t), len(t))


def discounted_payoff(t: Transcript, delta: RationalLike) -> Fraction:
    """Sum of delta**round * stage payoff, with round 1 weighted delta**1.

    `delta` must be a rational in (0, 1); pass a Fraction or a 'p/q' string to
    keep the result exact.
    """
    d = as_fraction(delta)
    if not 0 < d < 1:
        raise ValueError("invalid discount factor")
    total = Fraction(0)
    weight = Fraction(1)
    for a, b in t:
        weight *= d
        total += weight * stage_payoff(a, b)
    return total


def parse_transcript(text: str) -> Transcript:
    """Parse "HH,HT,TT" (player 1's symbol first in each pair)."""
    text = text.strip()
    if not text:
        return ()
    rounds = []
    for token in text.split(","):
        token = token.strip()
        if len(token) != 2 or any(c not in "HT" for c in token):
            raise ValueError(f"malformed transcript round: {token!r}")
        rounds.append((Action(token[0]), Action(token[1])))
    return tuple(rounds)


def format_transcript(t: Transcript) -> str:
    return ",".join(a.value + b.value for a, b in t)
