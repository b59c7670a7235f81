"""Majority-elimination exploitation of a randomness-budgeted opponent.

The exploiter knows the opponent's strategy spec (not its seed), enumerates all
possible seeds, plays against the majority prediction each round, and discards
seeds contradicted by observed play.  The potential function

    phi(t) = accumulated payoff through round t-1  -  log2 |consistent set at t|

increases by at least 1 per round in expectation, which is what forces the
average payoff to at least (n - k)/n against any k-bit opponent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional

from .game import Action, Transcript, stage_payoff
from .prng import check_seed_space
from .strategies import StrategySpec, act as strategy_act, as_seed, mirror, predicted_action

Collector = Callable[[int, Fraction], None]


@dataclass(frozen=True)
class ConsistentSet:
    """Opponent seeds still consistent with observed play, at a given round."""

    opponent: StrategySpec
    alive: tuple[int, ...]
    round: int


@dataclass(frozen=True)
class TraceRow:
    """One round of an exploiter run: prediction confidence and potential bookkeeping."""

    round: int
    p: Fraction
    alive_size: int
    payoff: int
    phi: float
    delta_phi: float


@dataclass(frozen=True)
class MatchResult:
    transcript: Transcript
    rows: tuple[TraceRow, ...]
    cumulative: int
    final_phi: float


def init_consistent(opponent: StrategySpec, cap: Optional[int] = None) -> ConsistentSet:
    """Start a match: every opponent seed is alive, round index 1."""
    space = check_seed_space(opponent.seed_len, cap)
    return ConsistentSet(opponent, tuple(range(space)), 1)


def potential(cs: ConsistentSet, accumulated_payoff: int) -> float:
    """phi at the set's current round, given payoff accumulated so far."""
    return accumulated_payoff - math.log2(len(cs.alive))


def _partition(cs: ConsistentSet, history: Transcript) -> tuple[list[int], list[int]]:
    """Split alive seeds by the opponent action they imply this round (H's, T's)."""
    heads: list[int] = []
    tails: list[int] = []
    for seed in cs.alive:
        if predicted_action(cs.opponent, seed, history, cs.round) is Action.H:
            heads.append(seed)
        else:
            tails.append(seed)
    return heads, tails


def majority_action(cs: ConsistentSet, history: Transcript) -> tuple[Action, Fraction]:
    """The opponent action the largest fraction of alive seeds implies, with that fraction.

    Under the matcher convention the exploiter then plays the same action.
    Ties predict H.
    """
    if not cs.alive:
        raise ValueError("inconsistent observation")
    heads, tails = _partition(cs, history)
    if len(heads) >= len(tails):
        return Action.H, Fraction(len(heads), len(cs.alive))
    return Action.T, Fraction(len(tails), len(cs.alive))


def filter_consistent(cs: ConsistentSet, observed: Action, history: Transcript) -> ConsistentSet:
    """Keep exactly the seeds that predicted `observed` this round; advance the round."""
    if not cs.alive:
        raise ValueError("inconsistent observation")
    heads, tails = _partition(cs, history)
    kept = heads if observed is Action.H else tails
    if not kept:
        raise ValueError("inconsistent observation")
    return ConsistentSet(cs.opponent, tuple(kept), cs.round + 1)


def expected_potential_step(p: Fraction | float) -> float:
    """Closed-form expected per-round potential increase 2p - 1 + H(p).

    At least 1 on the whole domain [1/2, 1], with equality exactly at the
    endpoints.
    """
    p = float(p)
    if not 0.5 <= p <= 1.0:
        raise ValueError("majority fraction must lie in [1/2, 1]")
    entropy = 0.0
    if 0.0 < p < 1.0:
        entropy = -p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p)
    return 2.0 * p - 1.0 + entropy


def potential_step(p: Fraction | float, won: bool) -> float:
    """Realized potential change for one round at majority fraction p.

    A win keeps the p-fraction of seeds (delta = 1 - log2 p); a loss keeps the
    rest (delta = -1 - log2(1 - p)).  Losing at p = 1 is impossible.
    """
    p = float(p)
    if not 0.5 <= p <= 1.0:
        raise ValueError("majority fraction must lie in [1/2, 1]")
    if won:
        return 1.0 - math.log2(p)
    if p == 1.0:
        raise ValueError("cannot lose against a unanimous prediction")
    return -1.0 - math.log2(1.0 - p)


# --------------------------------------------------------------------------
# Running matches
# --------------------------------------------------------------------------


@lru_cache(maxsize=1 << 16)
def _alive_after(opponent: StrategySpec, history: Transcript) -> tuple[int, ...]:
    """Alive seed tuple after the exploiter has seen `history` (its own view).

    Returns an empty tuple once observations have refuted every seed, which
    can only happen when the live opponent differs from the modeled spec.
    """
    if not history:
        return tuple(range(check_seed_space(opponent.seed_len)))
    prev = _alive_after(opponent, history[:-1])
    t = len(history)
    observed = history[-1][1]
    return tuple(
        seed
        for seed in prev
        if predicted_action(opponent, seed, history[:-1], t) is observed
    )


def exploiter_act(spec: StrategySpec, history: Transcript) -> Action:
    """Strategy-interface entry point: majority prediction given observed history.

    If the observed play has refuted the whole modeled seed space (the live
    opponent is not the spec the exploiter was built against), the prediction
    falls back to the tie default H so the strategy stays total.
    """
    opponent: StrategySpec = spec.param("opponent")
    alive = _alive_after(opponent, history)
    if not alive:
        predicted = Action.H
    else:
        t = len(history) + 1
        heads = sum(
            1 for seed in alive if predicted_action(opponent, seed, history, t) is Action.H
        )
        predicted = Action.H if 2 * heads >= len(alive) else Action.T
    return predicted.flip() if spec.param("beat") else predicted


def play_match(opponent: StrategySpec, opponent_seed, n: int, cap: Optional[int] = None) -> MatchResult:
    """One full exploiter-vs-opponent match with the per-round potential trace.

    `opponent_seed` may be a Seed, bit string, or integer.  The exploiter sits
    in seat 1 (the matcher).
    """
    seed = as_seed(opponent_seed, opponent.seed_len)
    cs = init_consistent(opponent, cap)
    history: list[tuple[Action, Action]] = []
    rows: list[TraceRow] = []
    accumulated = 0
    for t in range(1, n + 1):
        predicted, p = majority_action(cs, tuple(history))
        played = predicted  # matcher seat: play what the majority predicts
        observed = strategy_act(opponent, seed, mirror(tuple(history)), t)
        payoff = stage_payoff(played, observed)
        phi = potential(cs, accumulated)
        won = observed is predicted
        delta = potential_step(p, won)
        rows.append(TraceRow(t, p, len(cs.alive), payoff, phi, delta))
        cs = filter_consistent(cs, observed, tuple(history))
        history.append((played, observed))
        accumulated += payoff
    final_phi = potential(cs, accumulated)
    return MatchResult(tuple(history), tuple(rows), accumulated, final_phi)


def greedy_value(
    opponent: StrategySpec,
    n: int,
    deviator: int = 1,
    delta: Optional[Fraction] = None,
    collect: Optional[Collector] = None,
    cap: Optional[int] = None,
) -> Fraction:
    """Exact expected value of the majority strategy, uniform over opponent seeds.

    Walks the tree of observable opponent-action prefixes once, so the cost is
    proportional to the number of distinct prefixes rather than to the number
    of seeds times rounds.  With `deviator=2` the payoff orientation flips (the
    mismatcher's seat).  With `delta` set, returns the discounted sum
    E[sum delta**t h_t] instead of the average payoff.

    `collect(round, p)` is invoked at every tree node with the majority
    fraction, covering every round of every possible run.
    """
    if deviator not in (1, 2):
        raise ValueError("deviator seat must be 1 or 2")
    space = check_seed_space(opponent.seed_len, cap)
    weights = None
    if delta is not None:
        weights = [Fraction(0)] * (n + 1)
        w = Fraction(1)
        for t in range(1, n + 1):
            w *= delta
            weights[t] = w

    def go(alive: list[int], t: int, history: Transcript):
        if t > n:
            return 0
        heads: list[int] = []
        tails: list[int] = []
        for seed in alive:
            if predicted_action(opponent, seed, history, t) is Action.H:
                heads.append(seed)
            else:
                tails.append(seed)
        majority = Action.H if len(heads) >= len(tails) else Action.T
        if collect is not None:
            collect(t, Fraction(max(len(heads), len(tails)), len(alive)))
        play = majority if deviator == 1 else majority.flip()
        total = 0
        for branch, group in ((Action.H, heads), (Action.T, tails)):
            if not group:
                continue
            win = (play is branch) if deviator == 1 else (play is not branch)
            step = 1 if win else -1
            if weights is not None:
                step = weights[t] * step
            total += step * len(group) + go(group, t + 1, history + ((play, branch),))
        return total

    total = go(list(range(space)), 1, ())
    if delta is None:
        return Fraction(total, space * n)
    return Fraction(total, space)


def expected_average_payoff(opponent: StrategySpec, n: int, cap: Optional[int] = None) -> Fraction:
    """The exploiter's exact expected average payoff against `opponent`."""
    return greedy_value(opponent, n, cap=cap)


def guarantee(n: int, k: int) -> Fraction:
    """The lower bound (n - k)/n the potential argument certifies against k-bit opponents."""
    return Fraction(n - k, n)
