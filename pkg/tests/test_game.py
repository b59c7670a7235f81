"""Stage payoffs, transcript aggregation, and serialization."""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pennylab.game import (
    Action,
    average_payoff,
    cumulative_payoff,
    discounted_payoff,
    format_transcript,
    parse_transcript,
    stage_payoff,
)

H, T = Action.H, Action.T

transcripts = st.lists(
    st.tuples(st.sampled_from([H, T]), st.sampled_from([H, T])), max_size=12
).map(tuple)


def test_stage_payoff_matrix():
    assert stage_payoff(H, H) == 1
    assert stage_payoff(H, T) == -1
    assert stage_payoff(T, H) == -1
    assert stage_payoff(T, T) == 1


def test_flip_is_an_involution():
    assert H.flip() is T
    assert T.flip() is H
    assert H.flip().flip() is H


def test_cumulative_examples():
    assert cumulative_payoff(((H, H), (T, T))) == 2
    assert cumulative_payoff(((H, T), (T, H))) == -2
    assert cumulative_payoff(((H, H), (H, T), (T, T))) == 1


def test_average_examples():
    assert average_payoff(((H, H), (H, T))) == 0
    assert average_payoff(((H, H), (H, H), (H, T))) == Fraction(1, 3)


def test_average_rejects_empty_transcript():
    with pytest.raises(ValueError, match="zero-length game"):
        average_payoff(())


def test_discounted_examples():
    assert discounted_payoff(((H, H),), Fraction(1, 2)) == Fraction(1, 2)
    assert discounted_payoff(((H, T), (H, H)), Fraction(1, 2)) == Fraction(-1, 4)
    assert discounted_payoff(((H, H), (H, H)), Fraction(9, 10)) == Fraction(171, 100)


@pytest.mark.parametrize("delta", [0, 1, Fraction(3, 2), Fraction(-1, 2)])
def test_discounted_rejects_bad_delta(delta):
    with pytest.raises(ValueError, match="invalid discount factor"):
        discounted_payoff(((H, H),), delta)


@given(transcripts)
def test_zero_sum_and_antisymmetry(t):
    p2 = sum(-stage_payoff(a, b) for a, b in t)
    assert cumulative_payoff(t) + p2 == 0
    for a, b in t:
        assert stage_payoff(a, b) == -stage_payoff(a, b.flip())


@given(transcripts, transcripts)
def test_cumulative_is_linear_under_concatenation(t1, t2):
    assert cumulative_payoff(t1 + t2) == cumulative_payoff(t1) + cumulative_payoff(t2)


@given(transcripts.filter(lambda t: len(t) > 0))
def test_average_bounded_with_equality_iff_uniform_outcome(t):
    avg = average_payoff(t)
    assert -1 <= avg <= 1
    outcomes = {stage_payoff(a, b) for a, b in t}
    assert (abs(avg) == 1) == (len(outcomes) == 1)


@given(st.integers(min_value=1, max_value=30), st.fractions(min_value="1/100", max_value="99/100"))
def test_all_wins_discounted_closed_form(n, delta):
    t = ((H, H),) * n
    assert discounted_payoff(t, delta) == (delta - delta ** (n + 1)) / (1 - delta)


def test_cumulative_parity_matches_horizon():
    for t in (((H, H),), ((H, T), (T, T)), ((H, H), (H, T), (T, H))):
        assert (cumulative_payoff(t) - len(t)) % 2 == 0


def test_transcript_round_trip():
    text = "HH,HT,TT"
    t = parse_transcript(text)
    assert t == ((H, H), (H, T), (T, T))
    assert format_transcript(t) == text
    assert parse_transcript("") == ()


@pytest.mark.parametrize("bad", ["HX", "H", "HHH", "HH,,TT"])
def test_transcript_rejects_malformed_rounds(bad):
    with pytest.raises(ValueError, match="malformed transcript"):
        parse_transcript(bad)
