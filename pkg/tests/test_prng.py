"""Generators, the permutation registry, predictors, and the two reductions."""

from fractions import Fraction

import pytest

from pennylab import (
    Action,
    alternator,
    blum_micali,
    broken_counter,
    broken_repeat,
    constant,
    eval_next_bit_predictor,
    exact_value,
    exploiter_vs,
    generator_backed,
    inner_product_bit,
    passthrough,
    payoff_to_distinguisher,
    predictor_accuracy,
    predictor_strategy,
    register_permutation,
    uniform_table,
)
from pennylab.prng import bitstream, int_to_bits, permutation

from support import PREDICTOR_NAMES, generator_population, oblivious_population

H, T = Action.H, Action.T


def test_inner_product_examples():
    assert inner_product_bit("101", "110") == 1
    assert inner_product_bit("000", "111") == 0
    assert inner_product_bit("11", "11") == 0


def test_inner_product_rejects_length_mismatch():
    with pytest.raises(ValueError, match="length mismatch"):
        inner_product_bit("10", "101")


def test_identity_permutation_gives_constant_stream():
    g = blum_micali("identity", 3, 5)
    for x in range(8):
        for y in range(8):
            bits = int_to_bits(x, 3) + int_to_bits(y, 3)
            stream = bitstream(g, bits)
            expected = inner_product_bit(int_to_bits(x, 3), int_to_bits(y, 3))
            assert stream == (expected,) * 5


def test_bm_hand_iteration_example():
    # perm +1 mod 8, x=000, y=001, n=2: bits (f^2(x) ip y, f(x) ip y) = (0, 1)
    g = blum_micali("add1", 3, 2)
    assert bitstream(g, "000001") == (0, 1)


def test_passthrough_reproduces_the_seed():
    g = passthrough(6)
    assert bitstream(g, "101100") == (1, 0, 1, 1, 0, 0)


def test_broken_repeat_has_period_two():
    g = broken_repeat(9)
    for value in range(4):
        stream = bitstream(g, int_to_bits(value, 2))
        for i in range(2, 9):
            assert stream[i] == stream[i - 2]


def test_broken_counter_emits_incrementing_words():
    g = broken_counter(3, 9)
    assert bitstream(g, "110") == (1, 1, 0, 1, 1, 1, 0, 0, 0)


def test_streams_are_deterministic_and_sized():
    for label, g in generator_population(7):
        seen = {}
        for value in range(min(16, 1 << g.seed_len)):
            bits = int_to_bits(value, g.seed_len)
            stream = bitstream(g, bits)
            assert len(stream) == 7, label
            assert bitstream(g, bits) == stream, label
            seen[bits] = stream


def test_registry_rejects_non_bijections():
    register_permutation("squash", lambda m: lambda x: x & ~1)
    with pytest.raises(ValueError, match="not a bijection"):
        permutation("squash", 3)


def test_registry_rejects_unknown_and_oversized_widths():
    with pytest.raises(ValueError, match="unknown permutation"):
        permutation("nope", 3)
    with pytest.raises(ValueError, match="width"):
        permutation("add1", 21)


def test_builtin_permutations_verify_at_small_widths():
    for name in ("identity", "add1", "mulodd", "mulmod"):
        for m in (1, 2, 3, 6):
            fn = permutation(name, m)
            assert sorted(fn(x) for x in range(1 << m)) == list(range(1 << m))


def test_registry_verifies_exhaustively_at_the_width_limit():
    fn = permutation("add1", 20)
    assert fn((1 << 20) - 1) == 0


def test_win_probability_normalization():
    from pennylab import per_round_payoffs, round_win_probabilities

    s = constant(T)
    g = broken_repeat(4)
    payoffs = per_round_payoffs(s, g, 4)
    probs = round_win_probabilities(s, g, 4)
    assert probs == [(e + 1) / 2 for e in payoffs]
    assert all(0 <= p <= 1 for p in probs)
    # Same advantage under either normalization.
    assert [abs(e) / 2 for e in payoffs] == [abs(p - Fraction(1, 2)) for p in probs]


def test_uniform_passthrough_is_unpredictable_by_constants():
    g = passthrough(6)
    for name in ("const0", "const1"):
        report = eval_next_bit_predictor(g, name)
        assert report.exact
        assert report.advantage == 0
        assert all(p == 0 for p in report.per_position)


def test_frequency_predictor_nails_broken_repeat():
    report = eval_next_bit_predictor(broken_repeat(8), "frequency")
    assert report.advantage == Fraction(1, 2)
    assert report.best_position == 3
    for i, p in enumerate(report.per_position, start=1):
        assert p == (Fraction(1, 2) if i >= 3 else 0)


def test_bm_add1_regression_fixture():
    # Frozen from full 2**16-seed enumeration of this exact configuration.
    report = eval_next_bit_predictor(blum_micali("add1", 8, 16), "frequency")
    assert report.exact
    assert report.samples == 1 << 16
    assert report.advantage == Fraction(3, 16)
    assert report.best_position == 15


def test_sampled_mode_is_reproducible_and_reports_half_width():
    g = broken_repeat(8)
    a = eval_next_bit_predictor(g, "frequency", mode="sampled", samples=500, eval_seed=7)
    b = eval_next_bit_predictor(g, "frequency", mode="sampled", samples=500, eval_seed=7)
    assert a == b
    assert not a.exact
    assert a.half_width is not None and a.half_width >= 0
    assert abs(a.advantage - 0.5) <= 0.1


def test_exact_mode_enforces_cap():
    with pytest.raises(ValueError, match="seed space too large"):
        eval_next_bit_predictor(passthrough(8), "const1", cap=16)


def test_distinguisher_is_zero_for_passthrough():
    for s in (constant(T), alternator(H), uniform_table(2)):
        round_idx, advantage = payoff_to_distinguisher(s, passthrough(6), 6)
        assert advantage == 0


def test_passthrough_is_exactly_unexploitable():
    from pennylab import best_response_value

    for n in (4, 6, 8):
        opponent = generator_backed(passthrough(n))
        assert best_response_value(opponent, n, opponent_player=2) == 0
        assert best_response_value(opponent, n, opponent_player=1) == 0


def test_distinguisher_finds_deterministic_round():
    # The periodicity predictor in the mismatcher seat beats broken-repeat
    # with certainty from round 3 on, making the round outcome deterministic.
    s = predictor_strategy("periodicity", beat=True)
    round_idx, advantage = payoff_to_distinguisher(s, broken_repeat(6), 6)
    assert (round_idx, advantage) == (3, Fraction(1, 2))


def test_distinguisher_dominates_half_the_game_value():
    n = 8
    strategies = [
        ("const-H", constant(H)),
        ("alt", alternator(H)),
        ("uniform-2", uniform_table(2)),
        ("pred-freq-beat", predictor_strategy("frequency", beat=True)),
    ]
    for glabel, g in generator_population(n):
        player = generator_backed(g)
        for slabel, s in strategies + [("exploit-beat", exploiter_vs(player, beat=True))]:
            _, advantage = payoff_to_distinguisher(s, g, n)
            value = exact_value(player, s, n)
            assert advantage >= abs(value) / 2, (glabel, slabel)


def test_predictor_payoff_identity():
    n = 8
    for name in PREDICTOR_NAMES:
        for olabel, opponent in oblivious_population(n, max_bits=3):
            accuracy = predictor_accuracy(name, opponent, n)
            payoff = exact_value(predictor_strategy(name), opponent, n)
            assert payoff == 2 * accuracy - 1, (name, olabel)


def test_perfect_and_chance_predictor_payoffs():
    # Constant predictor against the matching constant opponent is always right.
    assert predictor_accuracy("const1", constant(H), 6) == 1
    assert exact_value(predictor_strategy("const1"), constant(H), 6) == 1
    # Any predictor against fresh uniform bits is right exactly half the time.
    for name in PREDICTOR_NAMES:
        assert predictor_accuracy(name, uniform_table(6), 6) == Fraction(1, 2)
        assert exact_value(predictor_strategy(name), uniform_table(6), 6) == 0


def test_frequency_wins_every_affected_round_against_repeat():
    # Payoff +1 on every round from 3 on, for every seed of the repeat stream.
    from pennylab.strategies import simulate
    from pennylab.game import stage_payoff

    opponent = generator_backed(broken_repeat(8))
    striker = predictor_strategy("frequency")
    for value in range(4):
        transcript = simulate(striker, "", opponent, value, 8)
        for t, (a, b) in enumerate(transcript, start=1):
            if t >= 3:
                assert stage_payoff(a, b) == 1
