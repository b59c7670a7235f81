"""Consistent-set machinery, the potential function, and the payoff guarantee."""

from fractions import Fraction

import pytest

from pennylab import (
    Action,
    constant,
    expected_average_payoff,
    expected_potential_step,
    filter_consistent,
    init_consistent,
    majority_action,
    play_match,
    potential_step,
    uniform_table,
)
from pennylab.exploiter import ConsistentSet, greedy_value, guarantee, potential
from pennylab.oracle import exact_value
from pennylab.strategies import exploiter_vs

from support import opponents_with_budget

H, T = Action.H, Action.T


def test_init_enumerates_the_full_seed_space():
    cs = init_consistent(uniform_table(3))
    assert len(cs.alive) == 8
    assert cs.round == 1
    assert potential(cs, 0) == -3.0


def test_init_deterministic_opponent_has_one_seed():
    cs = init_consistent(constant(H))
    assert len(cs.alive) == 1
    assert potential(cs, 0) == 0.0


def test_init_rejects_seed_space_over_cap():
    with pytest.raises(ValueError, match="seed space too large"):
        init_consistent(uniform_table(25))
    with pytest.raises(ValueError, match="seed space too large"):
        init_consistent(uniform_table(5), cap=16)


def test_majority_counts_and_tie_rule():
    # Seeds 4, 5, 6 of a 3-bit table open with H; seed 0 opens with T.
    cs = ConsistentSet(uniform_table(3), (0, 4, 5, 6), 1)
    action, p = majority_action(cs, ())
    assert action is H
    assert p == Fraction(3, 4)

    tied = init_consistent(uniform_table(1))
    action, p = majority_action(tied, ())
    assert action is H  # ties predict H
    assert p == Fraction(1, 2)


def test_majority_certain_prediction():
    cs = ConsistentSet(uniform_table(3), (4, 5, 6, 7), 1)  # all open with H
    action, p = majority_action(cs, ())
    assert action is H
    assert p == 1


def test_filter_keeps_exactly_consistent_seeds():
    cs = ConsistentSet(uniform_table(3), (0, 4, 5, 6), 1)
    kept = filter_consistent(cs, H, ())
    assert kept.alive == (4, 5, 6)
    assert kept.round == 2


def test_filter_certain_prediction_keeps_everything():
    cs = ConsistentSet(uniform_table(3), (4, 5, 6, 7), 1)
    kept = filter_consistent(cs, H, ())
    assert kept.alive == cs.alive


def test_filter_rejects_impossible_observation():
    cs = init_consistent(constant(H))
    with pytest.raises(ValueError, match="inconsistent observation"):
        filter_consistent(cs, T, ())


def test_expected_potential_step_examples():
    assert expected_potential_step(Fraction(1, 2)) == pytest.approx(1.0)
    assert expected_potential_step(Fraction(3, 4)) == pytest.approx(1.3113, abs=1e-4)
    assert expected_potential_step(1) == pytest.approx(1.0)


def test_expected_potential_step_is_at_least_one_on_a_grid():
    for i in range(10_001):
        p = 0.5 + 0.5 * i / 10_000
        assert expected_potential_step(p) >= 1.0 - 1e-9


def test_potential_step_realized_values():
    assert potential_step(Fraction(1, 2), won=True) == pytest.approx(2.0)
    assert potential_step(Fraction(1, 2), won=False) == pytest.approx(0.0)
    assert potential_step(1, won=True) == pytest.approx(1.0)
    # Expectation over the win/loss branches matches the closed form.
    p = 0.75
    expected = p * potential_step(p, True) + (1 - p) * potential_step(p, False)
    assert expected == pytest.approx(expected_potential_step(p))


def test_potential_step_domain_errors():
    with pytest.raises(ValueError):
        expected_potential_step(0.4)
    with pytest.raises(ValueError):
        potential_step(1.2, won=True)
    with pytest.raises(ValueError):
        potential_step(1, won=False)


def test_true_seed_is_never_eliminated():
    # Exhaustive soundness: replay every seed of every family and check the
    # consistent set always contains the truth.  play_match raises
    # "inconsistent observation" the moment the true seed is dropped.
    n = 10
    for k in (0, 2, 3, 4):
        for label, opponent in opponents_with_budget(n, k):
            for seed_value in range(1 << opponent.seed_len):
                result = play_match(opponent, seed_value, n)
                assert len(result.transcript) == n, label
    for label, opponent in opponents_with_budget(10, 8):
        if label == "prefix-tail":
            continue  # 256 seeds of the heavier families suffice here
        for seed_value in range(1 << opponent.seed_len):
            play_match(opponent, seed_value, 10)


def test_trace_phi_accounting():
    result = play_match(uniform_table(3), 5, 6)
    phi = -3.0
    payoff = 0
    for row in result.rows:
        assert row.phi == pytest.approx(phi)
        phi += row.delta_phi
        payoff += row.payoff
    assert result.final_phi == pytest.approx(phi)
    assert result.cumulative == payoff
    # log |S| >= 0 makes the final potential a payoff lower bound.
    assert result.final_phi <= result.cumulative + 1e-9


def test_alive_sizes_never_increase():
    result = play_match(uniform_table(4), 9, 8)
    sizes = [row.alive_size for row in result.rows]
    assert sizes == sorted(sizes, reverse=True)


def test_expected_value_matches_per_seed_replay():
    # The shared prefix-tree recursion agrees with literally replaying each
    # opponent seed and averaging.
    n = 6
    for k in (0, 1, 3):
        for label, opponent in opponents_with_budget(n, k):
            total = 0
            for seed_value in range(1 << opponent.seed_len):
                total += play_match(opponent, seed_value, n).cumulative
            brute = Fraction(total, (1 << opponent.seed_len) * n)
            assert expected_average_payoff(opponent, n) == brute, label


def test_expected_value_matches_oracle_simulation_route():
    # Independent route: the oracle enumerates seed pairs through simulate().
    n = 5
    opponent = uniform_table(3)
    via_oracle = exact_value(exploiter_vs(opponent), opponent, n)
    assert expected_average_payoff(opponent, n) == via_oracle


def test_guarantee_met_spot_checks():
    assert expected_average_payoff(uniform_table(3), 6) == Fraction(1, 2)
    assert expected_average_payoff(uniform_table(0), 4) == 1
    assert expected_average_payoff(uniform_table(4), 4) == 0
    assert guarantee(10, 4) == Fraction(3, 5)


def test_greedy_value_collector_visits_every_round():
    seen = []
    greedy_value(uniform_table(2), 4, collect=lambda t, p: seen.append((t, p)))
    rounds = {t for t, _ in seen}
    assert rounds == {1, 2, 3, 4}
    assert all(Fraction(1, 2) <= p <= 1 for _, p in seen)
