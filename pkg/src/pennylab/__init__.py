"""Randomness-budgeted repeated Matching Pennies laboratory.

Strategies declare how many random bits they consume; an exact oracle
certifies equilibrium gaps by seed-space enumeration; a consistent-set
exploiter cashes in every missing bit of opponent entropy; and a small PRNG
lab measures next-bit prediction and distinguishing advantages at toy scale.
"""

from .game import (
    Action,
    Transcript,
    average_payoff,
    cumulative_payoff,
    discounted_payoff,
    format_transcript,
    parse_transcript,
    stage_payoff,
)
from .strategies import (
    Seed,
    StrategySpec,
    act,
    alternator,
    constant,
    exploiter_vs,
    generator_backed,
    make_gamma_equilibrium,
    predictor_backed,
    prefix_tail,
    seed_space,
    simulate,
    uniform_table,
)
from .exploiter import (
    ConsistentSet,
    MatchResult,
    expected_average_payoff,
    expected_potential_step,
    filter_consistent,
    init_consistent,
    majority_action,
    play_match,
    potential_step,
)
from .oracle import GapReport, best_response_value, certify_gap, exact_value
from .prng import (
    GeneratorSpec,
    PredictorReport,
    bitstream,
    blum_micali,
    broken_counter,
    broken_repeat,
    eval_next_bit_predictor,
    inner_product_bit,
    passthrough,
    register_permutation,
    register_predictor,
)
from .reductions import (
    payoff_to_distinguisher,
    per_round_payoffs,
    predictor_accuracy,
    predictor_strategy,
    round_win_probabilities,
)
from .discounting import (
    DiscountParams,
    DiscountedCertificate,
    certify_discounted_eq,
    min_rounds,
    tail_gain,
)

__version__ = "0.1.0"
