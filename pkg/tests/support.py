"""Shared strategy/generator populations used across the test modules."""

from __future__ import annotations

from pennylab import (
    Action,
    alternator,
    blum_micali,
    broken_counter,
    broken_repeat,
    constant,
    exploiter_vs,
    generator_backed,
    passthrough,
    predictor_backed,
    prefix_tail,
    uniform_table,
)


def opponents_with_budget(n: int, k: int):
    """Shipped oblivious opponents whose declared budget is exactly k bits."""
    out = [("uniform", uniform_table(k))]
    if k == 0:
        out.append(("const-H", constant(Action.H)))
        out.append(("alt-H", alternator(Action.H)))
    if 0 < k < n:
        out.append(("prefix-tail", prefix_tail(k, "alternator", Action.H)))
    if k >= 1:
        out.append(("counter", generator_backed(broken_counter(k, n))))
    if k == 2:
        out.append(("repeat", generator_backed(broken_repeat(n))))
    if k >= 2 and k % 2 == 0:
        out.append(("bm-add1", generator_backed(blum_micali("add1", k // 2, n))))
        out.append(("bm-mulmod", generator_backed(blum_micali("mulmod", k // 2, n))))
    if k == n:
        out.append(("passthrough", generator_backed(passthrough(n))))
    return out


def oblivious_population(n: int, max_bits: int = 4):
    """A cross-section of oblivious strategies with budgets up to max_bits."""
    out = [
        ("const-H", constant(Action.H)),
        ("const-T", constant(Action.T)),
        ("alt-H", alternator(Action.H)),
        ("alt-T", alternator(Action.T)),
    ]
    for k in range(0, max_bits + 1):
        out.append((f"uniform-{k}", uniform_table(k)))
    if n > 2:
        out.append(("prefix-tail-2", prefix_tail(2, "alternator", Action.H)))
        out.append(("prefix-tail-const", prefix_tail(2, "constant", Action.H)))
    out.append(("repeat", generator_backed(broken_repeat(n))))
    out.append(("counter", generator_backed(broken_counter(3, n))))
    out.append(("bm-identity", generator_backed(blum_micali("identity", 2, n))))
    out.append(("bm-add1", generator_backed(blum_micali("add1", 2, n))))
    out.append(("bm-mulmod", generator_backed(blum_micali("mulmod", 3, n))))
    return out


def generator_population(n: int):
    return [
        ("bm-identity", blum_micali("identity", 2, n)),
        ("bm-add1", blum_micali("add1", 2, n)),
        ("bm-mulodd", blum_micali("mulodd", 3, n)),
        ("bm-mulmod", blum_micali("mulmod", 3, n)),
        ("repeat", broken_repeat(n)),
        ("counter", broken_counter(3, n)),
        ("passthrough", passthrough(n)),
    ]


def adaptive_population():
    return [
        ("pred-frequency", predictor_backed("frequency")),
        ("pred-markov1-beat", predictor_backed("markov1", beat=True)),
        ("exploit-uniform2", exploiter_vs(uniform_table(2))),
    ]


PREDICTOR_NAMES = ("const0", "const1", "frequency", "markov1", "periodicity")
