"""Infinite play under time discounting: thresholds, tail bounds, certification.

The infinite game is never simulated.  Certification decomposes into an exact
finite-horizon computation on the random (or generator-backed) prefix plus the
closed-form tail bound delta**n / (1 - delta), which upper-bounds what any
deviation can collect from the deterministic tail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .game import RationalLike, as_fraction
from .oracle import certify_gap
from .prng import GeneratorSpec
from .strategies import generator_backed


@dataclass(frozen=True)
class DiscountParams:
    """Discount factor and equilibrium slack for the infinite game.

    `delta` here is the time-discount factor, unrelated to any seed-length
    exponent elsewhere.
    """

    delta: Fraction
    epsilon: Fraction

    def __post_init__(self):
        if not 0 < self.delta < 1:
            raise ValueError("invalid discount factor")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")

    @classmethod
    def of(cls, delta: RationalLike, epsilon: RationalLike) -> "DiscountParams":
        return cls(as_fraction(delta), as_fraction(epsilon))


@dataclass(frozen=True)
class DiscountedCertificate:
    """Result of certifying the prefix-plus-tails profile at horizon n.

    epsilon_prime = prefix_gap + tail; the profile is certified as an
    epsilon-Nash equilibrium of the infinite discounted game when
    epsilon_prime <= epsilon.
    """

    n: int
    delta: Fraction
    epsilon: Fraction
    prefix_gap: Fraction
    tail: Fraction
    epsilon_prime: Fraction
    certified: bool


def tail_gain(delta: RationalLike, n: int) -> Fraction:
    """Exact delta**n / (1 - delta): the largest discounted gain a deviation can
    collect from a deterministic tail starting at round n."""
    d = as_fraction(delta)
    if not 0 < d < 1:
        raise ValueError("invalid discount factor")
    if n < 0:
        raise ValueError("round index must be non-negative")
    return d**n / (1 - d)


def min_rounds(p: DiscountParams) -> int:
    """Least n with tail_gain(delta, n) strictly below epsilon.

    The boundary is resolved by exact rational comparison, not by comparing
    floating-point logarithms.
    """
    # Float logs only pick the starting point for the exact walk.
    target = float(p.epsilon) * (1.0 - float(p.delta))
    candidate = 0
    if 0.0 < target < 1.0:
        candidate = max(0, int(math.log(target) / math.log(float(p.delta))) - 2)
    while tail_gain(p.delta, candidate) >= p.epsilon:
        candidate += 1
    while candidate > 0 and tail_gain(p.delta, candidate - 1) < p.epsilon:
        candidate -= 1
    return candidate


def certify_discounted_eq(
    n: int,
    p: DiscountParams,
    seed_len: Optional[int] = None,
    generator: Optional[GeneratorSpec] = None,
    cap: Optional[int] = None,
) -> DiscountedCertificate:
    """Certify the profile (n-round prefix, then constant-H vs alternator tails).

    With no generator the prefix is full-entropy uniform play (seed_len must be
    n if given): round-wise uniform play is unexploitable at any discounting,
    so the prefix gap is exactly 0 and no enumeration is needed.  With a
    generator, both players play its output for the prefix and the gap is
    computed exactly by the discounted oracle.
    """
    if n < 1:
        raise ValueError("horizon must be positive")
    if generator is None:
        if seed_len is not None and seed_len != n:
            raise ValueError("uniform prefix consumes exactly n bits")
        prefix_gap = Fraction(0)
    else:
        if generator.out_len < n:
            raise ValueError("generator stream too short for this horizon")
        if seed_len is not None and seed_len != generator.seed_len:
            raise ValueError("seed length disagrees with the generator")
        if generator.seed_len > n:
            raise ValueError("prefix budget exceeds the horizon")
        spec = generator_backed(generator)
        report = certify_gap(spec, spec, n, delta=p.delta, cap=cap)
        prefix_gap = report.certified_epsilon
    tail = tail_gain(p.delta, n)
    epsilon_prime = prefix_gap + tail
    return DiscountedCertificate(
        n=n,
        delta=p.delta,
        epsilon=p.epsilon,
        prefix_gap=prefix_gap,
        tail=tail,
        epsilon_prime=epsilon_prime,
        certified=epsilon_prime <= p.epsilon,
    )
