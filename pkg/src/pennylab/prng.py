"""Toy bit-stream generators, a verified permutation registry, and next-bit predictors.

Nothing here is claimed cryptographically strong.  The generators exist to
exercise exact prediction and distinguishing measurements at seed-enumerable
scale; the deliberately broken ones give the predictors something to find.
"""

from __future__ import annotations

import math
import os
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional, Sequence, Union

Bits = tuple[int, ...]
PermFn = Callable[[int], int]
PredictorFn = Callable[[Bits], int]

GENERATOR_KINDS = (
    "blum-micali-ip",
    "uniform-passthrough",
    "broken-repeat",
    "broken-counter",
)

DEFAULT_CAP = 1 << 20
MAX_PERM_WIDTH = 20


def enumeration_cap(cap: Optional[int] = None) -> int:
    """Active seed-space cap: 2**20, lowered (never raised) by PENNY_CAP or `cap`."""
    limit = DEFAULT_CAP
    env = os.environ.get("PENNY_CAP")
    if env:
        limit = min(limit, int(env))
    if cap is not None:
        limit = min(limit, cap)
    return limit


def check_seed_space(seed_len: int, cap: Optional[int] = None) -> int:
    """Return 2**seed_len if it fits under the enumeration cap, else raise."""
    space = 1 << seed_len
    if space > enumeration_cap(cap):
        raise ValueError("seed space too large")
    return space


def int_to_bits(value: int, length: int) -> Bits:
    """Big-endian bit tuple, so int_to_bits(5, 3) == (1, 0, 1)."""
    return tuple((value >> (length - 1 - i)) & 1 for i in range(length))


def bits_to_int(bits: Sequence[int]) -> int:
    value = 0
    for b in bits:
        value = (value << 1) | b
    return value


def coerce_bits(value: Union[str, Sequence[int]]) -> Bits:
    if isinstance(value, str):
        if any(c not in "01" for c in value):
            raise ValueError(f"malformed bit string: {value!r}")
        return tuple(int(c) for c in value)
    return tuple(int(b) for b in value)


def inner_product_bit(x: Union[str, Sequence[int]], y: Union[str, Sequence[int]]) -> int:
    """Parity of the bitwise AND of two equal-length bit strings."""
    xb, yb = coerce_bits(x), coerce_bits(y)
    if len(xb) != len(yb):
        raise ValueError("length mismatch")
    return sum(a & b for a, b in zip(xb, yb)) & 1


def _ip_int(a: int, b: int) -> int:
    return (a & b).bit_count() & 1


# --------------------------------------------------------------------------
# Permutation registry
# --------------------------------------------------------------------------

_PERM_FACTORIES: dict[str, Callable[[int], PermFn]] = {}


def register_permutation(name: str, factory: Callable[[int], PermFn]) -> None:
    """Register a permutation family; `factory(m)` must return a bijection on [0, 2**m).

    The bijection is verified exhaustively the first time `permutation(name, m)`
    is looked up.
    """
    _PERM_FACTORIES[name] = factory
    permutation.cache_clear()


def _largest_prime_at_most(limit: int) -> int:
    for candidate in range(limit, 1, -1):
        if candidate < 2:
            break
        if all(candidate % d for d in range(2, int(math.isqrt(candidate)) + 1)):
            return candidate
    raise ValueError("no prime below limit")


def _identity(m: int) -> PermFn:
    return lambda x: x


def _add1(m: int) -> PermFn:
    mask = (1 << m) - 1
    return lambda x: (x + 1) & mask


def _mul_odd(m: int) -> PermFn:
    mask = (1 << m) - 1
    return lambda x: (5 * x) & mask


def _unit_mul(m: int) -> PermFn:
    # Multiply inside the unit group of the largest prime fitting in m bits;
    # values outside [1, p) are fixed points so the map stays a bijection on
    # the full m-bit domain.
    p = _largest_prime_at_most(1 << m)
    g = 1 if p == 2 else 2

    def fn(x: int) -> int:
        if 0 < x < p:
            return (g * x) % p
        return x

    return fn


_PERM_FACTORIES.update(
    {
        "identity": _identity,
        "add1": _add1,
        "mulodd": _mul_odd,
        "mulmod": _unit_mul,
    }
)


@lru_cache(maxsize=None)
def permutation(name: str, m: int) -> PermFn:
    """Look up a registered permutation at width m, verifying it is a bijection."""
    if name not in _PERM_FACTORIES:
        raise ValueError(f"unknown permutation: {name!r}")
    if not 1 <= m <= MAX_PERM_WIDTH:
        raise ValueError(f"permutation width must be in [1, {MAX_PERM_WIDTH}]")
    fn = _PERM_FACTORIES[name](m)
    size = 1 << m
    seen = bytearray(size)
    for x in range(size):
        y = fn(x)
        if not 0 <= y < size or seen[y]:
            raise ValueError(f"permutation {name!r} is not a bijection at width {m}")
        seen[y] = 1
    return fn


# --------------------------------------------------------------------------
# Generators
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class GeneratorSpec:
    """A deterministic seed-to-bit-stream map with a declared seed length."""

    kind: str
    out_len: int
    seed_len: int
    m: int = 0
    perm: Optional[str] = None

    def describe(self) -> str:
        if self.kind == "blum-micali-ip":
            return f"bm,perm={self.perm},m={self.m}"
        if self.kind == "uniform-passthrough":
            return "passthrough"
        if self.kind == "broken-repeat":
            return "repeat"
        return f"counter,m={self.m}"


def blum_micali(perm: str, m: int, out_len: int) -> GeneratorSpec:
    """Iterated-permutation generator: bit i is perm**(n-i+1)(x) ip y.

    The seed is the pair (x, y), each m bits wide.
    """
    if out_len < 1:
        raise ValueError("output length must be positive")
    permutation(perm, m)  # verify the bijection up front
    return GeneratorSpec("blum-micali-ip", out_len, seed_len=2 * m, m=m, perm=perm)


def passthrough(out_len: int) -> GeneratorSpec:
    """Degenerate control: the output is the seed itself."""
    if out_len < 1:
        raise ValueError("output length must be positive")
    return GeneratorSpec("uniform-passthrough", out_len, seed_len=out_len)


def broken_repeat(out_len: int) -> GeneratorSpec:
    """Two seed bits repeated forever: bit i equals bit i-2 for every i >= 3."""
    if out_len < 1:
        raise ValueError("output length must be positive")
    return GeneratorSpec("broken-repeat", out_len, seed_len=2)


def broken_counter(m: int, out_len: int) -> GeneratorSpec:
    """Successive m-bit counter words starting from the seed value."""
    if out_len < 1:
        raise ValueError("output length must be positive")
    if m < 1:
        raise ValueError("counter width must be positive")
    return GeneratorSpec("broken-counter", out_len, seed_len=m, m=m)


@lru_cache(maxsize=1 << 14)
def _bm_stream(perm: str, m: int, out_len: int, x: int, y: int) -> Bits:
    fn = permutation(perm, m)
    # One forward pass over the iterate chain, emitted in reverse: bit 1 uses
    # the deepest iterate, bit out_len the first.
    chain = []
    cur = x
    for _ in range(out_len):
        cur = fn(cur)
        chain.append(cur)
    return tuple(_ip_int(chain[out_len - i], y) for i in range(1, out_len + 1))


def bitstream(g: GeneratorSpec, seed_bits: Union[str, Sequence[int]]) -> Bits:
    """The generator's full output for one seed, as a bit tuple of length out_len."""
    bits = coerce_bits(seed_bits)
    if len(bits) != g.seed_len:
        raise ValueError("seed length mismatch")
    if g.kind == "uniform-passthrough":
        return bits
    if g.kind == "broken-repeat":
        return tuple(bits[i % 2] for i in range(g.out_len))
    if g.kind == "broken-counter":
        out = []
        value = bits_to_int(bits)
        mask = (1 << g.m) - 1
        while len(out) < g.out_len:
            out.extend(int_to_bits(value, g.m))
            value = (value + 1) & mask
        return tuple(out[: g.out_len])
    if g.kind == "blum-micali-ip":
        x = bits_to_int(bits[: g.m])
        y = bits_to_int(bits[g.m :])
        return _bm_stream(g.perm, g.m, g.out_len, x, y)
    raise ValueError(f"unknown generator kind: {g.kind!r}")


# --------------------------------------------------------------------------
# Next-bit predictors
# --------------------------------------------------------------------------

PREDICTORS: dict[str, PredictorFn] = {}


def register_predictor(name: str, fn: PredictorFn) -> None:
    PREDICTORS[name] = fn


def resolve_predictor(p: Union[str, PredictorFn]) -> PredictorFn:
    if callable(p):
        return p
    if p not in PREDICTORS:
        raise ValueError(f"unknown predictor: {p!r}")
    return PREDICTORS[p]


def _const0(prefix: Bits) -> int:
    return 0


def _const1(prefix: Bits) -> int:
    return 1


def _frequency(prefix: Bits) -> int:
    # Majority vote among previously seen bits in the same parity class as the
    # target position; ties and empty classes guess 1.  The parity split is
    # what lets the predictor lock onto period-2 structure.
    same = prefix[len(prefix) % 2 :: 2]
    ones = sum(same)
    return 1 if 2 * ones >= len(same) else 0


def _markov1(prefix: Bits) -> int:
    if not prefix:
        return 1
    prev = prefix[-1]
    successors = [prefix[j + 1] for j in range(len(prefix) - 1) if prefix[j] == prev]
    ones = sum(successors)
    return 1 if 2 * ones >= len(successors) else 0


def _periodicity(prefix: Bits) -> int:
    # Smallest period consistent with the whole prefix; the prefix-length
    # period is vacuously consistent, so this always resolves.
    length = len(prefix)
    if length == 0:
        return 1
    for p in range(1, length + 1):
        if all(prefix[j] == prefix[j - p] for j in range(p, length)):
            return prefix[length - p]
    raise AssertionError("unreachable")


PREDICTORS.update(
    {
        "const0": _const0,
        "const1": _const1,
        "frequency": _frequency,
        "markov1": _markov1,
        "periodicity": _periodicity,
    }
)


@dataclass(frozen=True)
class PredictorReport:
    """Measured next-bit prediction advantage for one generator/predictor pair.

    `advantage` is max over positions of |success probability - 1/2|;
    `per_position` keeps the signed per-position values.  Exact reports carry
    rationals computed by full seed enumeration.
    """

    advantage: Union[Fraction, float]
    samples: int
    per_position: tuple
    exact: bool
    best_position: int
    half_width: Optional[float] = None


def eval_next_bit_predictor(
    g: GeneratorSpec,
    predictor: Union[str, PredictorFn],
    mode: str = "exact",
    samples: int = 10_000,
    eval_seed: int = 0,
    cap: Optional[int] = None,
) -> PredictorReport:
    """Per-position success of `predictor` on `g`'s output, exact or sampled.

    Exact mode enumerates every seed (cap enforced).  Sampled mode draws seeds
    from an explicit `eval_seed`-keyed stream and reports a 95% confidence
    half-width for the best position's estimate.
    """
    fn = resolve_predictor(predictor)
    n = g.out_len
    hits = [0] * n
    if mode == "exact":
        space = check_seed_space(g.seed_len, cap)
        for value in range(space):
            stream = bitstream(g, int_to_bits(value, g.seed_len))
            for i in range(n):
                if fn(stream[:i]) == stream[i]:
                    hits[i] += 1
        per_position = tuple(Fraction(h, space) - Fraction(1, 2) for h in hits)
        advantage = max(abs(p) for p in per_position)
        best = max(range(n), key=lambda i: (abs(per_position[i]), -i)) + 1
        return PredictorReport(advantage, space, per_position, True, best)
    if mode == "sampled":
        if samples < 1:
            raise ValueError("sample count must be positive")
        rng = random.Random(eval_seed)
        for _ in range(samples):
            value = rng.randrange(1 << g.seed_len)
            stream = bitstream(g, int_to_bits(value, g.seed_len))
            for i in range(n):
                if fn(stream[:i]) == stream[i]:
                    hits[i] += 1
        per_position = tuple(h / samples - 0.5 for h in hits)
        advantage = max(abs(p) for p in per_position)
        best = max(range(n), key=lambda i: (abs(per_position[i]), -i)) + 1
        rate = hits[best - 1] / samples
        half_width = 1.96 * math.sqrt(rate * (1.0 - rate) / samples)
        return PredictorReport(advantage, samples, per_position, False, best, half_width)
    raise ValueError(f"unknown mode: {mode!r}")
