"""Counter-mode pseudorandom bits with a stable cross-run identity.

Every random decision in this package is a pure function of (seed, index),
so runs are reproducible regardless of iteration order, threading, or how
many draws other components consumed.  The mixing function is the SplitMix64
finalizer; the stream identity below is recorded in construction reports so
that archived outputs stay checkable.
"""

from __future__ import annotations

from fractions import Fraction

GENERATOR_ID = "splitmix64/1"

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def _finalize(z: int) -> int:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & _MASK
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & _MASK
    return z ^ (z >> 31)


def draw(seed: int, index: int) -> int:
    """Return the uniform 64-bit word at position `index` of stream `seed`."""
    return _finalize((seed + (index + 1) * _GAMMA) & _MASK)


def substream(seed: int, label: str) -> int:
    """Derive an independent stream seed for a named subcomputation.

    Mixing the label bytes keeps substreams decoupled even for adjacent
    seeds, and the derivation is order-independent by construction.
    """
    h = seed & _MASK
    for b in label.encode("utf-8"):
        h = _finalize(h ^ b)
    return _finalize(h ^ len(label))


def threshold_for(prob: Fraction) -> int:
    """Map a probability to an acceptance threshold on 64-bit words.

    accept <=> word < threshold, so P[accept] = floor(prob * 2^64) / 2^64,
    exact to within 2^-64 and monotone in `prob`.
    """
    if prob <= 0:
        return 0
    if prob >= 1:
        return 1 << 64
    return (prob.numerator << 64) // prob.denominator


def accept(seed: int, index: int, threshold: int) -> bool:
    return draw(seed, index) < threshold


def randrange(seed: int, index: int, bound: int) -> int:
    """Uniform integer in [0, bound) by rejection-free modular reduction.

    The bias is < bound / 2^64, far below anything observable at the sizes
    used here; determinism matters more than the last ulp of uniformity.
    """
    if bound <= 0:
        raise ValueError("bound must be positive")
    return draw(seed, index) % bound


def sample_indices(seed: int, count: int, population: int) -> list[int]:
    """Deterministic sample of `count` distinct indices from range(population).

    Floyd's algorithm; output is sorted.  Requires count <= population.
    """
    if count > population:
        raise ValueError("sample larger than population")
    chosen: set[int] = set()
    for i in range(population - count, population):
        t = randrange(seed, i, i + 1)
        chosen.add(t if t not in chosen else i)
    return sorted(chosen)
