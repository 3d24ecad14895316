import random
from fractions import Fraction

import pytest

from pragrate import SourcePmf


def bern(p: float | str) -> SourcePmf:
    """Bernoulli source with P(symbol 0) = p, built exactly from a decimal."""
    f = Fraction(str(p))
    return SourcePmf.from_values([f, 1 - f])


def random_pmf(rng: random.Random, m: int, *, min_prob: float = 0.05, spread: float = 1.5) -> SourcePmf:
    """A full-support pmf that is bounded away from uniform and from the
    simplex boundary, so divergence/derivative magnitudes stay testable."""
    while True:
        raw = [rng.uniform(min_prob, 1.0) for _ in range(m)]
        total = sum(raw)
        probs = [x / total for x in raw]
        if min(probs) < min_prob:
            continue
        if max(probs) / min(probs) < spread:
            continue
        return SourcePmf(tuple(probs))


@pytest.fixture
def rng() -> random.Random:
    return random.Random(0x5EED)
