"""Exact evaluation of the optimal one-to-one code for a known memoryless
source: its length distribution, the minimal excess-rate probability at a
given rate, and the smallest rate meeting a given excess-rate probability.

The optimal code orders all strings of length n in decreasing probability
(ties broken deterministically) and gives the k-th string, 1-based, a
codeword of length floor(log2 k).  Strings of the same empirical type are
equiprobable under a memoryless source, so the whole computation aggregates
over type classes: classes are sorted by per-string probability, big-integer
rank ranges are accumulated, and the probability that a codeword has length
at least L is the probability mass of ranks >= 2**L, with the class
straddling the boundary split exactly.

Numerics: per-type log2-probabilities n-compensated in the linear domain,
tail sums accumulated entirely in the base-2 log domain so that tails far
below the smallest positive double remain meaningful.  When the source
probabilities are exact rationals, an exact-Fraction mode is available and
is required to agree with the brute-force string enumeration bit for bit.

Rate convention: with L* = min{L : P(length >= L) <= epsilon}, the optimal
rate is (L* - 1)/n.  The defining infimum is over rates R with
P(length >= ceil(n R)) <= epsilon, and the step structure of integer lengths
makes the boundary point (L* - 1)/n that infimum.
"""

from __future__ import annotations

import bisect
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .distributions import SourcePmf
from .errors import DomainError, ResourceLimitError
from .numerics import NEG_INF, logaddexp2, neumaier_sum
from .types_census import _iter_types_with_sizes, count_types

DEFAULT_TYPE_CAP = 10_000_000
BRUTE_FORCE_STRING_CAP = 2_000_000


@dataclass(frozen=True)
class LengthDistribution:
    """Tail probabilities P(codeword length >= L) of the optimal code.

    ``log2_tails[L]`` is log2 of the tail at L, for L = 0..max_length+1
    (the last entry is -inf).  ``exact_tails`` mirrors them as exact
    rationals when the source allowed exact arithmetic.
    """

    n: int
    m: int
    log2_tails: tuple[float, ...]
    exact_tails: tuple[Fraction, ...] | None = None

    @property
    def max_length(self) -> int:
        return len(self.log2_tails) - 2

    def log2_tail(self, length: int) -> float:
        if length <= 0:
            return 0.0
        if length >= len(self.log2_tails):
            return NEG_INF
        return self.log2_tails[length]

    def tail(self, length: int) -> float:
        lt = self.log2_tail(length)
        if lt == NEG_INF:
            return 0.0
        if lt < -1074.0:
            return 0.0
        return 2.0 ** lt

    @property
    def boundaries(self) -> tuple[tuple[int, float], ...]:
        return tuple((L, self.tail(L)) for L in range(len(self.log2_tails)))


def _guard_types(n: int, m: int, cap_types: int) -> None:
    total = count_types(n, m)
    if total > cap_types:
        raise ResourceLimitError(
            f"{total} type classes at n={n}, m={m} exceeds the cap of {cap_types}"
        )


def _sorted_type_table(
    p: SourcePmf, n: int, *, reverse_ties: bool = False
) -> tuple[list[tuple[int, ...]], list[int], list[float]]:
    """Types sorted by descending per-string probability.

    Ties (equal log-probabilities) fall back on the canonical ascending-lex
    type order, or its reverse when ``reverse_ties`` is set (the tails must
    be invariant under that choice, which a property test asserts).
    """
    log2p = p.log2_probs()
    rows = []
    for counts, size in _iter_types_with_sizes(n, p.m):
        lp = neumaier_sum(c * lp2 for c, lp2 in zip(counts, log2p) if c)
        tie = tuple(-c for c in counts) if reverse_ties else counts
        rows.append((-lp, tie, counts, size))
    rows.sort(key=lambda row: row[:2])
    counts_list = [row[2] for row in rows]
    sizes = [row[3] for row in rows]
    log_probs = [-row[0] for row in rows]
    return counts_list, sizes, log_probs


def _tails_from_ranked_classes(
    sizes: Sequence[int], log_probs: Sequence[float], n: int, m: int
) -> tuple[float, ...]:
    """log2 tails at every length from ranked class sizes and log2 probs."""
    total = m ** n
    t = len(sizes)
    starts = [0] * t  # 1-based first rank of each class
    acc = 1
    for i, z in enumerate(sizes):
        starts[i] = acc
        acc += z
    suffix = [NEG_INF] * (t + 1)
    for i in range(t - 1, -1, -1):
        suffix[i] = logaddexp2(math.log2(sizes[i]) + log_probs[i], suffix[i + 1])

    max_len = total.bit_length() - 1  # floor(log2 m**n)
    tails = [0.0] * (max_len + 2)
    tails[max_len + 1] = NEG_INF
    for length in range(1, max_len + 1):
        boundary = 1 << length
        if boundary > total:
            tails[length] = NEG_INF
            continue
        i = bisect.bisect_right(starts, boundary) - 1
        partial = starts[i] + sizes[i] - boundary  # ranks >= boundary inside class i
        head = math.log2(partial) + log_probs[i] if partial > 0 else NEG_INF
        tails[length] = logaddexp2(head, suffix[i + 1])
    return tuple(tails)


def length_distribution(
    p: SourcePmf,
    n: int,
    *,
    exact: bool = False,
    cap_types: int = DEFAULT_TYPE_CAP,
    _reverse_ties: bool = False,
) -> LengthDistribution:
    """Length distribution of the optimal one-to-one code at blocklength n.

    With ``exact=True`` the tails are additionally computed in exact rational
    arithmetic; the source must then carry exact rational probabilities.
    """
    if n < 1:
        raise DomainError(f"blocklength must be >= 1, got {n}")
    _guard_types(n, p.m, cap_types)
    counts_list, sizes, log_probs = _sorted_type_table(p, n, reverse_ties=_reverse_ties)
    tails = _tails_from_ranked_classes(sizes, log_probs, n, p.m)

    exact_tails = None
    if exact:
        if p.exact is None:
            raise DomainError(
                "exact mode requires a source with exact rational probabilities"
            )
        exact_tails = _exact_tails(p.exact, counts_list, sizes, n, p.m)
    return LengthDistribution(n=n, m=p.m, log2_tails=tails, exact_tails=exact_tails)


def _exact_tails(
    fracs: Sequence[Fraction],
    counts_list: Sequence[tuple[int, ...]],
    sizes: Sequence[int],
    n: int,
    m: int,
) -> tuple[Fraction, ...]:
    per_string = []
    for counts in counts_list:
        prob = Fraction(1)
        for c, f in zip(counts, fracs):
            if c:
                prob *= f ** c
        per_string.append(prob)
    # The float sort already ordered the classes; re-sorting by the exact
    # probabilities (stable, same tie order) repairs any ulp-level misorder.
    order = sorted(range(len(sizes)), key=lambda i: per_string[i], reverse=True)
    sizes = [sizes[i] for i in order]
    per_string = [per_string[i] for i in order]

    total = m ** n
    t = len(sizes)
    starts = [0] * t
    acc = 1
    for i, z in enumerate(sizes):
        starts[i] = acc
        acc += z
    suffix = [Fraction(0)] * (t + 1)
    for i in range(t - 1, -1, -1):
        suffix[i] = suffix[i + 1] + sizes[i] * per_string[i]

    max_len = total.bit_length() - 1
    tails: list[Fraction] = [Fraction(1)] * (max_len + 2)
    tails[max_len + 1] = Fraction(0)
    for length in range(1, max_len + 1):
        boundary = 1 << length
        if boundary > total:
            tails[length] = Fraction(0)
            continue
        i = bisect.bisect_right(starts, boundary) - 1
        partial = starts[i] + sizes[i] - boundary
        tails[length] = partial * per_string[i] + suffix[i + 1]
    return tuple(tails)


def excess_rate_probability(
    p: SourcePmf, n: int, rate: float, *, cap_types: int = DEFAULT_TYPE_CAP
) -> float:
    """Minimal probability that the optimal code's length is >= n*rate bits.

    Lengths are integers, so the event is length >= ceil(n*rate); a tiny
    guard keeps nearly-integer products from being rounded up spuriously.
    """
    if rate < 0.0:
        raise DomainError(f"rate must be nonnegative, got {rate}")
    dist = length_distribution(p, n, cap_types=cap_types)
    threshold = math.ceil(n * rate - 1e-12)
    return dist.tail(threshold)


def optimal_rate(
    p: SourcePmf,
    n: int,
    epsilon: float | None = None,
    *,
    log2_epsilon: float | None = None,
    cap_types: int = DEFAULT_TYPE_CAP,
) -> float:
    """Smallest rate whose excess-rate probability is at most epsilon.

    The target may be given directly or as ``log2_epsilon`` (useful when
    epsilon = 2**(-n*delta) underflows a double).  Output lies on the grid
    {0, 1/n, 2/n, ...}.
    """
    if (epsilon is None) == (log2_epsilon is None):
        raise DomainError("provide exactly one of epsilon, log2_epsilon")
    if epsilon is not None:
        if not 0.0 < epsilon < 1.0:
            raise DomainError(f"epsilon must lie in (0, 1), got {epsilon}")
        log2_epsilon = math.log2(epsilon)
    elif log2_epsilon >= 0.0:
        raise DomainError("log2_epsilon must be negative (epsilon < 1)")
    dist = length_distribution(p, n, cap_types=cap_types)
    for length in range(len(dist.log2_tails)):
        if dist.log2_tails[length] <= log2_epsilon:
            return (length - 1) / n
    raise DomainError("no admissible length found")  # pragma: no cover


def brute_force_limits(p: SourcePmf, n: int) -> LengthDistribution:
    """Independent oracle: enumerate all m**n strings in exact rationals.

    Sorts strings by probability with the same tie conventions as
    :func:`length_distribution` (canonical type order, then lexicographic),
    assigns length floor(log2 k) to the k-th string and tabulates tails.
    Must equal ``length_distribution(p, n, exact=True)`` exactly.
    """
    if p.exact is None:
        raise DomainError("brute force oracle needs exact rational probabilities")
    if n < 1:
        raise DomainError(f"blocklength must be >= 1, got {n}")
    total = p.m ** n
    if total > BRUTE_FORCE_STRING_CAP:
        raise ResourceLimitError(
            f"{total} strings exceeds the brute-force cap of {BRUTE_FORCE_STRING_CAP}"
        )
    prob_of_counts: dict[tuple[int, ...], Fraction] = {}
    rows = []
    for string in itertools.product(range(p.m), repeat=n):
        counts = [0] * p.m
        for s in string:
            counts[s] += 1
        key = tuple(counts)
        prob = prob_of_counts.get(key)
        if prob is None:
            prob = Fraction(1)
            for c, f in zip(key, p.exact):
                if c:
                    prob *= f ** c
            prob_of_counts[key] = prob
        rows.append((-prob, key, string))
    rows.sort()

    max_len = total.bit_length() - 1
    tails: list[Fraction] = [Fraction(0)] * (max_len + 2)
    boundary_to_len = {
        1 << L: L for L in range(max_len + 2) if (1 << L) <= total
    }
    acc = Fraction(0)
    for k in range(total, 0, -1):
        acc += -rows[k - 1][0]
        L = boundary_to_len.get(k)
        if L is not None:
            tails[L] = acc  # suffix sum over ranks >= k = 2**L

    log2_tails = tuple(
        math.log2(t) if t > 0 else NEG_INF for t in tails
    )
    return LengthDistribution(
        n=n, m=p.m, log2_tails=log2_tails, exact_tails=tuple(tails)
    )
