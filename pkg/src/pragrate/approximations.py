"""Finite-blocklength approximations to the optimal compression rate, and
the explicit constants of the matching achievability and converse bounds.

At blocklength n and excess-rate probability epsilon = 2**(-n*delta), the
ladder of approximations (bits/symbol) is

    shannon    H(P)
    strassen   H(P) + sigma(P) Qinv(epsilon)/sqrt(n) - log2(n)/(2n)
    blahut     H(P_alpha*)
    pragmatic  H(P_alpha*) - log2(n) / (2 n (1 - alpha*))

where alpha* solves D(P_alpha* || P) = delta and sigma**2(P) is the variance
of -log2 P(X) in bits**2.  The pragmatic rate is sandwiched around the true
optimum by explicit c/n and C/n corrections whose constants are assembled
here from the tilted moments; the n-thresholds N1, N2, N0 under which the
converse bound is guaranteed are computed by their defining minimizations.

The exponent/probability conversion is delta = log2(1/epsilon)/n throughout.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from . import exact_limits
from .distributions import SourcePmf, tilt
from .errors import DomainError, ResourceLimitError
from .exponents import (
    AlphaStarSolution,
    MomentEnvelope,
    delta_range,
    moment_envelope,
    solve_alpha_star,
)
from .numerics import LOG2E, neumaier_sum, normal_tail_inverse

SQRT_2PI = math.sqrt(2.0 * math.pi)


def epsilon_to_delta(epsilon: float, n: int) -> float:
    """delta = log2(1/epsilon)/n (bits)."""
    if not 0.0 < epsilon < 1.0:
        raise DomainError(f"epsilon must lie in (0, 1), got {epsilon}")
    return -math.log2(epsilon) / n


def delta_to_epsilon(delta: float, n: int) -> float:
    """epsilon = 2**(-n*delta); underflows to 0.0 for very large exponents."""
    return 2.0 ** (-n * delta)


def shannon_rate(p: SourcePmf) -> float:
    """First-order approximation: the source entropy H(P)."""
    return tilt(p, 1.0).entropy_bits


def coding_variance_bits(p: SourcePmf) -> float:
    """Source dispersion sigma**2(P) = Var(-log2 P(X)) in bits**2."""
    logs = [math.log2(x) for x in p.probs]
    mean = neumaier_sum(w * v for w, v in zip(p.probs, logs))
    return neumaier_sum(w * (v - mean) ** 2 for w, v in zip(p.probs, logs))


def strassen_rate(p: SourcePmf, n: int, epsilon: float) -> float:
    """Normal-approximation rate H + sigma Qinv(eps)/sqrt(n) - log2(n)/(2n).

    Only informative for moderate epsilon; at very small epsilon the Qinv
    term dominates and the expansion is no longer trustworthy, but the value
    is still reported.
    """
    if not 0.0 < epsilon < 1.0:
        raise DomainError(f"epsilon must lie in (0, 1), got {epsilon}")
    if n < 1:
        raise DomainError(f"blocklength must be >= 1, got {n}")
    sigma = math.sqrt(coding_variance_bits(p))
    return (
        shannon_rate(p)
        + sigma * normal_tail_inverse(epsilon) / math.sqrt(n)
        - math.log2(n) / (2.0 * n)
    )


def _solve_for(p: SourcePmf, n: int, epsilon: float) -> AlphaStarSolution:
    delta = epsilon_to_delta(epsilon, n)
    rng = delta_range(p)
    if not rng.contains(delta):
        if rng.is_empty:
            raise DomainError(
                "uniform source: no admissible exponent; any epsilon in (0,1) "
                "fails the tilted solve"
            )
        lo_eps = delta_to_epsilon(rng.hi, n)
        raise DomainError(
            f"delta={delta:.6g} outside (0, {rng.hi:.6g}); at n={n} the "
            f"admissible epsilon interval is ({lo_eps:.6g}, 1)"
        )
    return solve_alpha_star(p, delta)


def blahut_rate(p: SourcePmf, n: int, epsilon: float) -> float:
    """Error-exponent approximation H(P_alpha*) with delta = log2(1/eps)/n."""
    return _solve_for(p, n, epsilon).h_tilted


def pragmatic_rate(p: SourcePmf, n: int, epsilon: float) -> float:
    """H(P_alpha*) - log2(n)/(2n(1-alpha*)): the finite-n refined rate."""
    sol = _solve_for(p, n, epsilon)
    return sol.h_tilted - math.log2(n) / (2.0 * n * (1.0 - sol.alpha_star))


def pragmatic_rate_from_delta(p: SourcePmf, n: int, delta: float) -> float:
    sol = solve_alpha_star(p, delta)
    return sol.h_tilted - math.log2(n) / (2.0 * n * (1.0 - sol.alpha_star))


def _berry_esseen_prefactor_log2(sigma: float, rho: float) -> float:
    """log2 of (1/sigma) (1/sqrt(2 pi) + rho/sigma**2); sigma, rho in nats."""
    return math.log2((1.0 / sigma) * (1.0 / SQRT_2PI + rho / sigma ** 2))


def achievability_constant(p: SourcePmf, delta: float) -> float:
    """The additive c in the bound R*_n <= pragmatic + c/n, valid all n >= 1."""
    sol = solve_alpha_star(p, delta)
    t = sol.tilted
    sigma1, rho1 = math.sqrt(t.sigma1_sq), t.rho1
    sigma2, rho2 = math.sqrt(t.sigma2_sq), t.rho2
    a = sol.alpha_star
    return _berry_esseen_prefactor_log2(sigma1, rho1) + (
        a / (1.0 - a)
    ) * _berry_esseen_prefactor_log2(sigma2, rho2)


@dataclass(frozen=True)
class ConverseConstants:
    """Constant block of the converse bound R*_n >= pragmatic - C/n, n > N0.

    p, q, r are the Taylor/Berry-Esseen coefficients; N1, N2 are the
    smallest blocklengths at which log2(n) is dominated by p*sqrt(n) and
    p(1-alpha*)*n respectively; N0 is the overall validity threshold.
    ``achievability_c`` is bundled for one-stop reporting.
    """

    alpha_star: float
    delta: float
    C: float
    N0: float
    p: float
    q: float
    r: float
    N1: int
    N2: int
    achievability_c: float
    envelope: MomentEnvelope

    def __post_init__(self) -> None:
        checks = [self.p > 0.0, self.q > 0.0, self.r > 0.0]
        if not all(checks):
            raise DomainError("converse constants must be strictly positive")

    def to_dict(self) -> dict:
        return {
            "alpha_star": self.alpha_star,
            "delta_bits": self.delta,
            "C": self.C,
            "N0": self.N0,
            "p": self.p,
            "q": self.q,
            "r": self.r,
            "N1": self.N1,
            "N2": self.N2,
            "achievability_c": self.achievability_c,
            "sigma3_inf_sq": self.envelope.sigma3_inf_sq,
            "sigma3_sup_sq": self.envelope.sigma3_sup_sq,
            "rho3_sup": self.envelope.rho3_sup,
        }


def _first_n_with(predicate, start: int) -> int:
    """min{n >= start : predicate(n)} for predicates of the form
    log2(n) <= g(n) with log2(n)/g(n) eventually decreasing.

    A direct ascending scan, accelerated by doubling and bisection once the
    predicate region is bracketed; both ratios involved are strictly
    decreasing beyond e**2, so the first hit is well defined and the
    bracketed search returns exactly the scan's answer.
    """
    if predicate(start):
        return start
    lo = start  # predicate False here
    hi = start * 2
    while not predicate(hi):
        lo = hi
        hi *= 2
        if hi > 1 << 200:  # pragma: no cover - absurd inputs
            raise DomainError("threshold search diverged")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if predicate(mid):
            hi = mid
        else:
            lo = mid
    return hi


def converse_constants(p_src: SourcePmf, delta: float) -> ConverseConstants:
    """Assemble C, N0, p, q, r, N1, N2 from the tilted moments at alpha*
    and the moment envelope over the whole tilt interval."""
    sol = solve_alpha_star(p_src, delta)
    env = moment_envelope(p_src)
    a = sol.alpha_star
    sigma3_sq = sol.tilted.sigma3_sq
    sigma3_tilde_sq = env.sigma3_inf_sq
    sigma3_hat_sq = env.sigma3_sup_sq
    rho3_hat = env.rho3_sup
    sigma3_tilde_cubed = sigma3_tilde_sq ** 1.5

    p_const = LOG2E * (1.0 - a) * sigma3_sq
    q_const = (LOG2E / 2.0) * (sigma3_hat_sq + rho3_hat)
    r_const = (
        19.0
        * LOG2E
        * (1.0 - a)
        * (rho3_hat / sigma3_tilde_cubed + 1.0)
        * math.sqrt(sigma3_sq + rho3_hat)
    )
    big_c = (
        (1.0 + q_const + r_const) / (1.0 - a)
        + (LOG2E / 2.0) * abs(sigma3_tilde_sq - (1.0 - a) * rho3_hat)
        + (LOG2E / 2.0) * (sigma3_hat_sq + rho3_hat)
        + 1.0
    )
    n1 = _first_n_with(lambda n: math.log2(n) <= p_const * math.sqrt(n), 8)
    n2 = _first_n_with(lambda n: math.log2(n) <= p_const * (1.0 - a) * n, 3)
    n0 = max(
        4.4 * (rho3_hat / sigma3_tilde_cubed + 1.0) ** 2,
        4.0 * (1.0 + q_const + r_const) ** 2 / p_const ** 2,
        2.0 * (1.0 + q_const + r_const) / (p_const * (1.0 - a)),
        float(n1),
        float(n2),
    )
    return ConverseConstants(
        alpha_star=a,
        delta=delta,
        C=big_c,
        N0=n0,
        p=p_const,
        q=q_const,
        r=r_const,
        N1=n1,
        N2=n2,
        achievability_c=achievability_constant(p_src, delta),
        envelope=env,
    )


def universal_rate_bound(p: SourcePmf, n: int, delta: float) -> float:
    """Rate guarantee of the universal code, main terms only:

        H(P_alpha*) + ((m-2)/2 - 1/(2(1-alpha*))) * log2(n)/n.

    An additional O(1)/n residual exists but carries no explicit constant;
    it is deliberately not folded in here, and the codec sweeps pin an
    empirical stand-in for it.  At m = 2 this collapses to the pragmatic
    rate exactly.
    """
    if n < 1:
        raise DomainError(f"blocklength must be >= 1, got {n}")
    sol = solve_alpha_star(p, delta)
    m = p.m
    coeff = (m - 2) / 2.0 - 1.0 / (2.0 * (1.0 - sol.alpha_star))
    return sol.h_tilted + coeff * math.log2(n) / n


def prefix_adjust(rate_per_symbol: float, n: int) -> float:
    """One-to-one limit -> prefix-free limit: add exactly 1/n per symbol."""
    if n < 1:
        raise DomainError(f"blocklength must be >= 1, got {n}")
    return rate_per_symbol + 1.0 / n


@dataclass(frozen=True)
class RateLadder:
    """One row of the approximation ladder at a given (n, epsilon)."""

    n: int
    epsilon: float
    delta: float
    shannon: float
    strassen: float
    blahut: float | None
    pragmatic: float | None
    exact: float | None
    note: str = ""


def compute_rate_ladder(
    p: SourcePmf,
    n: int,
    epsilon: float,
    *,
    include_exact: bool = True,
    cap_types: int = exact_limits.DEFAULT_TYPE_CAP,
    prefix_mode: bool = False,
) -> RateLadder:
    """Evaluate every ladder column at one (n, epsilon) point.

    Columns that are undefined at this point (exponent out of range, or the
    exact computation infeasible) come back as None with a note; in prefix
    mode the exact column is shifted by the 1/n prefix penalty.
    """
    delta = epsilon_to_delta(epsilon, n)
    notes = []
    blahut = pragmatic = None
    try:
        sol = _solve_for(p, n, epsilon)
        blahut = sol.h_tilted
        pragmatic = sol.h_tilted - math.log2(n) / (2.0 * n * (1.0 - sol.alpha_star))
    except DomainError as exc:
        notes.append(f"tilted columns unavailable: {exc}")
    exact = None
    if include_exact:
        try:
            exact = exact_limits.optimal_rate(p, n, epsilon, cap_types=cap_types)
            if prefix_mode:
                exact = prefix_adjust(exact, n)
        except ResourceLimitError as exc:
            notes.append(f"exact column infeasible: {exc}")
    return RateLadder(
        n=n,
        epsilon=epsilon,
        delta=delta,
        shannon=shannon_rate(p),
        strassen=strassen_rate(p, n, epsilon),
        blahut=blahut,
        pragmatic=pragmatic,
        exact=exact,
        note="; ".join(notes),
    )


_LADDER_COLUMNS = ("n", "epsilon", "delta", "exact", "shannon", "strassen", "blahut", "pragmatic")


def _cell(value, digits: int | None) -> str:
    if value is None:
        return "-"
    if digits is None:
        return repr(value)
    return f"{value:.{digits}f}"


def ladder_to_csv(rows: list[RateLadder], *, digits: int | None = None) -> str:
    """CSV with full-precision cells by default; '-' marks unavailable ones."""
    out = [",".join(_LADDER_COLUMNS)]
    for r in rows:
        out.append(
            ",".join(
                [
                    str(r.n),
                    repr(r.epsilon),
                    repr(r.delta),
                    _cell(r.exact, digits),
                    _cell(r.shannon, digits),
                    _cell(r.strassen, digits),
                    _cell(r.blahut, digits),
                    _cell(r.pragmatic, digits),
                ]
            )
        )
    return "\n".join(out) + "\n"


def ladder_to_markdown(rows: list[RateLadder], *, digits: int = 3) -> str:
    """Markdown table rounded for display (3 decimals by default)."""
    header = "| epsilon | exact | shannon | strassen | blahut | pragmatic |"
    sep = "|---|---|---|---|---|---|"
    lines = [header, sep]
    for r in rows:
        lines.append(
            "| "
            + " | ".join(
                [
                    f"{r.epsilon:g}",
                    _cell(r.exact, digits),
                    _cell(r.shannon, digits),
                    _cell(r.strassen, digits),
                    _cell(r.blahut, digits),
                    _cell(r.pragmatic, digits),
                ]
            )
            + " |"
        )
    return "\n".join(lines) + "\n"


def ladder_to_json(rows: list[RateLadder]) -> str:
    payload = [
        {
            "n": r.n,
            "epsilon": r.epsilon,
            "delta": r.delta,
            "exact": r.exact,
            "shannon": r.shannon,
            "strassen": r.strassen,
            "blahut": r.blahut,
            "pragmatic": r.pragmatic,
            "note": r.note,
        }
        for r in rows
    ]
    return json.dumps(payload, indent=2)
