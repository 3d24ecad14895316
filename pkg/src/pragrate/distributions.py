"""Probability vectors, entropies, divergences, and exponential tilting.

Everything here is a pure function of its arguments; the value types are
frozen dataclasses, safe to share between threads.

Units
-----
Entropies, divergences and normalizer logs are in bits (log base 2).
The centered moments of log-likelihoods (the sigma**2 and rho fields of
:class:`TiltedPoint`) are in nats, i.e. computed from natural logs; the
conversion factor ``LOG2E`` appears exactly where a bit-valued quantity is
assembled from nat-valued moments.

The tilted family
-----------------
For a full-support pmf P and alpha in (0, 1], the tilted pmf is

    P_alpha(x) = P(x)**alpha / Z_alpha,   Z_alpha = sum_x P(x)**alpha.

It interpolates between the uniform distribution (alpha -> 0) and P itself
(alpha = 1).  :func:`tilt` returns the tilted pmf together with the second
and third centered moments, under P_alpha, of the three log-likelihoods

    log_e P_alpha(X),   log_e [P_alpha(X)/P(X)],   log_e P(X),

(indices 1, 2, 3 below).  Because the first two are affine in the third,

    sigma2_sq = (1-alpha)**2 * sigma3_sq,   rho2 = (1-alpha)**3 * rho3,

which downstream property tests verify to 1e-10 relative.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .errors import DistributionError, DomainError
from .numerics import LOG2E, neumaier_sum

SUM_ABS_TOL = 1e-12

PmfLike = Union["SourcePmf", Sequence[float]]


@dataclass(frozen=True)
class SourcePmf:
    """A full-support probability vector over an alphabet of size m >= 2.

    ``exact`` carries the entries as exact rationals when the pmf was built
    from decimal strings or Fractions summing to exactly 1; it enables the
    exact-rational code paths of the optimal-code evaluator.
    """

    probs: tuple[float, ...]
    exact: tuple[Fraction, ...] | None = None

    def __post_init__(self) -> None:
        if len(self.probs) < 2:
            raise DistributionError("a source pmf needs at least 2 symbols")
        if any(not (x > 0.0) or x > 1.0 for x in self.probs):
            raise DistributionError(
                f"source pmf entries must lie in (0, 1]: {self.probs}"
            )
        total = neumaier_sum(self.probs)
        if abs(total - 1.0) > SUM_ABS_TOL:
            # Deliberately no silent renormalization: that would hide caller bugs.
            raise DistributionError(
                f"source pmf sums to {total!r}, outside 1 +/- {SUM_ABS_TOL}"
            )
        if self.exact is not None:
            if len(self.exact) != len(self.probs):
                raise DistributionError("exact/float entry count mismatch")
            if sum(self.exact) != 1:
                raise DistributionError("exact entries must sum to exactly 1")

    @property
    def m(self) -> int:
        return len(self.probs)

    @property
    def is_uniform(self) -> bool:
        lo, hi = min(self.probs), max(self.probs)
        return hi - lo <= 1e-15

    def log2_probs(self) -> tuple[float, ...]:
        return tuple(math.log2(x) for x in self.probs)

    @classmethod
    def from_values(cls, values: Sequence) -> "SourcePmf":
        """Build from floats, Fractions, ints, or decimal strings.

        Exact rationals are preserved only when every entry is given in an
        exact form (not a float) and the exact entries sum to exactly 1.
        """
        exact: list[Fraction] | None = []
        floats: list[float] = []
        for v in values:
            if isinstance(v, float):
                exact = None
            elif exact is not None:
                try:
                    exact.append(Fraction(v))
                except (ValueError, TypeError):
                    exact = None
            floats.append(float(v))
        if exact is not None and sum(exact) != 1:
            exact = None
        return cls(tuple(floats), tuple(exact) if exact is not None else None)

    @classmethod
    def parse(cls, text: str) -> "SourcePmf":
        """Parse a JSON array (``[0.2, 0.8]``) or comma-separated string (``0.2,0.8``).

        Decimal literals are read exactly, so ``0.2`` becomes the rational 1/5.
        """
        text = text.strip()
        if not text:
            raise DistributionError("empty source pmf specification")
        if text.startswith("["):
            try:
                values = json.loads(text, parse_float=Fraction, parse_int=Fraction)
            except json.JSONDecodeError as exc:
                raise DistributionError(f"bad JSON pmf: {exc}") from exc
            if not isinstance(values, list):
                raise DistributionError("JSON pmf must be an array of numbers")
            return cls.from_values(values)
        tokens = [tok.strip() for tok in text.split(",")]
        try:
            values = [Fraction(tok) for tok in tokens]
        except (ValueError, ZeroDivisionError) as exc:
            raise DistributionError(f"bad pmf entry in {text!r}: {exc}") from exc
        return cls.from_values(values)

    @classmethod
    def load(cls, spec: str) -> "SourcePmf":
        """Parse an inline spec, or read one from a file if ``spec`` names one."""
        if os.path.exists(spec):
            with open(spec, "r", encoding="utf-8") as fh:
                return cls.parse(fh.read())
        return cls.parse(spec)


def _as_prob_vector(p: PmfLike, *, what: str) -> tuple[float, ...]:
    """Validate a probability vector; zeros allowed (empirical types)."""
    if isinstance(p, SourcePmf):
        return p.probs
    vec = tuple(float(x) for x in p)
    if len(vec) < 1:
        raise DistributionError(f"{what}: empty vector")
    if any(x < 0.0 for x in vec):
        raise DistributionError(f"{what}: negative entries in {vec}")
    total = neumaier_sum(vec)
    if abs(total - 1.0) > SUM_ABS_TOL:
        raise DistributionError(f"{what}: sums to {total!r}, not 1")
    return vec


def entropy(p: PmfLike) -> float:
    """Shannon entropy -sum p(x) log2 p(x) in bits, with 0*log 0 = 0.

    Accepts a SourcePmf or any probability vector (zeros allowed, so
    empirical types can be fed in directly).
    """
    vec = _as_prob_vector(p, what="entropy")
    h = -neumaier_sum(x * math.log2(x) for x in vec if x > 0.0)
    return 0.0 if h == 0.0 else h  # normalizes -0.0


def kl_divergence(q: PmfLike, p: PmfLike) -> float:
    """Relative entropy D(q || p) = sum q(x) log2 [q(x)/p(x)] in bits.

    Requires supp(q) a subset of supp(p); q may have zeros.
    """
    qv = _as_prob_vector(q, what="kl_divergence q")
    pv = _as_prob_vector(p, what="kl_divergence p")
    if len(qv) != len(pv):
        raise DomainError("kl_divergence: alphabet size mismatch")
    terms = []
    for qx, px in zip(qv, pv):
        if qx == 0.0:
            continue
        if px == 0.0:
            raise DomainError("kl_divergence: q puts mass where p has none")
        terms.append(qx * math.log2(qx / px))
    d = neumaier_sum(terms)
    return max(d, 0.0) if abs(d) < 1e-15 else d


@dataclass(frozen=True)
class TiltedPoint:
    """The tilted pmf P_alpha with its normalizer and log-likelihood moments.

    ``logZ`` is log2 of the normalizer; ``entropy_bits`` and ``kl_bits`` are
    H(P_alpha) and D(P_alpha || P), precomputed from the same weighted sums
    as the moments so that root finders see a smooth, cheap map.
    """

    alpha: float
    pmf: SourcePmf
    logZ: float
    sigma1_sq: float
    rho1: float
    sigma2_sq: float
    rho2: float
    sigma3_sq: float
    rho3: float
    entropy_bits: float
    kl_bits: float
    third_central_moment3: float  # signed E[(log_e P(X) - mean)^3], nats^3


def _weighted_moments(weights: Sequence[float], values: Sequence[float]) -> tuple[float, float, float, float]:
    """Mean, variance, absolute third central moment, signed third central moment."""
    mean = neumaier_sum(w * v for w, v in zip(weights, values))
    var = neumaier_sum(w * (v - mean) ** 2 for w, v in zip(weights, values))
    rho = neumaier_sum(w * abs(v - mean) ** 3 for w, v in zip(weights, values))
    m3 = neumaier_sum(w * (v - mean) ** 3 for w, v in zip(weights, values))
    return mean, max(var, 0.0), max(rho, 0.0), m3


def tilt(p: SourcePmf, alpha: float) -> TiltedPoint:
    """Exponentially tilt ``p``: returns P_alpha, Z_alpha and all moments.

    alpha must lie in (0, 1]; alpha = 1 reproduces ``p`` itself.
    """
    if not isinstance(p, SourcePmf):
        raise DomainError("tilt requires a SourcePmf (full support)")
    if not 0.0 < alpha <= 1.0:
        raise DomainError(f"tilt requires alpha in (0, 1], got {alpha!r}")
    ln_p = [math.log(x) for x in p.probs]
    if alpha == 1.0:
        # No tilt: P_1 = P and Z_1 = 1 exactly.
        scaled, ln_z, weights = ln_p, 0.0, list(p.probs)
    else:
        scaled = [alpha * lp for lp in ln_p]
        peak = max(scaled)
        zs = [math.exp(s - peak) for s in scaled]
        z_shifted = neumaier_sum(zs)
        ln_z = peak + math.log(z_shifted)
        weights = [z / z_shifted for z in zs]

    t1 = [s - ln_z for s in scaled]            # log_e P_alpha(x)
    t3 = ln_p                                  # log_e P(x)
    t2 = [a - b for a, b in zip(t1, t3)]       # log_e [P_alpha/P](x)

    mean1, sigma1_sq, rho1, _ = _weighted_moments(weights, t1)
    mean2, sigma2_sq, rho2, _ = _weighted_moments(weights, t2)
    _, sigma3_sq, rho3, m3 = _weighted_moments(weights, t3)

    return TiltedPoint(
        alpha=alpha,
        pmf=SourcePmf(tuple(weights)),
        logZ=ln_z * LOG2E,
        sigma1_sq=sigma1_sq,
        rho1=rho1,
        sigma2_sq=sigma2_sq,
        rho2=rho2,
        sigma3_sq=sigma3_sq,
        rho3=rho3,
        entropy_bits=-mean1 * LOG2E,
        kl_bits=max(mean2 * LOG2E, 0.0),
        third_central_moment3=m3,
    )


@dataclass(frozen=True)
class TiltedDerivatives:
    """Closed-form derivatives along the tilted family at a fixed alpha.

    dD_dalpha, d2D_dalpha2 differentiate D(P_alpha || P) in bits;
    dH_dalpha, d2H_dalpha2 differentiate H(P_alpha) in bits;
    dsigma3sq_dalpha differentiates the nat-valued variance sigma3_sq, and
    equals the signed third central moment of log_e P(X) under P_alpha.
    """

    dD_dalpha: float
    d2D_dalpha2: float
    dH_dalpha: float
    d2H_dalpha2: float
    dsigma3sq_dalpha: float


def tilted_derivatives(p: SourcePmf, alpha: float) -> TiltedDerivatives:
    """Derivatives of D(P_alpha||P), H(P_alpha) and sigma3_sq at alpha in (0, 1)."""
    if not 0.0 < alpha < 1.0:
        raise DomainError(
            f"tilted_derivatives requires alpha strictly inside (0, 1), got {alpha!r}"
        )
    t = tilt(p, alpha)
    s3 = t.sigma3_sq
    m3 = t.third_central_moment3
    return TiltedDerivatives(
        dD_dalpha=(alpha - 1.0) * s3 * LOG2E,
        d2D_dalpha2=LOG2E * (s3 + (alpha - 1.0) * m3),
        dH_dalpha=-LOG2E * alpha * s3,
        d2H_dalpha2=-LOG2E * (s3 + alpha * m3),
        dsigma3sq_dalpha=m3,
    )


def tilt_identity_residual(p: SourcePmf, q: PmfLike, alpha: float) -> float:
    """Residual of the exact tilting identity linking D, H and P_alpha.

    For any pmf Q (P full support) and alpha in (0, 1),

        alpha [D(Q||P) - D(P_alpha||P)] = D(Q||P_alpha) + (1-alpha)[H(Q) - H(P_alpha)]

    holds identically; the returned left-minus-right value is zero up to
    floating-point noise (|residual| <= 1e-11 over the valid domain).
    """
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha!r}")
    t = tilt(p, alpha)
    lhs = alpha * (kl_divergence(q, p) - t.kl_bits)
    rhs = kl_divergence(q, t.pmf) + (1.0 - alpha) * (entropy(q) - t.entropy_bits)
    return lhs - rhs
