"""Right-hand-side bounds on the deviation functionals.

The lambda-family bounds come in two constant conventions that differ by a
factor of two:

* ``stated``  -- the coefficient family (b-a)^2/48 * (8 lam^3 - 3 lam + 1)
  (small lam) and (b-a)^2/48 * (3 lam - 1) (large lam), paired with the
  power-sum term (|f''(a)|^q + |f''(b)|^q)^(1/q).
* ``derived`` -- the same shapes with /24 in place of /48.  This is the
  constant the kernel-moment chain actually yields, and at q = 1 it
  coincides with :func:`bound_theorem5`.

Both conventions are first-class: the derived family is sound for P-convex
|f''|^q and asserted as an invariant, while the stated family is treated as
a falsifiable claim by the harness.  Rule shortcuts (midpoint, trapezoid,
Simpson) fix lam to 0, 1 and 1/3 respectively.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Optional, Union

import mpmath

from . import kernel
from .corpus import Interval
from .oracle import to_mpf

__all__ = [
    "EndpointData",
    "DerivativeEnvelope",
    "Rule",
    "Variant",
    "RULE_LAMBDA",
    "RULE_LAMBDA_EXACT",
    "bound_theorem5",
    "bound_theorem5_exact",
    "bound_theorem6",
    "bound_theorem6_exact",
    "bound_theorem6_mp",
    "bound_corollary",
    "bound_corollary_exact",
    "bound_bounded_m",
    "bound_bounded_m_exact",
    "bound_classical",
    "bound_classical_exact",
    "compare_bounds",
]

Rule = Literal["midpoint", "trapezoid", "simpson"]
Variant = Literal["stated", "derived"]
MForm = Literal["with_q", "relaxed"]

RULE_LAMBDA: dict[str, float] = {
    "midpoint": 0.0,
    "trapezoid": 1.0,
    "simpson": 1.0 / 3.0,
}
RULE_LAMBDA_EXACT: dict[str, Fraction] = {
    "midpoint": Fraction(0),
    "trapezoid": Fraction(1),
    "simpson": Fraction(1, 3),
}

# Stated per-rule coefficients of the power-sum term: (b-a)^2 / C.
_RULE_DENOMINATOR = {"midpoint": 48, "trapezoid": 24, "simpson": 162}


@dataclass(frozen=True)
class EndpointData:
    """Absolute second-derivative values at the endpoints."""

    m_a: float
    m_b: float

    def __post_init__(self) -> None:
        if self.m_a < 0 or self.m_b < 0:
            raise ValueError("endpoint data must be nonnegative")


@dataclass(frozen=True)
class DerivativeEnvelope:
    """Optional derivative bounds: sup |f''|, a two-sided f'' range, and
    sup |f''''| for the classical fourth-derivative Simpson bound."""

    sup_abs_d2: Optional[float] = None
    lower_d2: Optional[float] = None
    upper_d2: Optional[float] = None
    sup_abs_d4: Optional[float] = None

    def __post_init__(self) -> None:
        if (
            self.lower_d2 is not None
            and self.upper_d2 is not None
            and self.lower_d2 > self.upper_d2
        ):
            raise ValueError("lower_d2 must not exceed upper_d2")
        if self.sup_abs_d2 is not None and self.sup_abs_d2 < 0:
            raise ValueError("sup_abs_d2 must be nonnegative")
        if self.sup_abs_d4 is not None and self.sup_abs_d4 < 0:
            raise ValueError("sup_abs_d4 must be nonnegative")


def _check_q(q: float) -> None:
    if not q >= 1.0:
        raise ValueError(f"q must be >= 1, got {q}")


def _check_variant(variant: str) -> None:
    if variant not in ("stated", "derived"):
        raise ValueError(f"variant must be 'stated' or 'derived', got {variant!r}")


def bound_theorem5(domain: Interval, lam: float, e: EndpointData) -> float:
    """Endpoint-sum deviation bound under P-convexity of |f''|:

    (b-a)^2/24 * (8 lam^3 - 3 lam + 1) * (m_a + m_b)   for lam <= 1/2,
    (b-a)^2/24 * (3 lam - 1) * (m_a + m_b)             for lam >= 1/2.

    The two branches agree at the seam (both give (b-a)^2/48 there).
    """
    return domain.width**2 * kernel.weighted_moment(lam) * (e.m_a + e.m_b)


def bound_theorem5_exact(domain, lam, m_a, m_b) -> Fraction:
    width = Fraction(domain.hi) - Fraction(domain.lo)
    return width**2 * kernel.weighted_moment_exact(lam) * (
        Fraction(m_a) + Fraction(m_b)
    )


def _power_sum(m_a: float, m_b: float, q: float) -> float:
    if q == 1.0:
        return m_a + m_b
    return (m_a**q + m_b**q) ** (1.0 / q)


def bound_theorem6(
    domain: Interval, lam: float, q: float, e: EndpointData, variant: Variant
) -> float:
    """Power-mean deviation bound under P-convexity of |f''|^q.

    With S = (m_a^q + m_b^q)^(1/q), the stated family is
    (b-a)^2/48 * (8 lam^3 - 3 lam + 1) * S (small lam) and
    (b-a)^2/48 * (3 lam - 1) * S (large lam); the derived family replaces
    /48 by /24 and reduces to :func:`bound_theorem5` at q = 1.
    """
    _check_q(q)
    _check_variant(variant)
    s = _power_sum(e.m_a, e.m_b, q)
    factor = 1.0 if variant == "derived" else 0.5
    return domain.width**2 * kernel.weighted_moment(lam) * s * factor


def bound_theorem6_exact(domain, lam, q, m_a, m_b, variant: Variant) -> Fraction:
    """Exact rational power-mean bound; only q = 1 keeps the value rational."""
    _check_variant(variant)
    if Fraction(q) != 1:
        raise ValueError("exact path requires q = 1")
    width = Fraction(domain.hi) - Fraction(domain.lo)
    s = Fraction(m_a) + Fraction(m_b)
    factor = Fraction(1) if variant == "derived" else Fraction(1, 2)
    return width**2 * kernel.weighted_moment_exact(lam) * s * factor


def bound_theorem6_mp(
    domain, lam, q, m_a, m_b, variant: Variant, dps: int = 50
) -> mpmath.mpf:
    """High-precision power-mean bound for irrational q-th roots."""
    _check_variant(variant)
    with mpmath.workdps(dps):
        width = to_mpf(Fraction(domain.hi) - Fraction(domain.lo))
        moment = to_mpf(kernel.weighted_moment_exact(lam))
        qm = to_mpf(Fraction(q))
        ma, mb = to_mpf(m_a), to_mpf(m_b)
        s = (ma**qm + mb**qm) ** (1 / qm)
        factor = 1 if variant == "derived" else mpmath.mpf(0.5)
        return width**2 * moment * s * factor


def bound_corollary(
    rule: Rule, domain: Interval, q: float, e: EndpointData, variant: Variant
) -> float:
    """Rule shortcut of the power-mean bound at lam = 0, 1 or 1/3.

    Stated coefficients: midpoint (b-a)^2/48, trapezoid (b-a)^2/24,
    Simpson (b-a)^2/162.
    """
    return bound_theorem6(domain, RULE_LAMBDA[rule], q, e, variant)


def bound_corollary_exact(rule, domain, q, m_a, m_b, variant: Variant) -> Fraction:
    return bound_theorem6_exact(domain, RULE_LAMBDA_EXACT[rule], q, m_a, m_b, variant)


def bound_bounded_m(
    rule: Rule,
    domain: Interval,
    q: float,
    env: DerivativeEnvelope,
    form: MForm,
    variant: Variant = "stated",
) -> float:
    """Uniform-M forms: with |f''| <= M the power sum collapses to M 2^(1/q).

    ``with_q``  keeps the 2^(1/q) factor: M (b-a)^2 / C * 2^(1/q) with the
    stated C in {48, 24, 162} per rule (halved for the derived variant).
    ``relaxed`` applies 2^(1/q) <= 2: M (b-a)^2 / {24, 12, 81}.
    """
    if env.sup_abs_d2 is None:
        raise ValueError("bound_bounded_m requires env.sup_abs_d2 (M)")
    _check_variant(variant)
    denom = _RULE_DENOMINATOR[rule]
    if variant == "derived":
        denom //= 2
    m = env.sup_abs_d2
    if form == "relaxed":
        return m * domain.width**2 / denom * 2.0
    _check_q(q)
    return m * domain.width**2 / denom * 2.0 ** (1.0 / q)


def bound_bounded_m_exact(
    rule, domain, q, sup_abs_d2, form: MForm, variant: Variant = "stated"
) -> Fraction:
    """Exact path for the uniform-M forms (q = 1 or the relaxed form)."""
    _check_variant(variant)
    denom = _RULE_DENOMINATOR[rule]
    if variant == "derived":
        denom //= 2
    width = Fraction(domain.hi) - Fraction(domain.lo)
    m = Fraction(sup_abs_d2)
    if form == "relaxed":
        return m * width**2 / denom * 2
    if Fraction(q) != 1:
        raise ValueError("exact path requires q = 1 or the relaxed form")
    return m * width**2 / denom * 2


def bound_classical(
    rule: Rule, domain: Interval, env: DerivativeEnvelope, p: int = 4
) -> Union[tuple[float, float], float]:
    """Classical comparison bounds.

    trapezoid: two-sided enclosure [k/3 ((b-a)/2)^2, K/3 ((b-a)/2)^2] of the
    trapezoid gap, from k <= f'' <= K.
    midpoint: two-sided enclosure [gamma (b-a)^2/24, Gamma (b-a)^2/24] of the
    midpoint gap.
    simpson: one-sided sup|f''''| (b-a)^p / 2880 with p in {2, 4}.  The
    classical inequality carries p = 4 (the default); p = 2 evaluates the
    quadratic-exponent variant so dimension analysis can flag it.
    """
    w = domain.width
    if rule == "trapezoid":
        if env.lower_d2 is None or env.upper_d2 is None:
            raise ValueError("trapezoid enclosure requires lower_d2 and upper_d2")
        half_sq = (w / 2.0) ** 2
        return (env.lower_d2 / 3.0 * half_sq, env.upper_d2 / 3.0 * half_sq)
    if rule == "midpoint":
        if env.lower_d2 is None or env.upper_d2 is None:
            raise ValueError("midpoint enclosure requires lower_d2 and upper_d2")
        return (env.lower_d2 * w**2 / 24.0, env.upper_d2 * w**2 / 24.0)
    if rule == "simpson":
        if env.sup_abs_d4 is None:
            raise ValueError("simpson bound requires sup_abs_d4")
        if p not in (2, 4):
            raise ValueError("p must be 2 or 4")
        return env.sup_abs_d4 * w**p / 2880.0
    raise ValueError(f"unknown rule {rule!r}")


def bound_classical_exact(
    rule, domain, *, lower_d2=None, upper_d2=None, sup_abs_d4=None, p: int = 4
):
    """Exact rational version of :func:`bound_classical`."""
    width = Fraction(domain.hi) - Fraction(domain.lo)
    if rule == "trapezoid":
        half_sq = (width / 2) ** 2
        return (Fraction(lower_d2) / 3 * half_sq, Fraction(upper_d2) / 3 * half_sq)
    if rule == "midpoint":
        return (
            Fraction(lower_d2) * width**2 / 24,
            Fraction(upper_d2) * width**2 / 24,
        )
    if rule == "simpson":
        if p not in (2, 4):
            raise ValueError("p must be 2 or 4")
        return Fraction(sup_abs_d4) * width**p / 2880
    raise ValueError(f"unknown rule {rule!r}")


def compare_bounds(
    new_bound: float, classical_bound: float
) -> Literal["new_better", "same", "classical_better"]:
    """Classify which upper bound is tighter, with a relative tie tolerance."""
    if not (math.isfinite(new_bound) and math.isfinite(classical_bound)):
        raise ValueError("bounds must be finite")
    if new_bound < 0 or classical_bound < 0:
        raise ValueError("bounds must be nonnegative")
    tie_tol = 1e-14 * (1.0 + classical_bound)
    if abs(new_bound - classical_bound) <= tie_tol:
        return "same"
    if new_bound < classical_bound:
        return "new_better"
    return "classical_better"
