"""Deviation functionals: the left-hand sides of the verified inequalities.

The central object is the lambda-family functional

    F(lam) = (lam - 1) f(m) - lam (f(a) + f(b))/2 + avg(f),

where m is the midpoint and avg(f) the average value over [a, b].  Its
specializations are the classical quadrature gaps:

    lam = 0    midpoint gap        avg(f) - f(m)
    lam = 1    (minus) trapezoid   avg(f) - (f(a)+f(b))/2
    lam = 1/3  (minus) Simpson deviation

Signed values are retained; absolute values are taken only where a bound
claim demands it.  Polynomials with rational coefficients are evaluated on
the exact rational path automatically.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import kernel, oracle
from .corpus import Interval, TestFunction
from .oracle import integrate_exact_poly, poly_eval_exact

__all__ = [
    "DeviationValue",
    "average_value",
    "average_value_exact",
    "functional_lambda",
    "functional_lambda_exact",
    "identity_rhs",
    "identity_residual",
    "hh_gap_left",
    "hh_gap_right",
    "hh_gap_left_exact",
    "hh_gap_right_exact",
    "hh_p_check",
    "simpson_deviation",
    "simpson_deviation_exact",
]


@dataclass(frozen=True)
class DeviationValue:
    """Signed deviation with its absolute value."""

    value: float

    @property
    def abs_value(self) -> float:
        return abs(self.value)


def _require_subdomain(f: TestFunction, domain: Interval) -> None:
    if not f.domain.contains(domain):
        raise ValueError(
            f"interval [{domain.lo}, {domain.hi}] is outside the validity "
            f"domain of {f.id} [{f.domain.lo}, {f.domain.hi}]"
        )


def average_value(f: TestFunction, domain: Interval, tol: float = 1e-12) -> float:
    """Average value of f over the interval, preferring exact routes.

    Order of preference: exact rational integration for polynomials, then a
    closed-form antiderivative difference, then the adaptive oracle.
    """
    _require_subdomain(f, domain)
    if f.poly_coeffs is not None:
        return float(average_value_exact(f, domain))
    if f.exact_integral is not None:
        return f.exact_integral(domain.lo, domain.hi) / domain.width
    return oracle.integrate(f.f, domain, tol).value / domain.width


def average_value_exact(f: TestFunction, domain) -> Fraction:
    """Exact average value; requires the polynomial coefficient path."""
    if f.poly_coeffs is None:
        raise ValueError(f"{f.id} has no exact rational path")
    lo, hi = Fraction(domain.lo), Fraction(domain.hi)
    return integrate_exact_poly(f.poly_coeffs, (lo, hi)) / (hi - lo)


def functional_lambda(
    f: TestFunction,
    domain: Interval,
    lam: float,
    avg: Optional[float] = None,
) -> DeviationValue:
    """The lambda-family deviation functional, signed.

    ``avg`` short-circuits the integral when the caller already has it
    (campaigns reuse one average across the whole lambda grid).
    """
    if not 0.0 <= lam <= 1.0:
        raise ValueError("lam must lie in [0, 1]")
    if avg is None:
        avg = average_value(f, domain)
    fm = float(f.f(domain.midpoint))
    fa, fb = float(f.f(domain.lo)), float(f.f(domain.hi))
    value = (lam - 1.0) * fm - lam * (fa + fb) / 2.0 + avg
    return DeviationValue(value)


def functional_lambda_exact(f: TestFunction, domain, lam) -> Fraction:
    """Exact rational value of the functional (polynomials only)."""
    lo, hi = Fraction(domain.lo), Fraction(domain.hi)
    lf = Fraction(lam)
    if not 0 <= lf <= 1:
        raise ValueError("lam must lie in [0, 1]")
    if f.poly_coeffs is None:
        raise ValueError(f"{f.id} has no exact rational path")
    avg = average_value_exact(f, domain)
    m = (lo + hi) / 2
    fm = poly_eval_exact(f.poly_coeffs, m)
    fa = poly_eval_exact(f.poly_coeffs, lo)
    fb = poly_eval_exact(f.poly_coeffs, hi)
    return (lf - 1) * fm - lf * (fa + fb) / 2 + avg


def identity_rhs(
    f: TestFunction, domain: Interval, lam: float, tol: float = 1e-12
) -> float:
    """Kernel-integral side of the identity: (b-a)^2 int k(t) f''(ta+(1-t)b) dt.

    The t-integral is split at the kernel branch point and at the sign-change
    abscissae so each oracle call sees a smooth piece.
    """
    _require_subdomain(f, domain)
    if not 0.0 <= lam <= 1.0:
        raise ValueError("lam must lie in [0, 1]")
    a, b = domain.lo, domain.hi

    def integrand(t):
        return kernel.kernel_value(t, lam) * f.d2(t * a + (1.0 - t) * b)

    pts = sorted({0.0, 1.0, *(p for p in (lam, 0.5, 1.0 - lam) if 0.0 < p < 1.0)})
    total = 0.0
    for lo, hi in zip(pts[:-1], pts[1:]):
        total += oracle.integrate(integrand, (lo, hi), tol).value
    return (b - a) ** 2 * total


def identity_residual(
    f: TestFunction, domain: Interval, lam: float, tol: float = 1e-12
) -> float:
    """Absolute difference between the functional and its kernel integral."""
    lhs = functional_lambda(f, domain, lam).value
    rhs = identity_rhs(f, domain, lam, tol)
    return abs(lhs - rhs)


def hh_gap_left(f: TestFunction, domain: Interval) -> float:
    """avg(f) - f(midpoint); nonnegative for convex f."""
    return average_value(f, domain) - float(f.f(domain.midpoint))


def hh_gap_right(f: TestFunction, domain: Interval) -> float:
    """(f(a)+f(b))/2 - avg(f); nonnegative for convex f."""
    fa, fb = float(f.f(domain.lo)), float(f.f(domain.hi))
    return (fa + fb) / 2.0 - average_value(f, domain)


def hh_gap_left_exact(f: TestFunction, domain) -> Fraction:
    lo, hi = Fraction(domain.lo), Fraction(domain.hi)
    if f.poly_coeffs is None:
        raise ValueError(f"{f.id} has no exact rational path")
    return average_value_exact(f, domain) - poly_eval_exact(
        f.poly_coeffs, (lo + hi) / 2
    )


def hh_gap_right_exact(f: TestFunction, domain) -> Fraction:
    lo, hi = Fraction(domain.lo), Fraction(domain.hi)
    if f.poly_coeffs is None:
        raise ValueError(f"{f.id} has no exact rational path")
    fa = poly_eval_exact(f.poly_coeffs, lo)
    fb = poly_eval_exact(f.poly_coeffs, hi)
    return (fa + fb) / 2 - average_value_exact(f, domain)


def hh_p_check(f: TestFunction, domain: Interval, tol: float = 1e-12) -> bool:
    """Two-sided average-value check for P-functions:

    f(m) <= 2 avg(f) and 2 avg(f) <= 2 (f(a) + f(b)), with margin >= -tol.
    """
    avg = average_value(f, domain)
    fm = float(f.f(domain.midpoint))
    fa, fb = float(f.f(domain.lo)), float(f.f(domain.hi))
    return (2.0 * avg - fm >= -tol) and (2.0 * (fa + fb) - 2.0 * avg >= -tol)


def simpson_deviation(f: TestFunction, domain: Interval) -> DeviationValue:
    """Signed single-panel Simpson deviation from the average value:

    (1/3) [ (f(a)+f(b))/2 + 2 f(m) ] - avg(f).

    Equals minus the lambda-family functional at lam = 1/3.
    """
    avg = average_value(f, domain)
    fm = float(f.f(domain.midpoint))
    fa, fb = float(f.f(domain.lo)), float(f.f(domain.hi))
    value = ((fa + fb) / 2.0 + 2.0 * fm) / 3.0 - avg
    return DeviationValue(value)


def simpson_deviation_exact(f: TestFunction, domain) -> Fraction:
    return -functional_lambda_exact(f, domain, Fraction(1, 3))
