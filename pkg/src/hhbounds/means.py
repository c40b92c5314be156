"""Special means and the power-mean inequality checks for f(x) = x^n.

The generalized log-mean satisfies L_n^n(a, b) = average of x^n over [a, b],
which turns the rule bounds at lam in {0, 1, 1/3} into closed-form
inequalities between the arithmetic mean, the generalized log-mean, and
powers thereof.  Those are checked as claims (never asserted blindly): the
stated constant family is suspect at q > 1 and the checker reproduces its
counterexamples in exact arithmetic.
"""

from __future__ import annotations

import math
from fractions import Fraction

import mpmath

from .oracle import to_mpf
from .records import VerificationRecord

__all__ = [
    "mean_arithmetic",
    "mean_logarithmic",
    "mean_generalized_log",
    "generalized_log_pow_exact",
    "PROP_DENOMINATORS",
    "check_proposition",
]

# Per-proposition power-sum denominators: stated as printed, derived from
# the kernel-moment chain (half denominators).
PROP_DENOMINATORS = {
    "stated": {1: 48, 2: 24, 3: 162},
    "derived": {1: 24, 2: 12, 3: 81},
}

_PROP_LAMBDA = {1: 0.0, 2: 1.0, 3: 1.0 / 3.0}


def _check_positive_pair(alpha: float, beta: float) -> None:
    if alpha <= 0 or beta <= 0:
        raise ValueError("mean arguments must be positive")


def mean_arithmetic(alpha: float, beta: float) -> float:
    _check_positive_pair(alpha, beta)
    return (alpha + beta) / 2.0


def mean_logarithmic(alpha: float, beta: float) -> float:
    _check_positive_pair(alpha, beta)
    if alpha == beta:
        raise ValueError("logarithmic mean requires alpha != beta")
    return (alpha - beta) / (math.log(alpha) - math.log(beta))


def _check_order(n: int) -> None:
    if not isinstance(n, int) or n in (-1, 0):
        raise ValueError("order n must be an integer outside {-1, 0}")


def mean_generalized_log(alpha: float, beta: float, n: int) -> float:
    """[(beta^(n+1) - alpha^(n+1)) / ((n+1)(beta - alpha))]^(1/n)."""
    _check_positive_pair(alpha, beta)
    _check_order(n)
    if alpha == beta:
        raise ValueError("generalized log-mean requires alpha != beta")
    base = (beta ** (n + 1) - alpha ** (n + 1)) / ((n + 1) * (beta - alpha))
    return base ** (1.0 / n)


def generalized_log_pow_exact(a, b, n: int) -> Fraction:
    """L_n^n(a, b) in exact rational arithmetic: the average of x^n."""
    _check_order(n)
    af, bf = Fraction(a), Fraction(b)
    if af == bf:
        raise ValueError("generalized log-mean requires a != b")
    if (af <= 0 or bf <= 0) and n < 0:
        raise ValueError("negative orders require positive arguments")
    return (bf ** (n + 1) - af ** (n + 1)) / ((n + 1) * (bf - af))


def _proposition_lhs_exact(idx: int, a: Fraction, b: Fraction, n: int) -> Fraction:
    ln_pow = generalized_log_pow_exact(a, b, n)
    a_pow_n = ((a + b) / 2) ** n
    a_of_pows = (a**n + b**n) / 2
    if idx == 1:
        return abs(ln_pow - a_pow_n)
    if idx == 2:
        return abs(a_of_pows - ln_pow)
    if idx == 3:
        return abs(a_of_pows / 3 + 2 * a_pow_n / 3 - ln_pow)
    raise ValueError("proposition index must be 1, 2 or 3")


def check_proposition(
    idx: int,
    a,
    b,
    n: int,
    q: float = 1.0,
    variant: str = "stated",
    tol: float = 1e-9,
    eq_tol: float = 1e-12,
    dps: int = 50,
) -> VerificationRecord:
    """Check one special-means inequality for f(x) = x^n on [a, b].

    lhs (exact rational): the mean combination for the given index;
    rhs: |n(n-1)| (b-a)^2 / C * (a^(q(n-2)) + b^(q(n-2)))^(1/q), with C per
    ``PROP_DENOMINATORS``.  The rhs is rational at q = 1 and evaluated at
    ``dps`` decimal digits otherwise, so a reported violation never rests on
    double rounding.  The guard |n(n-1)| >= 3 is not enforced here; callers
    that treat it as a hypothesis filter on n do so themselves.
    """
    if idx not in (1, 2, 3):
        raise ValueError("proposition index must be 1, 2 or 3")
    if variant not in PROP_DENOMINATORS:
        raise ValueError(f"variant must be 'stated' or 'derived', got {variant!r}")
    _check_order(n)
    if not q >= 1.0:
        raise ValueError("q must be >= 1")
    af, bf = Fraction(a), Fraction(b)
    if not 0 < af < bf:
        raise ValueError("requires 0 < a < b")

    denom = PROP_DENOMINATORS[variant][idx]
    lhs = _proposition_lhs_exact(idx, af, bf, n)
    coeff = abs(n * (n - 1)) * (bf - af) ** 2 / denom
    qf = Fraction(q)

    if qf == 1:
        rhs_exact = coeff * (af ** (n - 2) + bf ** (n - 2))
        margin_exact = rhs_exact - lhs
        lhs_f, rhs_f = float(lhs), float(rhs_exact)
        margin_f = float(margin_exact)
        scale = max(1.0, abs(lhs_f), abs(rhs_f))
        if margin_f < -tol * scale:
            status = "violated"
        elif margin_exact == 0:
            status = "equality"
        else:
            status = "holds"
    else:
        with mpmath.workdps(dps):
            qm = to_mpf(qf)
            e = to_mpf(qf * (n - 2))
            power_sum = to_mpf(af) ** e + to_mpf(bf) ** e
            rhs_mp = to_mpf(coeff) * power_sum ** (1 / qm)
            margin_mp = rhs_mp - to_mpf(lhs)
            lhs_f, rhs_f = float(lhs), float(rhs_mp)
            margin_f = float(margin_mp)
        scale = max(1.0, abs(lhs_f), abs(rhs_f))
        if margin_f < -tol * scale:
            status = "violated"
        elif abs(margin_f) <= eq_tol * scale:
            status = "equality"
        else:
            status = "holds"

    fid = f"poly{n}" if 2 <= n <= 5 else f"x^{n}"
    return VerificationRecord(
        claim=f"prop{idx}-{variant}",
        function=fid,
        a=float(af),
        b=float(bf),
        lam=_PROP_LAMBDA[idx],
        q=float(q),
        lhs=lhs_f,
        rhs=rhs_f,
        margin=margin_f,
        status=status,
        exact=True,
    )
