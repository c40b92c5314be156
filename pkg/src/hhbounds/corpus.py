"""Test-function corpus and numerical P-convexity checking.

A P-convex function (P-function) is nonnegative and satisfies
``f(lam*x + (1-lam)*y) <= f(x) + f(y)`` for all x, y in the interval and
lam in [0, 1].  The class contains every nonnegative monotone, convex and
quasi-convex function, which is why all corpus members except the narrow
Gaussian bump qualify on positive domains.

The corpus is compiled in; functions are referenced by short id from the
CLI (``poly3``, ``expx``, ``bump``, ...).  Every member carries analytic
first and second derivatives, and an exact antiderivative difference where
one exists in closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from .oracle import integrate_exact_poly

__all__ = [
    "Interval",
    "TestFunction",
    "GridSpec",
    "PViolation",
    "PConvexityReport",
    "check_p_convex",
    "corpus_standard",
    "get_function",
    "function_ids",
]


@dataclass(frozen=True)
class Interval:
    """Integration domain [lo, hi] with lo < hi, both finite."""

    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ValueError("interval endpoints must be finite")
        if not self.lo < self.hi:
            raise ValueError(f"interval requires lo < hi, got [{self.lo}, {self.hi}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi


@dataclass(frozen=True)
class TestFunction:
    """A corpus member with analytic derivatives.

    ``poly_coeffs`` (ascending, exact rationals) enables the exact
    integration path; it is present exactly for the polynomial members.
    ``exact_integral(a, b)`` returns the antiderivative difference where a
    closed form exists.
    """

    __test__ = False  # not a pytest class, despite the name

    id: str
    f: Callable[[float], float]
    d1: Callable[[float], float]
    d2: Callable[[float], float]
    domain: Interval
    tags: frozenset[str] = frozenset()
    d4: Optional[Callable[[float], float]] = None
    exact_integral: Optional[Callable[[float, float], float]] = None
    poly_coeffs: Optional[tuple[Fraction, ...]] = None

    def __repr__(self) -> str:  # keep campaign reprs small
        return f"TestFunction({self.id!r})"


@dataclass(frozen=True)
class GridSpec:
    """Sampling resolution for the P-convexity scan (x, y and lam axes)."""

    nx: int = 41
    ny: int = 41
    nlam: int = 21

    def __post_init__(self) -> None:
        if min(self.nx, self.ny, self.nlam) < 3:
            raise ValueError("grid needs at least 3 points per axis")


@dataclass(frozen=True)
class PViolation:
    """First sampled triple violating the P-inequality: lhs > rhs + tol."""

    x: float
    y: float
    lam: float
    lhs: float
    rhs: float


@dataclass(frozen=True)
class PConvexityReport:
    status: str  # "passed" | "failed" | "undefined"
    samples_checked: int
    witness: Optional[PViolation] = None
    undefined_at: Optional[float] = None

    @property
    def passed(self) -> bool:
        return self.status == "passed"


def _sample(g, x: np.ndarray) -> np.ndarray:
    try:
        y = np.asarray(g(x), dtype=float)
        if y.shape != x.shape:
            raise TypeError
    except Exception:
        y = np.array([float(g(float(xi))) for xi in x.ravel()]).reshape(x.shape)
    return y


def _sample_safe(g, x: np.ndarray) -> np.ndarray:
    """Like :func:`_sample`, but a raising integrand becomes NaN at that point."""
    try:
        return _sample(g, x)
    except Exception:
        flat = np.empty(x.size)
        for i, xi in enumerate(x.ravel()):
            try:
                flat[i] = float(g(float(xi)))
            except Exception:
                flat[i] = math.nan
        return flat.reshape(x.shape)


def check_p_convex(
    g: Callable[[float], float],
    domain: Interval,
    grid: GridSpec = GridSpec(),
    tol_abs: float = 1e-12,
) -> PConvexityReport:
    """Grid check of the P-function condition on ``domain``.

    Scans all (x, y, lam) triples of the grid in lexicographic order and
    reports the first violating triple as witness.  Negativity of g is
    caught by the diagonal triples (x == y), since g(x) <= 2 g(x) fails
    exactly when g(x) < 0.  Non-finite evaluations yield the distinct
    "undefined" status rather than a violation.

    Deterministic for a fixed grid spec.
    """
    xs = np.linspace(domain.lo, domain.hi, grid.nx)
    ys = np.linspace(domain.lo, domain.hi, grid.ny)
    lams = np.linspace(0.0, 1.0, grid.nlam)
    n_samples = grid.nx * grid.ny * grid.nlam

    gx = _sample_safe(g, xs)
    gy = _sample_safe(g, ys)
    for arr, pts in ((gx, xs), (gy, ys)):
        if not np.all(np.isfinite(arr)):
            bad = float(pts[~np.isfinite(arr)][0])
            return PConvexityReport("undefined", n_samples, undefined_at=bad)

    mix = lams[None, None, :] * xs[:, None, None] + (1.0 - lams[None, None, :]) * ys[
        None, :, None
    ]
    gmix = _sample_safe(g, mix)
    if not np.all(np.isfinite(gmix)):
        bad = float(mix[~np.isfinite(gmix)][0])
        return PConvexityReport("undefined", n_samples, undefined_at=bad)

    rhs = gx[:, None, None] + gy[None, :, None]
    viol = gmix > rhs + tol_abs

    # Explicit nonnegativity pass covers asymmetric grids without a diagonal.
    if np.any(gx < -tol_abs) or np.any(gy < -tol_abs):
        pts = xs if np.any(gx < -tol_abs) else ys
        vals = gx if np.any(gx < -tol_abs) else gy
        i = int(np.argmax(vals < -tol_abs))
        w = PViolation(
            x=float(pts[i]), y=float(pts[i]), lam=0.5,
            lhs=float(vals[i]), rhs=float(2 * vals[i]),
        )
        return PConvexityReport("failed", n_samples, witness=w)

    if np.any(viol):
        i, j, k = np.unravel_index(int(np.argmax(viol)), viol.shape)
        w = PViolation(
            x=float(xs[i]),
            y=float(ys[j]),
            lam=float(lams[k]),
            lhs=float(gmix[i, j, k]),
            rhs=float(gx[i] + gy[j]),
        )
        return PConvexityReport("failed", n_samples, witness=w)

    return PConvexityReport("passed", n_samples)


# ---------------------------------------------------------------------------
# Standard corpus
# ---------------------------------------------------------------------------

_BUMP_CENTER = 0.5
_BUMP_WIDTH = 1e-3  # denominator of the squared distance in the exponent


def _monomial(n: int) -> TestFunction:
    coeffs = tuple(Fraction(0) for _ in range(n)) + (Fraction(1),)

    def f(x, _n=n):
        return x**_n

    def d1(x, _n=n):
        return _n * x ** (_n - 1)

    def d2(x, _n=n):
        if _n == 2:
            return 2.0 + 0.0 * x
        return _n * (_n - 1) * x ** (_n - 2)

    def d4(x, _n=n):
        if _n < 4:
            return 0.0 * x
        if _n == 4:
            return 24.0 + 0.0 * x
        k = _n * (_n - 1) * (_n - 2) * (_n - 3)
        return k * x ** (_n - 4)

    def exact(a, b, _coeffs=coeffs):
        return float(integrate_exact_poly(_coeffs, (Fraction(a), Fraction(b))))

    return TestFunction(
        id=f"poly{n}",
        f=f,
        d1=d1,
        d2=d2,
        d4=d4,
        exact_integral=exact,
        poly_coeffs=coeffs,
        domain=Interval(0.0, 10.0),
        tags=frozenset({"nonnegative", "monotone", "convex", "polynomial"}),
    )


def _constant() -> TestFunction:
    coeffs = (Fraction(1),)
    return TestFunction(
        id="const1",
        f=lambda x: 1.0 + 0.0 * x,
        d1=lambda x: 0.0 * x,
        d2=lambda x: 0.0 * x,
        d4=lambda x: 0.0 * x,
        exact_integral=lambda a, b: float(b) - float(a),
        poly_coeffs=coeffs,
        domain=Interval(-100.0, 100.0),
        tags=frozenset({"nonnegative", "convex", "polynomial"}),
    )


def _exponential() -> TestFunction:
    def exact(a, b):
        return math.exp(b) - math.exp(a)

    return TestFunction(
        id="expx",
        f=np.exp,
        d1=np.exp,
        d2=np.exp,
        d4=np.exp,
        exact_integral=exact,
        domain=Interval(-20.0, 20.0),
        tags=frozenset({"nonnegative", "monotone", "convex"}),
    )


def _bump() -> TestFunction:
    c, w = _BUMP_CENTER, _BUMP_WIDTH

    def f(x):
        u = x - c
        return np.exp(-(u * u) / w)

    def d1(x):
        u = x - c
        return -(2.0 * u / w) * np.exp(-(u * u) / w)

    def d2(x):
        u = x - c
        return (4.0 * u * u / (w * w) - 2.0 / w) * np.exp(-(u * u) / w)

    def exact(a, b):
        s = math.sqrt(w)
        return 0.5 * math.sqrt(math.pi * w) * (
            math.erf((b - c) / s) - math.erf((a - c) / s)
        )

    # Narrow validity window: the fourth derivative peaks near 1.2e7, so the
    # relative finite-difference contract on d2 needs a small step size.
    return TestFunction(
        id="bump",
        f=f,
        d1=d1,
        d2=d2,
        exact_integral=exact,
        domain=Interval(0.0, 1.0),
        tags=frozenset({"nonnegative"}),
    )


def corpus_standard() -> tuple[TestFunction, ...]:
    """The compiled-in corpus: x^n for n in 2..5, a constant, exp, and a
    narrow Gaussian bump that is not P-convex around its peak."""
    return (
        _monomial(2),
        _monomial(3),
        _monomial(4),
        _monomial(5),
        _constant(),
        _exponential(),
        _bump(),
    )


_REGISTRY = {fn.id: fn for fn in corpus_standard()}


def function_ids() -> tuple[str, ...]:
    return tuple(_REGISTRY)


def get_function(fid: str) -> TestFunction:
    try:
        return _REGISTRY[fid]
    except KeyError:
        raise KeyError(
            f"unknown function id {fid!r}; known ids: {', '.join(_REGISTRY)}"
        ) from None
