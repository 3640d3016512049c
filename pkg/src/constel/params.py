"""Decay-parameter functions driving every bound in the package.

Three maps on integers t: a decay exponent ``phi``, its midpoint companion
``eta``, and an accumulator ``gamma``.  A parameter family is *compliant* when
for every t in the tested range

    gamma(t) - gamma(t-1) >= 8*phi(t-1)
    1 - gamma(t-1)        >= 8*phi(t-1)
    phi(t-1) > eta(t) > phi(t)
    phi(t-1) - eta(t) > phi(t) - eta(t+1)

The default family is phi(t) = (1/(8*alpha)) / ((t+10) * log2(t+10)^2) with
alpha the sum of 1/((i+10) * log2(i+10)^2) over i >= -1, eta the midpoint of
consecutive phi values, and gamma the running sum of 8*phi.  alpha is
normalising: the gamma increments then total exactly 1 in the limit, which is
what keeps gamma inside (0, 1).

Everything is enclosed rigorously.  alpha gets a partial sum in interval
arithmetic plus a tail bound: either a plain integral sandwich, or a
second-order Euler-Maclaurin correction whose remainder is bounded by
(1/720) * integral of the fourth derivative, giving width well under 2^-64.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable, Mapping, Optional

from .bigreal import (
    BigReal,
    certainly_ge,
    certainly_gt,
    get_precision,
    hull,
    log,
    log2,
)

DEFAULT_ALPHA_TERMS = 100_000

# series index substitution: term at i is 1/((i+10) log2(i+10)^2), so with
# k = i + 10 the sum runs over k >= 9
_FIRST_K = 9


def _term(k: int) -> BigReal:
    lg = log2(BigReal.from_int(k))
    return 1 / (k * lg * lg)


def _ln2_sq() -> BigReal:
    l2 = log(BigReal.from_int(2))
    return l2 * l2


def _tail_simple(n: int) -> BigReal:
    """Encloses the series tail from k = n on: [I, I + f(n)] for the exact
    integral I = (ln 2)^2 / ln n, valid because the summand decreases."""
    integral = _ln2_sq() / log(BigReal.from_int(n))
    return hull(integral, integral + _term(n))


def _tail_euler_maclaurin(n: int) -> BigReal:
    """Second-order Euler-Maclaurin enclosure of the tail from k = n.

    With f(x) = c / (x (ln x)^2), c = (ln 2)^2, the tail equals
    I + f(n)/2 - f'(n)/12 + f'''(n)/720 + R,  |R| <= (1/720) I4
    where I4 bounds the integral of |f''''| from n on.  The derivative
    polynomials in 1/ln(x) are expanded explicitly below.
    """
    c = _ln2_sq()
    u = log(BigReal.from_int(n))
    iu = 1 / u
    iu2 = iu * iu
    iu3 = iu2 * iu
    iu4 = iu2 * iu2
    iu5 = iu4 * iu
    iu6 = iu3 * iu3
    inv_n = BigReal.from_fraction(Fraction(1, n))
    inv_n2 = inv_n * inv_n
    inv_n4 = inv_n2 * inv_n2

    integral = c * iu
    f0 = c * inv_n * iu2
    d1 = c * inv_n2 * (iu2 + 2 * iu3)          # -f'(n)
    d3 = c * inv_n4 * (6 * iu2 + 22 * iu3 + 36 * iu4 + 24 * iu5)  # -f'''(n)
    # integral of f'''' from n on, using int x^-5 u^-k <= n^-4 (ln n)^-k / 4
    i4 = c * inv_n4 * (24 * iu2 + 100 * iu3 + 210 * iu4 + 240 * iu5 + 120 * iu6) / 4
    centre = integral + f0 / 2 + d1 / 12 - d3 / 720
    radius = i4 / 720
    return hull(centre - radius, centre + radius)


def alpha_enclosure(terms: int = DEFAULT_ALPHA_TERMS, tail: str = "euler-maclaurin") -> BigReal:
    """Rigorous enclosure of the series constant.

    ``terms`` is the cut index: summands with k below it are added one by one
    in interval arithmetic and the rest is covered by the chosen tail bound.
    """
    if terms <= _FIRST_K:
        raise ValueError(f"terms must exceed {_FIRST_K}, got {terms}")
    if tail == "euler-maclaurin":
        rest = _tail_euler_maclaurin(terms)
    elif tail == "simple":
        rest = _tail_simple(terms)
    else:
        raise ValueError(f"unknown tail bound {tail!r}")
    total = rest
    for k in range(_FIRST_K, terms):
        total = total + _term(k)
    return total


_alpha_cache: dict[int, BigReal] = {}


def alpha_constant() -> BigReal:
    """The normalising constant, enclosed to well under 2^-64 (cached)."""
    prec = get_precision()
    if prec not in _alpha_cache:
        _alpha_cache[prec] = alpha_enclosure()
    return _alpha_cache[prec]


@dataclass(frozen=True)
class ParamFns:
    """A phi/eta/gamma family; ``compliant`` records a passed check."""

    phi: Callable[[int], BigReal]
    eta: Callable[[int], BigReal]
    gamma: Callable[[int], BigReal]
    compliant: bool = False


# gamma is stored as exact dyadic points; the pad keeps the first compliance
# inequality certifiable (slack stays above the rounding noise)
_GAMMA_PAD_BITS = 80


def default_params(t_max: int = 100) -> ParamFns:
    """The default family, compliance-checked up to ``t_max``.

    phi is defined for t >= -2 and eta for t >= -1 (one step below their
    usual range: the t = 1 instances of the monotonicity checks reach back
    that far).  gamma uses an exact rounded-up recurrence so its increments
    provably dominate 8*phi.
    """
    phi_cache: dict[tuple[int, int], BigReal] = {}
    gamma_cache: dict[tuple[int, int], BigReal] = {}

    def phi(t: int) -> BigReal:
        if t < -2:
            raise ValueError(f"phi undefined below t=-2, got {t}")
        key = (get_precision(), t)
        if key not in phi_cache:
            lg = log2(BigReal.from_int(t + 10))
            scale = 1 / (8 * alpha_constant())
            phi_cache[key] = scale / ((t + 10) * lg * lg)
        return phi_cache[key]

    def eta(t: int) -> BigReal:
        if t < -1:
            raise ValueError(f"eta undefined below t=-1, got {t}")
        return (phi(t - 1) + phi(t)) / 2

    def gamma(t: int) -> BigReal:
        if t < -1:
            raise ValueError(f"gamma undefined below t=-1, got {t}")
        key = (get_precision(), t)
        if key not in gamma_cache:
            if t == -1:
                gamma_cache[key] = BigReal.from_int(0)
            else:
                step = gamma(t - 1) + 8 * phi(t - 1) + BigReal.power_of_two(-_GAMMA_PAD_BITS)
                gamma_cache[key] = BigReal(step.hi, step.hi)
        return gamma_cache[key]

    fns = ParamFns(phi=phi, eta=eta, gamma=gamma)
    return replace(fns, compliant=check_param_fns(fns, t_max))


def rational_params(
    phi_table: Mapping[int, Fraction],
    eta_table: Optional[Mapping[int, Fraction]] = None,
    gamma_table: Optional[Mapping[int, Fraction]] = None,
) -> ParamFns:
    """A small hand-picked family for exact cross-checks.

    phi comes from the table; eta defaults to midpoints and gamma to the
    exact running sum of 8*phi.  Dyadic table entries keep every derived
    value a point interval, so comparisons never go inconclusive.  The
    family is returned unchecked (compliant=False); run check_param_fns to
    judge it.
    """
    phi_frac = dict(phi_table)
    lo, hi = min(phi_frac), max(phi_frac)

    def phi(t: int) -> BigReal:
        if t not in phi_frac:
            raise ValueError(f"phi table covers [{lo}, {hi}], got {t}")
        return BigReal.from_fraction(phi_frac[t])

    if eta_table is None:
        def eta_frac(t: int) -> Fraction:
            return (phi_frac[t - 1] + phi_frac[t]) / 2
    else:
        eta_given = dict(eta_table)

        def eta_frac(t: int) -> Fraction:
            return eta_given[t]

    def eta(t: int) -> BigReal:
        try:
            return BigReal.from_fraction(eta_frac(t))
        except KeyError:
            raise ValueError(f"eta undefined at t={t}") from None

    if gamma_table is None:
        def gamma_frac(t: int) -> Fraction:
            if t < -1:
                raise KeyError(t)
            if t == -1:
                return Fraction(0)
            return gamma_frac(t - 1) + 8 * phi_frac[t - 1]
    else:
        gamma_given = dict(gamma_table)

        def gamma_frac(t: int) -> Fraction:
            return gamma_given[t]

    def gamma(t: int) -> BigReal:
        try:
            return BigReal.from_fraction(gamma_frac(t))
        except KeyError:
            raise ValueError(f"gamma undefined at t={t}") from None

    return ParamFns(phi=phi, eta=eta, gamma=gamma)


def check_param_fns(p: ParamFns, t_max: int) -> bool:
    """Verify the four compliance inequalities for every t in [0, t_max].

    Returns False on a certain violation; raises Inconclusive when a margin
    is too small to judge at the working precision.
    """
    if t_max < 1:
        raise ValueError(f"t_max must be at least 1, got {t_max}")
    eight = BigReal.from_int(8)
    one = BigReal.from_int(1)
    for t in range(0, t_max + 1):
        growth = eight * p.phi(t - 1)
        if not certainly_ge(p.gamma(t) - p.gamma(t - 1), growth):
            return False
        if not certainly_ge(one - p.gamma(t - 1), growth):
            return False
        if not certainly_gt(p.phi(t - 1), p.eta(t)):
            return False
        if not certainly_gt(p.eta(t), p.phi(t)):
            return False
        if not certainly_gt(p.phi(t - 1) - p.eta(t), p.phi(t) - p.eta(t + 1)):
            return False
    return True
