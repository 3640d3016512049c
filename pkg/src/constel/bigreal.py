"""Rigorous interval arithmetic over MPFR with outward rounding.

The bound-verification code handles magnitudes around 2^(10^8), far beyond
machine floats.  An mpfr value stores sign, mantissa and a bignum exponent,
so such numbers are representable directly; every operation here is computed
twice, once rounded down and once rounded up, so each :class:`BigReal` is a
closed interval certain to contain the exact real it stands for.  MPFR
guarantees correct rounding for all the primitives used (including ``pow``,
``log2`` and ``exp2``), which makes the enclosures sound rather than
heuristic.

Comparisons never guess: a verdict is returned only when the two intervals
are separated, and :class:`Inconclusive` is raised otherwise.  Callers are
expected to retry at a higher working precision, set globally via
:func:`set_precision`, the ``CONSTEL_PRECISION`` environment variable, or the
:func:`precision` context manager.
"""

from __future__ import annotations

import os
from contextlib import contextmanager
from fractions import Fraction
from functools import lru_cache

import gmpy2

PRECISION_ENV = "CONSTEL_PRECISION"
MIN_PRECISION = 64
DEFAULT_PRECISION = 256


class Inconclusive(ArithmeticError):
    """Interval overlap prevented a rigorous verdict; raise the precision."""


def _env_precision() -> int:
    raw = os.environ.get(PRECISION_ENV)
    if raw is None:
        return DEFAULT_PRECISION
    try:
        bits = int(raw)
    except ValueError:
        raise ValueError(f"{PRECISION_ENV} must be an integer, got {raw!r}") from None
    if bits < MIN_PRECISION:
        raise ValueError(f"{PRECISION_ENV} must be at least {MIN_PRECISION}, got {bits}")
    return bits


_precision = _env_precision()


def get_precision() -> int:
    return _precision


def set_precision(bits: int) -> None:
    if bits < MIN_PRECISION:
        raise ValueError(f"precision must be at least {MIN_PRECISION} bits, got {bits}")
    global _precision
    _precision = int(bits)


@contextmanager
def precision(bits: int):
    """Temporarily run at a different working precision."""
    old = _precision
    set_precision(bits)
    try:
        yield
    finally:
        set_precision(old)


@lru_cache(maxsize=32)
def _ctx_pair(prec: int):
    down = gmpy2.context(precision=prec, round=gmpy2.RoundDown)
    up = gmpy2.context(precision=prec, round=gmpy2.RoundUp)
    return down, up


def _ctx():
    return _ctx_pair(_precision)


class BigReal:
    """Closed interval [lo, hi] of mpfr endpoints containing one exact real."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi):
        if not (gmpy2.is_finite(lo) and gmpy2.is_finite(hi)):
            raise OverflowError("interval endpoint left the mpfr exponent range")
        if lo > hi:
            raise ValueError(f"inverted interval: {lo} > {hi}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def __setattr__(self, name, value):
        raise AttributeError("BigReal is immutable")

    # -- construction ------------------------------------------------------

    @staticmethod
    def from_int(k: int) -> "BigReal":
        down, up = _ctx()
        return BigReal(down.add(k, 0), up.add(k, 0))

    @staticmethod
    def from_fraction(q: Fraction) -> "BigReal":
        down, up = _ctx()
        return BigReal(down.div(q.numerator, q.denominator),
                       up.div(q.numerator, q.denominator))

    @staticmethod
    def power_of_two(e: int) -> "BigReal":
        """Exact 2**e (e may be negative)."""
        down, up = _ctx()
        x = down.exp2(down.add(e, 0))
        return BigReal(x, x)

    # -- coercion ----------------------------------------------------------

    @staticmethod
    def wrap(x) -> "BigReal":
        if isinstance(x, BigReal):
            return x
        if isinstance(x, int):
            return BigReal.from_int(x)
        if isinstance(x, Fraction):
            return BigReal.from_fraction(x)
        if isinstance(x, str):
            return BigReal.from_fraction(Fraction(x))
        raise TypeError(f"cannot make a BigReal from {type(x).__name__}")

    # -- queries -----------------------------------------------------------

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def width(self):
        _, up = _ctx()
        return up.sub(self.hi, self.lo)

    def to_fractions(self) -> tuple[Fraction, Fraction]:
        """Exact rational endpoints (mpfr values are dyadic rationals)."""
        return (_mpfr_to_fraction(self.lo), _mpfr_to_fraction(self.hi))

    def contains(self, q) -> bool:
        qlo, qhi = BigReal.wrap(q).to_fractions()
        lo, hi = self.to_fractions()
        return lo <= qlo and qhi <= hi

    def int_lower(self) -> int:
        """Exact floor of the lower endpoint."""
        f = _mpfr_to_fraction(self.lo)
        return f.numerator // f.denominator

    def __repr__(self):
        try:
            flo, fhi = float(self.lo), float(self.hi)
        except OverflowError:
            flo = fhi = float("inf")
        if all(abs(v) < 1e300 for v in (flo, fhi)):
            return f"BigReal({flo:.8g}, {fhi:.8g})"
        down, _ = _ctx()
        return (f"BigReal(2^{float(down.log2(abs(self.lo))):.8g}, "
                f"2^{float(down.log2(abs(self.hi))):.8g})")

    # -- arithmetic --------------------------------------------------------

    def __neg__(self):
        return BigReal(-self.hi, -self.lo)

    def __add__(self, other):
        o = BigReal.wrap(other)
        down, up = _ctx()
        return BigReal(down.add(self.lo, o.lo), up.add(self.hi, o.hi))

    __radd__ = __add__

    def __sub__(self, other):
        o = BigReal.wrap(other)
        down, up = _ctx()
        return BigReal(down.sub(self.lo, o.hi), up.sub(self.hi, o.lo))

    def __rsub__(self, other):
        return BigReal.wrap(other) - self

    def __mul__(self, other):
        o = BigReal.wrap(other)
        down, up = _ctx()
        pairs = [(x, y) for x in (self.lo, self.hi) for y in (o.lo, o.hi)]
        return BigReal(min(down.mul(x, y) for x, y in pairs),
                       max(up.mul(x, y) for x, y in pairs))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = BigReal.wrap(other)
        if o.lo <= 0 <= o.hi:
            raise ZeroDivisionError("divisor interval touches zero")
        down, up = _ctx()
        pairs = [(x, y) for x in (self.lo, self.hi) for y in (o.lo, o.hi)]
        return BigReal(min(down.div(x, y) for x, y in pairs),
                       max(up.div(x, y) for x, y in pairs))

    def __rtruediv__(self, other):
        return BigReal.wrap(other) / self

    def __pow__(self, other):
        # x^y is monotone in each argument separately (direction depending on
        # the other), so box extrema sit at the corners.
        if self.lo <= 0:
            raise ValueError("power base interval must be strictly positive")
        o = BigReal.wrap(other)
        down, up = _ctx()
        pairs = [(x, y) for x in (self.lo, self.hi) for y in (o.lo, o.hi)]
        return BigReal(min(down.pow(x, y) for x, y in pairs),
                       max(up.pow(x, y) for x, y in pairs))


def log2(a: BigReal) -> BigReal:
    if a.lo <= 0:
        raise ValueError("log2 argument interval must be strictly positive")
    down, up = _ctx()
    return BigReal(down.log2(a.lo), up.log2(a.hi))


def log(a: BigReal) -> BigReal:
    if a.lo <= 0:
        raise ValueError("log argument interval must be strictly positive")
    down, up = _ctx()
    return BigReal(down.log(a.lo), up.log(a.hi))


def exp2(a: BigReal) -> BigReal:
    down, up = _ctx()
    return BigReal(down.exp2(a.lo), up.exp2(a.hi))


def hull(a: BigReal, b: BigReal) -> BigReal:
    return BigReal(min(a.lo, b.lo), max(a.hi, b.hi))


def _mpfr_to_fraction(m) -> Fraction:
    q = gmpy2.mpq(m)
    return Fraction(int(q.numerator), int(q.denominator))


# -- rigorous verdicts -----------------------------------------------------

def certainly_ge(a: BigReal, b: BigReal) -> bool:
    """True / False only when the exact reals are provably ordered."""
    if a.lo >= b.hi:
        return True
    if a.hi < b.lo:
        return False
    raise Inconclusive(f"cannot order {a!r} against {b!r} at {_precision} bits")


def certainly_gt(a: BigReal, b: BigReal) -> bool:
    if a.lo > b.hi:
        return True
    if a.hi <= b.lo:
        return False
    raise Inconclusive(f"cannot order {a!r} against {b!r} at {_precision} bits")


def certainly_positive(a: BigReal) -> bool:
    return certainly_gt(a, BigReal.from_int(0))


def margin_log2(slack: BigReal, holds: bool) -> float:
    """log2 of the certified slack magnitude on the verdict's side.

    For a passing inequality the slack interval lies at or above zero and the
    reported value is log2 of its lower endpoint; for a failing one it is
    log2 of the certified violation.  A zero endpoint reports -inf.
    """
    down, _ = _ctx()
    v = slack.lo if holds else -slack.hi
    if v < 0:
        raise ValueError("slack interval does not match the claimed verdict")
    if v == 0:
        return float("-inf")
    return float(down.log2(v))
