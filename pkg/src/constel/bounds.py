"""Size functions on the log scale and rigorous verification of their laws.

Everything is a function of ell = log_{r+1} n; n itself is never formed
(thresholds sit far beyond any machine integer, around 2^(10^6) for the
log already).  The four size functions:

    path_target   f = ell^phi(t) - p/2 - 4^(1/(phi(t-1) - eta(t)))
    path_reserve  h = ell^eta(t) + p/2 - 4^(1/(phi(t-2) - eta(t-1)))
    gap divisor   n / gap = (6(r+1))^D with D = 2 ell^gamma(t) (3 ell^phi(t) - p)
    stretch       s = (gap(n/3, t-1, p) - 1) / (2r+1), handled via its log

The exponent D is what ``g_exponent`` returns; the gap threshold itself has a
doubly exponential deficit against n and is only ever represented by D.

Verification strategy.  Enclosure widths here are absolute monsters: a value
near 2^5000 carried at 256 bits has width about 2^4750, so two sides that
differ by 1/2 can never be separated directly.  Each check below is therefore
arranged so that the compared quantities differ by astronomical factors, or
reduced to a sufficient condition with that property:

  * the stretch deficit ell - log s is assembled from its moderate summands
    (never as a difference of two ell-sized enclosures);
  * recursionf / recursionh use (1-u)^x >= 1-u for u, x in [0,1], leaving
    the certifiable condition ell^(x-1) * deficit <= 1/2;
  * recursiong reduces to 2 c S^gamma(t) >= deficit for S = log s;
  * middlef cancels the shared additive constant and compares
    (ell - log 3)^phi(t-1) against ell^eta(t) + p;
  * middleg and the stretch lower bound compare gap-divisor exponents of
    adjacent levels, which differ by a factor around ell^(8 phi(t-1)).

The -1 inside the stretch is covered by an interval [-2^(1-K), 0] with K
capped at 2^20, since log(1 - 1/gap) is far below the representable range.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional

from .bigreal import (
    BigReal,
    Inconclusive,
    certainly_ge,
    certainly_gt,
    certainly_positive,
    exp2,
    hull,
    log2,
    margin_log2,
)
from .params import ParamFns

INEQUALITY_NAMES = ("recursionf", "recursionh", "recursiong", "middlef", "middleg")

_CORR_CAP_BITS = 1 << 20


@dataclass(frozen=True)
class BoundContext:
    """Arity r, a parameter family, and the log-size ell = log_{r+1} n.

    ``log_table`` optionally overrides log_{r+1} k for small integer k with
    exact rationals; the cross-check tests use it to make every quantity a
    rational the oracle can reproduce.
    """

    r: int
    params: ParamFns
    ell: BigReal
    log_table: Optional[Mapping[int, Fraction]] = field(default=None)

    def __post_init__(self):
        if self.r < 1:
            raise ValueError(f"arity r must be at least 1, got {self.r}")
        if not certainly_positive(self.ell):
            raise ValueError("ell must be certainly positive")


@dataclass(frozen=True)
class InequalityCheck:
    name: str
    holds: bool
    margin_log2: float


def _log_r1(ctx: BoundContext, k: int) -> BigReal:
    """log_{r+1} k for a small positive integer k."""
    if ctx.log_table is not None:
        return BigReal.from_fraction(ctx.log_table[k])
    return log2(BigReal.from_int(k)) / log2(BigReal.from_int(ctx.r + 1))


def _additive_const(params: ParamFns, t: int) -> BigReal:
    """4^(1/(phi(t-1) - eta(t))): the additive constant of f at level t."""
    gap = params.phi(t - 1) - params.eta(t)
    if not certainly_positive(gap):
        raise Inconclusive(f"phi({t - 1}) - eta({t}) not certainly positive")
    return exp2(2 / gap)


def f_val(ctx: BoundContext, t: int, p) -> BigReal:
    """Increasing-path target length (may be hugely negative off the grid)."""
    if t < 0:
        raise ValueError(f"t must be at least 0, got {t}")
    return ctx.ell ** ctx.params.phi(t) - BigReal.wrap(p) / 2 - _additive_const(ctx.params, t)


def h_val(ctx: BoundContext, t: int, p) -> BigReal:
    """Companion path length used by the middle-third recursion."""
    if t < 0:
        raise ValueError(f"t must be at least 0, got {t}")
    return ctx.ell ** ctx.params.eta(t) + BigReal.wrap(p) / 2 - _additive_const(ctx.params, t - 1)


def g_exponent(ctx: BoundContext, t: int, p) -> BigReal:
    """Exponent D with n / gap = (6(r+1))^D; the gap is never materialised."""
    if t < 0:
        raise ValueError(f"t must be at least 0, got {t}")
    ell = ctx.ell
    return 2 * ell ** ctx.params.gamma(t) * (3 * ell ** ctx.params.phi(t) - BigReal.wrap(p))


def _stretch_parts(ctx: BoundContext, t: int, p):
    """Shared pieces of the stretch log and its deficit against ell.

    Returns (s_log, deficit, conv, corr) where conv = log_{r+1}(6(r+1)),
    corr is the band covering the -1 inside the stretch, and
    deficit = ell - s_log assembled from moderate summands only.
    """
    if t < 1:
        raise ValueError(f"t must be at least 1, got {t}")
    r = ctx.r
    log3 = _log_r1(ctx, 3)
    ell3 = ctx.ell - log3
    factor = 3 * ell3 ** ctx.params.phi(t - 1) - BigReal.wrap(p)
    if not certainly_positive(factor):
        raise ValueError(f"stretch undefined: p reaches 3*(ell - log 3)^phi({t - 1})")
    conv = _log_r1(ctx, 6 * (r + 1))
    divisor_exp = 2 * ell3 ** ctx.params.gamma(t - 1) * factor
    gap_log = ell3 - conv * divisor_exp
    if gap_log.lo > _CORR_CAP_BITS + 2:
        # exact floor of a 2^(10^8)-sized endpoint would build the whole
        # integer; past the cap the band width no longer depends on it
        k = _CORR_CAP_BITS
    else:
        floor_lo = gap_log.int_lower()
        if floor_lo < 3:
            raise ValueError("stretch too small to bound its rounding correction")
        k = min(floor_lo - 2, _CORR_CAP_BITS)
    # log(gap - 1) = log(gap) + corr with corr in [-2^(1-k), 0]
    corr = hull(-BigReal.power_of_two(1 - k), BigReal.from_int(0))
    log_2r1 = _log_r1(ctx, 2 * r + 1)
    s_log = gap_log + corr - log_2r1
    deficit = log3 + conv * divisor_exp + log_2r1 - corr
    return s_log, deficit, conv, corr


def s_log(ctx: BoundContext, t: int, p) -> BigReal:
    """log_{r+1} of the stretch threshold s."""
    value, _, _, _ = _stretch_parts(ctx, t, p)
    return value


def stretch_deficit(ctx: BoundContext, t: int, p) -> BigReal:
    """ell - log_{r+1} s, assembled without large-scale cancellation."""
    _, deficit, _, _ = _stretch_parts(ctx, t, p)
    return deficit


# -- preconditions ---------------------------------------------------------

def mono_threshold(params: ParamFns, t: int) -> BigReal:
    """4^(1/(phi(t) (phi(t-1) - eta(t)))): least ell for the monotonicity laws."""
    gap = params.phi(t - 1) - params.eta(t)
    return exp2(2 / (params.phi(t) * gap))


def condition_threshold(params: ParamFns, t: int, p) -> BigReal:
    """Right side of the size condition: (2 + p/2)^(1/phi(t)) + mono threshold."""
    base = 2 + BigReal.wrap(p) / 2
    return base ** (1 / params.phi(t)) + mono_threshold(params, t)


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ValueError(message)


def _check_grid_preconditions(ctx: BoundContext, t: int, p) -> None:
    _require(t >= 1, f"t must be at least 1, got {t}")
    _require(
        certainly_ge(ctx.ell, condition_threshold(ctx.params, t, p)),
        f"ell below the size condition at t={t}",
    )
    _require(
        certainly_gt(2 * ctx.ell ** ctx.params.phi(t), BigReal.wrap(p)),
        f"p reaches 2*ell^phi({t})",
    )


# -- monotonicity in t -----------------------------------------------------

def _mono_slacks(ctx: BoundContext, t: int, p) -> dict[str, BigReal]:
    return {
        "monof": f_val(ctx, t - 1, p) - f_val(ctx, t, p),
        "monoh": h_val(ctx, t - 1, p) - h_val(ctx, t, p),
        # the gap threshold shrinks with t iff its divisor exponent grows
        "monog": g_exponent(ctx, t, p) - g_exponent(ctx, t - 1, p),
    }


def verify_mono(ctx: BoundContext, t: int, p) -> bool:
    """Certify that f, g, h do not grow when t drops by one.

    Preconditions (ell above the monotonicity threshold, p at most
    2 ell^phi(t)) are enforced with rigorous comparisons; violations raise
    ValueError rather than returning False.
    """
    _require(t >= 1, f"t must be at least 1, got {t}")
    _require(
        certainly_ge(ctx.ell, mono_threshold(ctx.params, t)),
        f"ell below the monotonicity threshold at t={t}",
    )
    _require(
        certainly_ge(2 * ctx.ell ** ctx.params.phi(t), BigReal.wrap(p)),
        f"p exceeds 2*ell^phi({t})",
    )
    zero = BigReal.from_int(0)
    return all(certainly_ge(s, zero) for s in _mono_slacks(ctx, t, p).values())


# -- the five recursion inequalities --------------------------------------

def _certify_power_drop(ctx: BoundContext, exponent: BigReal, deficit: BigReal) -> BigReal:
    """Slack of the sufficient condition ell^(x-1) * deficit <= 1/2.

    When it is nonnegative, (log s)^x >= ell^x - 1/2 for every exponent
    x in (0, 1]: write log s = ell(1 - u); then (1-u)^x >= 1-u on [0,1].
    """
    one = BigReal.from_int(1)
    if not certainly_ge(one, exponent) or not certainly_positive(exponent):
        raise Inconclusive("power-drop route needs the exponent inside (0, 1]")
    if not certainly_positive(deficit) or not certainly_ge(ctx.ell, deficit):
        raise Inconclusive("power-drop route needs 0 < deficit <= ell")
    return BigReal.wrap(Fraction(1, 2)) - ctx.ell ** (exponent - 1) * deficit


def _slack_recursionf(ctx, t, deficit):
    return _certify_power_drop(ctx, ctx.params.phi(t), deficit)


def _slack_recursionh(ctx, t, deficit):
    return _certify_power_drop(ctx, ctx.params.eta(t), deficit)


def _slack_recursiong(ctx, t, p, s_value, deficit, conv):
    # g(s, t, p+1) >= g(n, t, p) reduces to 2 conv S^gamma(t) >= deficit:
    # the level-t divisor exponents at ell and at S differ by at least
    # 2 S^gamma(t) once 3 ell^phi(t) >= p and S <= ell
    if not certainly_ge(3 * ctx.ell ** ctx.params.phi(t), BigReal.wrap(p)):
        raise Inconclusive("recursiong route needs 3*ell^phi(t) >= p")
    if not certainly_ge(s_value, BigReal.from_int(1)):
        raise Inconclusive("recursiong route needs log s >= 1")
    return 2 * conv * s_value ** ctx.params.gamma(t) - deficit


def _slack_middlef(ctx: BoundContext, t: int, p) -> BigReal:
    # f(n/3, t-1, p) - h(n, t, p) after the shared constant cancels
    ell3 = ctx.ell - _log_r1(ctx, 3)
    return ell3 ** ctx.params.phi(t - 1) - ctx.ell ** ctx.params.eta(t) - BigReal.wrap(p)


def _slack_middleg(ctx: BoundContext, t: int, p) -> BigReal:
    # log s - log gap(n, t, p): the ell-sized terms cancel exactly, leaving
    # conv * D(ell, t, p) - deficit, and the two differ by a factor around
    # ell^(8 phi(t-1)), so direct subtraction is safe here
    _, deficit, conv, _ = _stretch_parts(ctx, t, p)
    return conv * g_exponent(ctx, t, p) - deficit


def verify_bounds(ctx: BoundContext, t: int, p) -> tuple[InequalityCheck, ...]:
    """Check the five recursion inequalities; returns one entry per name.

    Preconditions (the size condition and strict p bound) are enforced
    first and raise ValueError when certainly violated.  The first three
    entries certify sufficient conditions whose failure cannot be told
    apart from tightness at this scale, so a certain failure there raises
    Inconclusive instead of reporting a false verdict.
    """
    _check_grid_preconditions(ctx, t, p)
    s_value, deficit, conv, _ = _stretch_parts(ctx, t, p)
    zero = BigReal.from_int(0)
    checks = []
    sufficient = {
        "recursionf": _slack_recursionf(ctx, t, deficit),
        "recursionh": _slack_recursionh(ctx, t, deficit),
        "recursiong": _slack_recursiong(ctx, t, p, s_value, deficit, conv),
    }
    for name, slack in sufficient.items():
        if not certainly_ge(slack, zero):
            raise Inconclusive(f"sufficient condition for {name} certainly fails; "
                               "the direct form cannot be separated at this precision")
        checks.append(InequalityCheck(name, True, margin_log2(slack, True)))
    for name, slack in (("middlef", _slack_middlef(ctx, t, p)),
                        ("middleg", _slack_middleg(ctx, t, p))):
        holds = certainly_ge(slack, zero)
        checks.append(InequalityCheck(name, holds, margin_log2(slack, holds)))
    return tuple(checks)


# -- stretch lower bound ---------------------------------------------------

def _slack_lowbdstretch(ctx: BoundContext, t: int, p) -> BigReal:
    """Certified lower bound on conv * (D(ell, t-1, p) + 1) - deficit.

    The full slack contains conv * (D(ell) - D(ell - log 3)) at level t-1,
    a difference of two enclosures around 2^60000 whose true value is tiny;
    direct subtraction would swallow everything else.  Both factors of D
    grow with the base, so after certifying the monotonicity premises that
    difference is dropped as nonnegative, leaving the small constant
    log_{r+1}((2r+2)/(2r+1)) minus the rounding band.
    """
    _, _, conv, corr = _stretch_parts(ctx, t, p)
    log3 = _log_r1(ctx, 3)
    ell3 = ctx.ell - log3
    for guard, msg in (
        (certainly_ge(log3, BigReal.from_int(0)), "log 3 must be nonnegative"),
        (certainly_positive(ell3), "ell must certainly exceed log 3"),
        (certainly_positive(conv), "log(6(r+1)) must be positive"),
        (certainly_ge(ctx.params.gamma(t - 1), BigReal.from_int(0)),
         f"gamma({t - 1}) must be nonnegative"),
        (certainly_positive(ctx.params.phi(t - 1)), f"phi({t - 1}) must be positive"),
    ):
        if not guard:
            raise Inconclusive(f"monotone-drop route unavailable: {msg}")
    return conv - log3 - _log_r1(ctx, 2 * ctx.r + 1) + corr


def verify_lowbdstretch(ctx: BoundContext, t: int, p) -> bool:
    """Certify the closed-form lower bound on the stretch threshold."""
    _require(t >= 1, f"t must be at least 1, got {t}")
    _require(
        certainly_ge(ctx.ell, exp2(1 / ctx.params.phi(t))),
        f"ell below 2^(1/phi({t}))",
    )
    return certainly_ge(_slack_lowbdstretch(ctx, t, p), BigReal.from_int(0))


# -- the power-drop helper lemma ------------------------------------------

def verify_log_inequality(ell: BigReal, c0: BigReal, c1: BigReal, x: BigReal) -> bool:
    """Certify (ell - c1 ell^c0)^x >= ell^x - 1/2 under its guards.

    Guards: c0 in (0,1), ell >= 1, ell^(1-c0) >= c1, and
    x <= 1 - c0 - log_ell(2 c1).  The conclusion is certified through
    the sufficient condition c1 ell^(x + c0 - 1) <= 1/2, which stays
    decidable where the two sides themselves do not.
    """
    one = BigReal.from_int(1)
    if not (certainly_positive(c0) and certainly_gt(one, c0)):
        return False
    if not certainly_gt(ell, one):
        return False
    if not certainly_ge(ell ** (one - c0), c1):
        return False
    bound = one - c0 - log2(2 * c1) / log2(ell)
    if not certainly_ge(bound, x):
        return False
    return certainly_ge(BigReal.wrap(Fraction(1, 2)), c1 * ell ** (x + c0 - one))


def verify_log_instances(ctx: BoundContext, t: int) -> bool:
    """Run the helper lemma on the instances the recursion checks rely on."""
    c0 = ctx.params.gamma(t - 1) + ctx.params.phi(t - 1)
    c1 = 7 * _log_r1(ctx, 6 * (ctx.r + 1))
    return all(
        verify_log_inequality(ctx.ell, c0, c1, x)
        for x in (ctx.params.phi(t), ctx.params.eta(t))
    )


# -- grid ------------------------------------------------------------------

def grid_ell(params: ParamFns, t: int, p, factor: int = 1) -> BigReal:
    """An exact point ell provably >= factor times the size condition.

    The upper threshold endpoint is inflated by 2^-20 so the condition holds
    with a certifiable margin instead of colliding with rounding noise.
    The size condition does not involve r: ell is already the log base r+1.
    """
    thr = condition_threshold(params, t, p)
    inflated = factor * thr * (1 + BigReal.power_of_two(-20))
    return BigReal(inflated.hi, inflated.hi)


def p_cap(params: ParamFns, t: int) -> int:
    """Largest grid p: one below 2 ell^phi(t) at the p = 0 threshold point."""
    ell0 = grid_ell(params, t, 0)
    return (2 * ell0 ** params.phi(t)).int_lower() - 1


@dataclass(frozen=True)
class GridRow:
    r: int
    t: int
    p_label: str
    ell_factor: int
    ell_log2: float
    inequality: str
    holds: bool
    margin_log2: float


def sweep_bounds(
    params: ParamFns,
    r_values=(1, 2, 3, 5),
    t_max: int = 20,
    ell_factors=(1, 2, 10),
) -> list[GridRow]:
    """Run every verifier over the documented grid; one row per inequality.

    p ranges over {0, 1, 2, cap} with cap one below the strict bound, and
    ell sits at 1x, 2x, 10x the size condition for that (t, p).
    """
    rows = []
    for r in r_values:
        for t in range(1, t_max + 1):
            cap = p_cap(params, t)
            p_cells = [(0, "0"), (1, "1"), (2, "2"), (cap, "cap")]
            for p, label in p_cells:
                for factor in ell_factors:
                    ell = grid_ell(params, t, p, factor)
                    ctx = BoundContext(r=r, params=params, ell=ell)
                    ell_bits = float(log2(ell).lo)
                    mono_ok = verify_mono(ctx, t, p)
                    for name, slack in _mono_slacks(ctx, t, p).items():
                        rows.append(GridRow(r, t, label, factor, ell_bits, name,
                                            mono_ok, margin_log2(slack, mono_ok)))
                    for chk in verify_bounds(ctx, t, p):
                        rows.append(GridRow(r, t, label, factor, ell_bits,
                                            chk.name, chk.holds, chk.margin_log2))
                    lb_ok = verify_lowbdstretch(ctx, t, p)
                    rows.append(GridRow(r, t, label, factor, ell_bits, "lowbdstretch",
                                        lb_ok, margin_log2(_slack_lowbdstretch(ctx, t, p), lb_ok)))
    return rows
