"""Series constant enclosure and the phi/eta/gamma parameter families."""

from fractions import Fraction

import numpy as np
import pytest

from constel.bigreal import BigReal, certainly_gt, log2, precision
from constel.params import (
    ParamFns,
    alpha_constant,
    alpha_enclosure,
    check_param_fns,
    default_params,
    rational_params,
)
from helpers import SMALL_PHI_TABLE


def _as_fracs(x):
    return x.to_fractions()


def test_alpha_two_decimals():
    lo, hi = _as_fracs(alpha_constant())
    assert Fraction("0.215") <= lo and hi <= Fraction("0.225")


def test_alpha_width_under_2_to_minus_64():
    lo, hi = _as_fracs(alpha_constant())
    assert hi - lo < Fraction(1, 2**64)


def test_tail_enclosures_nest():
    boxes = [alpha_enclosure(n, tail="simple") for n in (512, 1024, 2048, 4096)]
    for outer, inner in zip(boxes, boxes[1:]):
        olo, ohi = _as_fracs(outer)
        ilo, ihi = _as_fracs(inner)
        assert olo <= ilo and ihi <= ohi
        assert (ihi - ilo) < (ohi - olo)


def test_euler_maclaurin_inside_simple_sandwich():
    em = alpha_enclosure(2048)
    simple = alpha_enclosure(2048, tail="simple")
    slo, shi = _as_fracs(simple)
    elo, ehi = _as_fracs(em)
    assert slo <= elo and ehi <= shi


def test_alpha_contains_brute_force_sum():
    # float64 partial sum to 10^7 plus the integral sandwich for the rest;
    # the slack absorbs the float rounding of ten million additions
    total = 0.0
    for start in range(9, 10**7, 10**6):
        k = np.arange(start, min(start + 10**6, 10**7), dtype=np.float64)
        total += float(np.sum(1.0 / (k * np.log2(k) ** 2)))
    c = float(np.log(2.0) ** 2)
    lnN = float(np.log(10**7))
    band_lo = total + c / lnN - 1e-9
    band_hi = total + c / lnN + c / (10**7 * lnN**2) + 1e-9
    lo, hi = _as_fracs(alpha_constant())
    assert band_lo < lo and hi < band_hi


def test_alpha_cached_and_stable_across_precisions():
    assert alpha_constant() is alpha_constant()
    with precision(192):
        a192 = _as_fracs(alpha_constant())
    a256 = _as_fracs(alpha_constant())
    # both enclose the same real
    assert max(a192[0], a256[0]) <= min(a192[1], a256[1])


def test_phi0_matches_direct_expression(default_fns):
    lg = log2(BigReal.from_int(10))
    direct = (1 / (8 * alpha_constant())) / (10 * lg * lg)
    dlo, dhi = _as_fracs(direct)
    plo, phi_ = _as_fracs(default_fns.phi(0))
    assert max(dlo, plo) <= min(dhi, phi_)
    assert Fraction("0.005047") < plo and phi_ < Fraction("0.005049")


def test_gamma_starts_at_zero(default_fns):
    g = default_fns.gamma(-1)
    assert g.is_point and g.contains(0)


def test_eta_strictly_between_neighbours(default_fns):
    for t in range(0, 101):
        assert certainly_gt(default_fns.phi(t - 1), default_fns.eta(t))
        assert certainly_gt(default_fns.eta(t), default_fns.phi(t))


def test_default_params_compliant(default_fns):
    assert default_fns.compliant


def test_default_domain_edges(default_fns):
    default_fns.phi(-2)
    with pytest.raises(ValueError):
        default_fns.phi(-3)
    with pytest.raises(ValueError):
        default_fns.eta(-2)
    with pytest.raises(ValueError):
        default_fns.gamma(-2)


def test_dyadic_table_is_compliant():
    p = rational_params(SMALL_PHI_TABLE)
    assert not p.compliant  # returned unchecked
    assert check_param_fns(p, t_max=1)


def test_zero_gamma_fails():
    p = rational_params(SMALL_PHI_TABLE, gamma_table={t: Fraction(0) for t in range(-1, 3)})
    assert not check_param_fns(p, t_max=1)


def test_eta_equal_phi_fails():
    p = rational_params(SMALL_PHI_TABLE, eta_table={t: SMALL_PHI_TABLE[t] for t in range(-1, 3)})
    assert not check_param_fns(p, t_max=1)


def test_check_param_fns_rejects_bad_t_max():
    p = rational_params(SMALL_PHI_TABLE)
    with pytest.raises(ValueError):
        check_param_fns(p, t_max=0)


def test_rational_params_domain_error():
    p = rational_params(SMALL_PHI_TABLE)
    with pytest.raises(ValueError):
        p.phi(7)


def test_alpha_enclosure_argument_validation():
    with pytest.raises(ValueError):
        alpha_enclosure(5)
    with pytest.raises(ValueError):
        alpha_enclosure(1000, tail="cauchy")
