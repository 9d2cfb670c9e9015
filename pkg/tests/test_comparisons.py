import math
from fractions import Fraction as F

import pytest

from pmlaudit.comparisons import (
    F_REGISTRY,
    approx_ldp_holds,
    approx_max_information,
    approx_max_information_bound,
    expected_log_leakage,
    f_info_pml_bound,
    f_information,
    implied_pml_bound,
    ldi_epsilon,
    ldp_epsilon,
    lip_epsilon,
    max_information,
    mutual_information,
    total_variation_privacy,
    tv_bounds,
)
from pmlaudit.core import (
    FLOAT,
    UNBOUNDED,
    InfiniteInput,
    TooLargeForBruteForce,
    UnknownF,
    isclose,
    make_joint,
)
from pmlaudit.fixtures import fix_a, fix_b, fix_c, fix_d, fix_f, fix_g
from pmlaudit.leakage import maximal_leakage, pml


def test_ldp_fix_d():
    assert ldp_epsilon(fix_d()) == F(3, 2)
    assert ldp_epsilon(fix_d().channel) == F(3, 2)


def test_ldp_fix_b():
    assert ldp_epsilon(fix_b()) == 4


@pytest.mark.parametrize("fixture", [fix_a, fix_c, fix_f, fix_g])
def test_zero_likelihood_is_unbounded(fixture):
    assert ldp_epsilon(fixture()) is UNBOUNDED
    assert lip_epsilon(fixture()) is UNBOUNDED
    assert ldi_epsilon(fixture()) is UNBOUNDED


def test_lip_and_ldi_fix_d():
    # posteriors are (3/5, 2/5) and (2/5, 3/5) against a uniform prior
    assert lip_epsilon(fix_d()) == F(5, 4)
    assert ldi_epsilon(fix_d()) == F(3, 2)


def test_ldp_bound_is_tight_on_fix_d():
    joint = fix_d()
    bound = implied_pml_bound("LDP", ldp_epsilon(joint), joint.prior)
    assert bound == F(6, 5) == max(pml(joint, y) for y in range(2))


def test_implied_bounds_fix_d():
    joint = fix_d()
    assert implied_pml_bound("LDI", F(3, 2), joint.prior) == F(6, 5)
    assert implied_pml_bound("LIP", F(5, 4), joint.prior) == F(5, 4)


def test_implied_bound_of_unbounded_guarantee():
    with pytest.raises(InfiniteInput):
        implied_pml_bound("LDP", UNBOUNDED, fix_c().prior)
    with pytest.raises(ValueError):
        implied_pml_bound("XYZ", 2, fix_c().prior)


def test_approx_ldp_fix_f():
    joint = fix_f()
    assert approx_ldp_holds(joint.channel, 1, F(1, 4))
    assert not approx_ldp_holds(joint.channel, 1, F(1, 5))


def test_approx_ldp_fix_g_needs_delta_one():
    channel = fix_g().channel
    for eps in (1, 10, 10**6):
        assert not approx_ldp_holds(channel, eps, F(99, 100))
    assert approx_ldp_holds(channel, 1, 1)


def test_mutual_information_fix_d():
    # ln 2 - h(2/5) in nats
    h = -(0.6 * math.log(0.6) + 0.4 * math.log(0.4))
    assert math.isclose(mutual_information(fix_d()), math.log(2) - h, rel_tol=1e-12)


@pytest.mark.parametrize("fixture", [fix_a, fix_b, fix_c, fix_d, fix_f, fix_g])
def test_mi_below_expected_leakage(fixture):
    joint = fixture()
    assert mutual_information(joint) <= expected_log_leakage(joint) + 1e-12


def test_deterministic_channels_reach_equality():
    # FIX-F and FIX-G reveal X or nothing: every output's leakage equals its information
    for joint in (fix_f(), fix_g()):
        assert math.isclose(mutual_information(joint), expected_log_leakage(joint), rel_tol=1e-12)


def test_f_information_fix_d():
    joint = fix_d()
    assert math.isclose(f_information(joint, "tv"), 0.1, rel_tol=1e-12)
    assert math.isclose(f_information(joint, "chi2"), 0.04, rel_tol=1e-12)
    assert math.isclose(f_information(joint, "kl"), mutual_information(joint), rel_tol=1e-12)


@pytest.mark.parametrize("f", sorted(F_REGISTRY))
@pytest.mark.parametrize("fixture", [fix_a, fix_b, fix_c, fix_d, fix_g])
def test_f_information_bound(f, fixture):
    joint = fixture()
    assert f_information(joint, f) <= f_info_pml_bound(joint, f) + 1e-12


def test_unknown_f():
    with pytest.raises(UnknownF):
        f_information(fix_d(), "hellinger2")


def test_total_variation_privacy_fix_d():
    assert total_variation_privacy(fix_d()) == F(1, 10)
    assert math.isclose(float(total_variation_privacy(fix_d())), f_information(fix_d(), "tv"), rel_tol=1e-12)


def test_tv_bounds_fix_d():
    b = tv_bounds(fix_d())
    assert b.maximal_leakage == F(1, 5)
    assert b.regime_index == 1 and b.regime == F(1, 5)
    assert b.expected_pml == F(1, 2)
    assert b.tightest() == F(1, 5)
    assert total_variation_privacy(fix_d()) <= b.tightest()


@pytest.mark.parametrize(
    "eps, index, value",
    [(F(5, 4), 1, F(1, 4)), (F(7, 4), 2, F(1, 2)), (3, 3, 1)],
)
def test_tv_regimes(eps, index, value):
    b = tv_bounds(fix_c(), eps, 0)
    assert (b.regime_index, b.regime) == (index, value)


def test_tv_regime_delta_term():
    # delta/2 * (eps_max - 1) = 1/12 * 3 on FIX-C
    b = tv_bounds(fix_c(), F(6, 5), F(1, 6))
    assert b.regime == F(1, 5) + F(1, 4)


@pytest.mark.parametrize("fixture", [fix_a, fix_b, fix_c, fix_d, fix_f, fix_g])
def test_tv_below_bounds(fixture):
    joint = fixture()
    b = tv_bounds(joint)
    t = total_variation_privacy(joint)
    assert t <= b.tightest()
    assert t <= b.cardinality
    assert b.maximal_leakage == maximal_leakage(joint.channel) - 1


def test_max_information_is_max_pml():
    for fixture in (fix_a, fix_b, fix_c, fix_d, fix_f, fix_g):
        joint = fixture()
        assert max_information(joint) == max(pml(joint, y) for y in joint.support_y)


def test_approx_max_information_fix_g():
    joint = fix_g()
    assert approx_max_information(joint, F(1, 10)) == F(45, 41)
    assert approx_max_information_bound(joint, F(1, 10)) == F(10, 9)


def test_approx_max_information_at_zero_delta():
    for fixture in (fix_c, fix_d):
        joint = fixture()
        assert approx_max_information(joint, 0) == max_information(joint)


def test_approx_max_information_float_mode():
    joint = fix_g(mode=FLOAT)
    assert isclose(approx_max_information(joint, 0.1), 45 / 41)


def test_approx_max_information_cap():
    n = 5
    joint = make_joint([F(1, n)] * n, [[F(1, n)] * n] * n)
    with pytest.raises(TooLargeForBruteForce) as info:
        approx_max_information(joint, F(1, 10))
    assert info.value.fallback == 1
