from fractions import Fraction as F

import pytest

from pmlaudit.core import (
    Channel,
    EmptyEvent,
    Event,
    OutOfSupport,
    Prior,
    ZeroProbabilityEvent,
    make_joint,
)
from pmlaudit.fixtures import fix_a, fix_b, fix_c, fix_e, fix_g
from pmlaudit.leakage import (
    conditional_pml,
    dynamic_leakage,
    eps_max,
    event_leakage,
    leakage_distribution,
    maximal_leakage,
    pml,
    pml_maximizers,
)


@pytest.mark.parametrize("y, ratio", [(0, 4), (1, 4), (2, F(6, 5)), (3, F(6, 5))])
def test_pml_fix_c(y, ratio):
    assert pml(fix_c(), y) == ratio


def test_pml_deterministic_outcome_is_inverse_probability():
    # f(x1) = f(x2) = a, f(x3) = b under a uniform prior: P_Y(b) = 1/3
    joint = make_joint([F(1, 3)] * 3, [[1, 0], [1, 0], [0, 1]])
    assert pml(joint, 1) == 3
    assert pml(joint, 0) == F(3, 2)


def test_pml_out_of_support():
    joint = make_joint([F(1, 2), F(1, 2)], [[1, 0, 0], [0, 1, 0]])
    with pytest.raises(OutOfSupport):
        pml(joint, 2)


def test_maximizers_report_ties():
    assert pml_maximizers(fix_c(), 2) == (0, 1)
    assert pml_maximizers(fix_c(), 0) == (3,)


def test_distribution_fix_c():
    dist = leakage_distribution(fix_c())
    triples = [(e.y, e.probability, e.ratio) for e in dist]
    assert triples == [
        (0, F(1, 12), 4),
        (1, F(1, 12), 4),
        (2, F(5, 12), F(6, 5)),
        (3, F(5, 12), F(6, 5)),
    ]


def test_distribution_fix_b_is_flat():
    assert [e.ratio for e in leakage_distribution(fix_b())] == [2, 2, 2]


def test_distribution_independent():
    row = [F(1, 5), F(4, 5)]
    dist = leakage_distribution(make_joint([F(1, 2), F(1, 2)], [row, row]))
    assert [e.ratio for e in dist] == [1, 1]


def test_distribution_sorted_by_ratio():
    # P_Y = (1/2, 1/3, 1/6); the largest column entries are 1, 1/2, 1/2
    dist = leakage_distribution(fix_a())
    assert [(e.y, e.ratio) for e in dist] == [(2, 3), (0, 2), (1, F(3, 2))]


def test_conditional_pml_side_information_example():
    prior, cz, cy = fix_e()
    assert conditional_pml(prior, cz, cy, 0, 0) == F(10, 9)
    assert conditional_pml(prior, cz, cy, 0, 1) == F(5, 4)


def test_conditional_pml_vacuous_conditioning():
    # Z independent of (X, Y): rows of P_{Y|XZ} repeat P_{Y|X}
    joint = fix_c()
    prior = joint.prior
    cz = make_joint([F(1, 4)] * 4, [[F(1, 3), F(2, 3)]] * 4).channel
    rows = [row for row in joint.channel.matrix for _ in range(2)]
    cy = Channel(rows, [f"{x},{z}" for x in prior.labels for z in "ab"], joint.labels_y)
    for y in range(4):
        for z in range(2):
            assert conditional_pml(prior, cz, cy, y, z) == pml(joint, y)


def test_event_leakage_merge_of_y1_y3():
    assert event_leakage(fix_c(), Event({0, 2})) == F(4, 3)


def test_event_leakage_full_support_is_one():
    assert event_leakage(fix_c(), Event({0, 1, 2, 3})) == 1


def test_event_leakage_singleton_is_pml():
    for y in range(4):
        assert event_leakage(fix_c(), Event({y})) == pml(fix_c(), y)


def test_event_leakage_with_split():
    # {y2} plus 1/5 of y3: x3 carries 1/3 + 1/15 over mass 1/12 + 1/12
    assert event_leakage(fix_c(), Event({1}, (2, F(1, 5)))) == F(12, 5)


def test_event_errors():
    with pytest.raises(EmptyEvent):
        event_leakage(fix_c(), Event(frozenset()))
    joint = make_joint([F(1, 2), F(1, 2)], [[1, 0, 0], [0, 1, 0]])
    with pytest.raises(ZeroProbabilityEvent):
        event_leakage(joint, Event({2}))


@pytest.mark.parametrize("joint", [fix_a(), fix_b()])
def test_maximal_leakage_intro_channels(joint):
    assert maximal_leakage(joint.channel) == 2


def test_maximal_leakage_identity():
    n = 5
    eye = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    assert maximal_leakage(make_joint([F(1, n)] * n, eye).channel) == n


@pytest.mark.parametrize(
    "prior, expected",
    [([F(1, 4)] * 4, 4), ([F(3, 4), F(1, 4)], 4)],
)
def test_eps_max(prior, expected):
    assert eps_max(Prior(prior)) == expected


def test_eps_max_fix_g():
    assert eps_max(fix_g().prior) == 10


def test_expected_ratio_equals_maximal_leakage():
    joint = fix_c()
    assert leakage_distribution(joint).expected_ratio() == maximal_leakage(joint.channel)


def test_dynamic_leakage_can_drop_below_one():
    # a likely secret becomes less likely after y, yet no guess improves
    joint = make_joint([F(3, 5), F(2, 5)], [[F(1, 2), F(1, 2)], [F(9, 10), F(1, 10)]])
    assert dynamic_leakage(joint, 0) < 1
    assert pml(joint, 0) >= 1
