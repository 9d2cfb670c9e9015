"""Small reference models used by the tests, the demos and the CLI docs.

``FIX_A`` .. ``FIX_G`` are functions so that callers can ask for either
scalar mode.  ``FIX_F`` and ``FIX_G`` take their free parameter as an
argument; the defaults are the values used throughout the test-suite.
"""

from __future__ import annotations

from fractions import Fraction as F

from .core import RATIONAL, Channel, Joint, Prior, make_joint, validate_model


def _uniform(n):
    return [F(1, n)] * n


def fix_a(mode: str = RATIONAL) -> Joint:
    """Ternary channel where one output identifies x1 and the others halve X."""
    p = [[1, 0, 0], [F(1, 2), F(1, 2), 0], [0, F(1, 2), F(1, 2)]]
    return make_joint(_uniform(3), p, mode=mode)


def fix_b(mode: str = RATIONAL) -> Joint:
    """Ternary symmetric channel: every output leaks the same amount."""
    a, b = F(2, 3), F(1, 6)
    q = [[a, b, b], [b, a, b], [b, b, a]]
    return make_joint(_uniform(3), q, mode=mode)


def fix_c(mode: str = RATIONAL) -> Joint:
    """4x4 channel with two rare revealing outputs and two similar common ones."""
    h, t = F(1, 2), F(1, 3)
    p = [
        [0, 0, h, h],
        [0, 0, h, h],
        [0, t, t, t],
        [t, 0, t, t],
    ]
    return make_joint(_uniform(4), p, mode=mode)


def fix_c_postprocessing(mode: str = RATIONAL) -> Channel:
    """Deterministic ``P_{Z|Y}`` on FIX-C: y1, y3 -> z1 and y2, y4 -> z2."""
    k = [[1, 0], [0, 1], [1, 0], [0, 1]]
    return Channel(k, fix_c().labels_y, ("z1", "z2"), mode=mode)


def fix_d(mode: str = RATIONAL) -> Joint:
    """Binary symmetric channel with crossover 2/5 and a uniform prior."""
    p = [[F(3, 5), F(2, 5)], [F(2, 5), F(3, 5)]]
    return make_joint(_uniform(2), p, mode=mode)


def fix_e(mode: str = RATIONAL):
    """Binary triple: ``(prior, P_{Z|X}, P_{Y|XZ})``.

    Rows of ``P_{Y|XZ}`` are indexed x-major: (x=0,z=0), (0,1), (1,0), (1,1).
    """
    prior = Prior(_uniform(2), ("0", "1"), mode)
    channel_z = Channel([[F(2, 5), F(3, 5)], [F(3, 5), F(2, 5)]], ("0", "1"), ("0", "1"), mode)
    channel_y = Channel(
        [[F(1, 2), F(1, 2)], [F(1, 3), F(2, 3)], [F(2, 3), F(1, 3)], [F(1, 2), F(1, 2)]],
        ("0,0", "0,1", "1,0", "1,1"),
        ("0", "1"),
        mode,
    )
    return prior, channel_z, channel_y


def fix_f(delta=F(1, 4), n_outputs: int = 8, mode: str = RATIONAL) -> Joint:
    """Binary secret; x1 spreads ``delta`` over odd outputs, x2 over even ones.

    The two rows have disjoint supports, so every output identifies X, yet
    each single output has probability at most ``delta`` under either row.
    """
    delta = F(delta)
    if n_outputs % 2:
        raise ValueError("n_outputs must be even")
    half = n_outputs // 2
    if delta * half != 1:
        raise ValueError("delta * n_outputs / 2 must equal 1")
    odd = [delta if j % 2 == 0 else F(0) for j in range(n_outputs)]
    even = [F(0) if j % 2 == 0 else delta for j in range(n_outputs)]
    return make_joint(_uniform(2), [odd, even], mode=mode)


def fix_g(p_star=F(1, 10), m: int = 3, n: int = 4, mode: str = RATIONAL) -> Joint:
    """Secret x1 with prior ``p_star`` is revealed by y1; the rest is noise.

    The other ``m - 1`` secrets share the remaining prior mass equally and
    map uniformly onto outputs y2..yn.
    """
    p_star = F(p_star)
    rest = (1 - p_star) / (m - 1)
    prior = [p_star] + [rest] * (m - 1)
    first = [F(1)] + [F(0)] * (n - 1)
    other = [F(0)] + [F(1, n - 1)] * (n - 1)
    channel = [first] + [other] * (m - 1)
    return make_joint(prior, channel, mode=mode)


def fix_e_joint_x_to_z(mode: str = RATIONAL) -> Joint:
    prior, channel_z, _ = fix_e(mode)
    return validate_model(prior, channel_z)


ALL_JOINTS = {
    "FIX-A": fix_a,
    "FIX-B": fix_b,
    "FIX-C": fix_c,
    "FIX-D": fix_d,
    "FIX-F": fix_f,
    "FIX-G": fix_g,
}
