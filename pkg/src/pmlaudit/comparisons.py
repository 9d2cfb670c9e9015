"""Other privacy and dependence measures, and the PML bounds relating them.

Ratios that can be infinite (a zero likelihood in a denominator) are
returned as :data:`~pmlaudit.core.UNBOUNDED` rather than a float, so
rational-mode results stay exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable

import numpy as np

from .core import (
    RATIONAL,
    UNBOUNDED,
    Channel,
    InfiniteInput,
    InvalidDelta,
    Joint,
    Prior,
    TooLargeForBruteForce,
    UnknownF,
    isclose,
    leq,
    lt,
    parse_scalar,
    zero,
)
from .guarantees import min_eps_for_delta_pml
from .leakage import eps_max, leakage_distribution, maximal_leakage


class Measure(str, Enum):
    LDP = "LDP"
    APPROX_LDP = "APPROX_LDP"
    LIP = "LIP"
    LDI = "LDI"
    MI = "MI"
    F_INFO = "F_INFO"
    TV = "TV"
    MAX_INFO = "MAX_INFO"
    APPROX_MAX_INFO = "APPROX_MAX_INFO"


@dataclass(frozen=True)
class MeasureReport:
    measure: Measure
    value: object
    implied_pml_bound: object = None
    note: str = ""

    @property
    def unbounded(self) -> bool:
        return self.value is UNBOUNDED


def _matrix(channel) -> np.ndarray:
    return channel.channel.matrix if isinstance(channel, Joint) else channel.matrix


def _live_columns(m: np.ndarray) -> list[int]:
    return [j for j in range(m.shape[1]) if any(v > 0 for v in m[:, j])]


def ldp_epsilon(channel: Channel):
    """Smallest ratio ``r`` with ``P(y|x) <= r P(y|x')`` on every output that can occur."""
    m = _matrix(channel)
    worst = None
    for j in _live_columns(m):
        col = m[:, j]
        low = col.min()
        if low == 0:
            return UNBOUNDED
        r = col.max() / low
        worst = r if worst is None or r > worst else worst
    return worst


def approx_ldp_holds(channel: Channel, eps_ratio, delta) -> bool:
    """Check ``P(y|x) <= eps_ratio * P(y|x') + delta`` for all outputs and secret pairs."""
    m = _matrix(channel)
    if delta < 0 or delta > 1:
        raise InvalidDelta(f"delta {delta} outside [0, 1]")
    for j in _live_columns(m):
        col = m[:, j]
        if not leq(col.max(), eps_ratio * col.min() + delta):
            return False
    return True


def _density_columns(joint: Joint):
    m = joint.channel.matrix
    for j in joint.support_y:
        yield j, m[:, j] / joint.p_y[j]


def lip_epsilon(joint: Joint):
    """Largest posterior-to-prior ratio in either direction."""
    worst = parse_scalar(1, joint.mode)
    for _, ratios in _density_columns(joint):
        for r in ratios:
            if r == 0:
                return UNBOUNDED
            worst = max(worst, r, 1 / r)
    return worst


def ldi_epsilon(joint: Joint):
    """Largest ratio between two posterior probabilities of the same output."""
    worst = parse_scalar(1, joint.mode)
    for j, _ in _density_columns(joint):
        post = joint.prior.probs * joint.channel.matrix[:, j]
        low = post.min()
        if low == 0:
            return UNBOUNDED
        worst = max(worst, post.max() / low)
    return worst


def implied_pml_bound(kind: str, eps_ratio, prior: Prior):
    """PML ratio implied by an LDP, LIP or LDI guarantee under ``prior``."""
    if eps_ratio is UNBOUNDED or (isinstance(eps_ratio, float) and math.isinf(eps_ratio)):
        raise InfiniteInput("an unbounded guarantee implies no PML bound")
    kind = kind.upper()
    support = [p for p in prior.probs if p > 0]
    p_min = min(support)
    if kind == "LDP":
        return 1 / (p_min + (1 - p_min) / eps_ratio)
    if kind == "LDI":
        return 1 / (p_min * (1 + (len(support) - 1) / eps_ratio))
    if kind == "LIP":
        return eps_ratio
    raise ValueError(f"no implied PML bound for {kind!r}")


# --------------------------------------------------------- expectations


def _pairs(joint: Joint):
    """Yield ``(P_X(x), P_Y(y), ratio)`` for every x in support and supported y."""
    for j, ratios in _density_columns(joint):
        for i, r in enumerate(ratios):
            yield joint.prior.probs[i], joint.p_y[j], r


def mutual_information(joint: Joint) -> float:
    """``I(X;Y)`` in nats."""
    total = 0.0
    for px, py, r in _pairs(joint):
        if r > 0:
            total += float(px * py * r) * math.log(r)
    return total


def expected_log_leakage(joint: Joint) -> float:
    """``E[l(X -> Y)]`` in nats; never below the mutual information."""
    return leakage_distribution(joint).expected_log()


@dataclass(frozen=True)
class FDivergence:
    name: str
    f: Callable[[float], float]
    f_at_zero: float


def _kl(t):
    return 0.0 if t == 0 else t * math.log(t)


F_REGISTRY = {
    "kl": FDivergence("kl", _kl, 0.0),
    "tv": FDivergence("tv", lambda t: abs(t - 1) / 2, 0.5),
    "chi2": FDivergence("chi2", lambda t: (t - 1) ** 2, 1.0),
}


def _f(name: str) -> FDivergence:
    try:
        return F_REGISTRY[name]
    except KeyError:
        raise UnknownF(f"unknown f {name!r}; choose from {sorted(F_REGISTRY)}") from None


def f_information(joint: Joint, f: str) -> float:
    """``E_{P_X P_Y}[f(P_XY / (P_X P_Y))]``."""
    fd = _f(f)
    return float(sum(float(px * py) * fd.f(float(r)) for px, py, r in _pairs(joint)))


def f_info_pml_bound(joint: Joint, f: str) -> float:
    """``E_Y[max(f(exp l(X -> Y)), f(0))]``, an upper bound on the f-information."""
    fd = _f(f)
    return float(sum(
        float(e.probability) * max(fd.f(float(e.ratio)), fd.f_at_zero)
        for e in leakage_distribution(joint)
    ))


def total_variation_privacy(joint: Joint):
    """Expected total variation distance between posterior and prior."""
    total = zero(joint.mode)
    for j in joint.support_y:
        post = joint.prior.probs * joint.channel.matrix[:, j] / joint.p_y[j]
        tv = sum(abs(a - b) for a, b in zip(post, joint.prior.probs)) / 2
        total = total + joint.p_y[j] * tv
    return total


@dataclass(frozen=True)
class TVBounds:
    """Upper bounds on total variation privacy.

    ``cardinality`` is the loose classical bound; it is reported but left out
    of :meth:`tightest`.
    """

    maximal_leakage: object
    regime: object
    regime_index: int
    epsilon_ratio: object
    delta: object
    expected_pml: object
    cardinality: object

    def tightest(self):
        return min(self.maximal_leakage, self.regime, self.expected_pml)


def tv_bounds(joint: Joint, eps_ratio=None, delta=0) -> TVBounds:
    """All bounds on ``T(X;Y)``.

    The regime bound needs an (epsilon, delta)-PML guarantee.  If
    ``eps_ratio`` is omitted, the smallest epsilon valid for ``delta`` is used.
    """
    mode = joint.mode
    delta = parse_scalar(delta, mode)
    if eps_ratio is None:
        eps_ratio, _ = min_eps_for_delta_pml(joint, delta)
    eps_ratio = parse_scalar(eps_ratio, mode)
    ml = maximal_leakage(joint.channel)
    tail = delta / 2 * (eps_max(joint.prior) - 1)
    three_halves = parse_scalar(Fraction(3, 2), mode)
    two = parse_scalar(2, mode)
    if leq(eps_ratio, three_halves):
        regime, index = eps_ratio - 1 + tail, 1
    elif leq(eps_ratio, two):
        regime, index = parse_scalar(Fraction(1, 2), mode) + tail, 2
    else:
        regime, index = (eps_ratio - 1) / 2 + tail, 3
    one_ = parse_scalar(1, mode)
    expected = sum(
        (e.probability * max(e.ratio - 1, one_) for e in leakage_distribution(joint)),
        zero(mode),
    ) / 2
    card = (joint.n_x - 1) * joint.prior.probs.max() * (ml - 1)
    return TVBounds(ml - 1, regime, index, eps_ratio, delta, expected, card)


# ------------------------------------------------------ max-information


def max_information(joint: Joint):
    """``exp I_inf(X;Y)``: the largest information-density ratio."""
    return max(ratios.max() for _, ratios in _density_columns(joint))


def _exceedance_bound(joint: Joint, delta):
    """Smallest density level ``r`` whose exceedance set has ``P_XY`` mass at most ``delta``."""
    cells = [(px * py * r, r) for px, py, r in _pairs(joint) if r > 0]
    levels = sorted({r for _, r in cells})
    for r in levels:
        mass = sum((p for p, s in cells if lt(r, s)), zero(joint.mode))
        if leq(mass, delta):
            return r
    return levels[-1]


def approx_max_information_bound(joint: Joint, delta):
    """Ratio ``r`` such that ``exp I_inf^delta <= r`` by the exceedance-mass argument."""
    return _exceedance_bound(joint, parse_scalar(delta, joint.mode))


MAX_EVENT_CELLS = 20


def approx_max_information(joint: Joint, delta, max_cells: int = MAX_EVENT_CELLS):
    """``exp I_inf^delta(X;Y)`` by exhaustive search over events of ``supp(P_XY)``.

    Cells outside the support only add ``P_X P_Y`` mass, so they never help
    and are skipped.  The search is vectorized over bitmasks; with the
    default cap of 20 cells it visits about a million events.
    """
    mode = joint.mode
    delta = parse_scalar(delta, mode)
    if delta < 0 or delta > 1:
        raise InvalidDelta(f"delta {delta} outside [0, 1]")
    p, q = [], []
    for px, py, r in _pairs(joint):
        if r > 0:
            p.append(px * py * r)
            q.append(px * py)
    n = len(p)
    if n > max_cells:
        raise TooLargeForBruteForce(
            f"{n} support cells exceed the brute-force cap of {max_cells}",
            fallback=_exceedance_bound(joint, delta),
        )
    masks = np.arange(1, 1 << n, dtype=np.int64)
    bits = ((masks[:, None] >> np.arange(n)) & 1).astype(bool)
    if mode == RATIONAL:
        den = math.lcm(*(v.denominator for v in p + q + [delta]))
        pi = np.array([int(v * den) for v in p], dtype=object)
        qi = np.array([int(v * den) for v in q], dtype=object)
        di = int(delta * den)
        if den < 2 ** 40:
            pi, qi = pi.astype(np.int64), qi.astype(np.int64)
        pe, qe = bits @ pi, bits @ qi
        ok = pe >= di
        num = pe[ok] - di
        qs = qe[ok]
        # pick the best candidates in float, then settle exactly
        approx = num.astype(float) / qs.astype(float)
        top = approx.max()
        close = np.flatnonzero(approx >= top * (1 - 1e-9))
        return max(Fraction(int(num[k]), int(qs[k])) for k in close)
    pv, qv = np.array(p, dtype=float), np.array(q, dtype=float)
    pe, qe = bits @ pv, bits @ qv
    ok = pe >= delta - 1e-12
    return float(((pe[ok] - delta) / qe[ok]).max())


__all__ = [
    "F_REGISTRY",
    "Measure",
    "MeasureReport",
    "TVBounds",
    "approx_ldp_holds",
    "approx_max_information",
    "approx_max_information_bound",
    "expected_log_leakage",
    "f_info_pml_bound",
    "f_information",
    "implied_pml_bound",
    "ldi_epsilon",
    "ldp_epsilon",
    "lip_epsilon",
    "max_information",
    "mutual_information",
    "tv_bounds",
    "total_variation_privacy",
]
