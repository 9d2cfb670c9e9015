"""Checking and deriving epsilon-PML, (epsilon, delta)-PML and (epsilon, delta)-EML.

The EML quantity ``kappa(delta)`` is the value of a linear-fractional
program over ``{a in [0,1]^Y : sum_y a_y P_Y(y) >= delta}``.  Its optimum
sits at an extreme point: for each x, take outputs in order of decreasing
information density until the mass reaches ``delta``, using a fraction
``zeta`` of the last one.  The program is solved on the reduced channel so
the answer does not depend on how similar outputs happen to be split.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .channel_ops import ReducedChannelMap, reduce
from .core import (
    Event,
    InvalidDelta,
    InvalidEpsilon,
    Joint,
    format_scalar,
    isclose,
    leq,
    lt,
    parse_scalar,
    to_log,
    zero,
)
from .leakage import leakage_distribution, pml, pml_maximizers


class Kind(str, Enum):
    PML = "PML"
    DELTA_PML = "DELTA_PML"
    EML = "EML"


@dataclass(frozen=True)
class GuaranteeReport:
    """Outcome of checking one guarantee.

    ``witness`` is the worst output index for PML kinds and an :class:`Event`
    for EML; ``witness_ratio`` is the leakage it attains.
    """

    kind: Kind
    epsilon_ratio: object
    delta: object
    holds: bool
    witness: object
    witness_ratio: object
    note: str = ""

    @property
    def epsilon(self) -> float:
        return to_log(self.epsilon_ratio)


def _epsilon(joint: Joint, eps_ratio):
    eps = parse_scalar(eps_ratio, joint.mode)
    if lt(eps, 1):
        raise InvalidEpsilon(f"epsilon ratio {format_scalar(eps)} is below 1 (negative epsilon)")
    return eps


def _delta(joint: Joint, delta, allow_zero=True):
    d = parse_scalar(delta, joint.mode)
    if d < 0 or (d > 1 and not isclose(d, 1)):
        raise InvalidDelta(f"delta {format_scalar(d)} outside [0, 1]")
    if d == 0 and not allow_zero:
        raise InvalidDelta("delta must be positive here; delta = 0 is the epsilon-PML case")
    return d


def check_eps_pml(joint: Joint, eps_ratio, kind: Kind = Kind.PML) -> GuaranteeReport:
    """epsilon-PML holds iff every supported output leaks at most ``eps_ratio``."""
    eps = _epsilon(joint, eps_ratio)
    worst = leakage_distribution(joint).entries[0]
    return GuaranteeReport(
        kind, eps, zero(joint.mode), leq(worst.ratio, eps), worst.y, worst.ratio
    )


def check_delta_pml(joint: Joint, eps_ratio, delta) -> GuaranteeReport:
    """(epsilon, delta)-PML holds iff outputs leaking more than epsilon have mass at most delta."""
    eps = _epsilon(joint, eps_ratio)
    d = _delta(joint, delta)
    dist = leakage_distribution(joint)
    worst = dist.entries[0]
    tail = dist.tail_mass(eps)
    return GuaranteeReport(
        Kind.DELTA_PML, eps, d, leq(tail, d), worst.y, worst.ratio,
        note=f"mass leaking more than epsilon: {format_scalar(tail)}",
    )


def min_eps_for_delta_pml(joint: Joint, delta):
    """Smallest ratio ``r`` with ``P_Y[pml(Y) > r] <= delta``.

    Returns
    -------
    (ratio, excluded)
        ``excluded`` lists the outputs leaking more than ``ratio``, highest
        leakage first and then by index.
    """
    d = _delta(joint, delta)
    dist = leakage_distribution(joint)
    levels = sorted({e.ratio for e in dist}, reverse=False)
    candidates = [parse_scalar(1, joint.mode)] + [r for r in levels if not isclose(r, 1)]
    for r in candidates:
        if leq(dist.tail_mass(r), d):
            excluded = tuple(e.y for e in dist if e.ratio > r and not isclose(e.ratio, r))
            return r, excluded
    raise AssertionError("the largest level always satisfies the tail bound")


# ------------------------------------------------------------------- EML


@dataclass(frozen=True)
class HxResult:
    """Extreme point chosen for one secret.

    ``order`` is the density ordering of reduced outputs, ``k_star`` the
    position of the boundary output in that order and ``zeta`` its weight.
    """

    ratio: object
    order: tuple[int, ...]
    k_star: int
    zeta: object


def _h_x(rjoint: Joint, i: int, d) -> HxResult:
    m = rjoint.channel.matrix
    p_y = rjoint.p_y
    cols = rjoint.support_y
    density = {j: m[i, j] / p_y[j] for j in cols}
    order = sorted(cols, key=lambda j: (-density[j], j))
    mass = zero(rjoint.mode)
    num = zero(rjoint.mode)
    for k, j in enumerate(order):
        if leq(d, mass + p_y[j]) or k == len(order) - 1:
            zeta = (d - mass) / p_y[j]
            if zeta > 1:
                zeta = parse_scalar(1, rjoint.mode)
            return HxResult((num + zeta * m[i, j]) / d, tuple(order), k, zeta)
        mass = mass + p_y[j]
        num = num + m[i, j]
    raise AssertionError("unreachable")


def eml_h_x(joint: Joint, x, delta, reduced: ReducedChannelMap | None = None):
    """Largest leakage of a ``delta``-probable event when the adversary bets on ``x``."""
    d = _delta(joint, delta, allow_zero=False)
    rmap = reduced if reduced is not None else reduce(joint)
    return _h_x(rmap.joint, joint.x_index(x), d).ratio


@dataclass(frozen=True)
class KappaResult:
    """``kappa(delta)`` with the least private event that attains it.

    ``event`` refers to the original outputs; when the boundary class has to
    be cut, one of its members carries the split weight.  ``reduced_event``
    is the same event on the reduced channel, with the class weight ``zeta``.
    """

    ratio: object
    x: int
    event: Event
    reduced_event: Event
    h_values: tuple
    maximizers: tuple[int, ...]
    reduced: ReducedChannelMap = field(repr=False)

    def __iter__(self):
        yield self.ratio
        yield self.event


def _lift_event(joint: Joint, rmap: ReducedChannelMap, res: HxResult) -> tuple[Event, Event]:
    rjoint = rmap.joint
    prefix = res.order[: res.k_star]
    boundary = res.order[res.k_star]
    zeta = res.zeta
    if isclose(zeta, 1):
        reduced_event = Event(frozenset(prefix) | {boundary})
    else:
        reduced_event = Event(frozenset(prefix), (boundary, zeta))
    members = set()
    for c in prefix:
        members.update(rmap.merge_map[c])
    if reduced_event.split is None:
        members.update(rmap.merge_map[boundary])
        return Event(frozenset(members)), reduced_event
    need = zeta * rjoint.p_y[boundary]
    for j in rmap.merge_map[boundary]:
        p = joint.p_y[j]
        if leq(need, p):
            if isclose(need, p):
                members.add(j)
                return Event(frozenset(members)), reduced_event
            return Event(frozenset(members), (j, need / p)), reduced_event
        members.add(j)
        need = need - p
    return Event(frozenset(members)), reduced_event


def eml_kappa(joint: Joint, delta) -> KappaResult:
    """``kappa(delta) = max_x h_x(delta)`` and a least private event.

    When several secrets attain the maximum the event is built for the
    lowest index; all of them are listed in ``maximizers``.
    """
    d = _delta(joint, delta, allow_zero=False)
    rmap = reduce(joint)
    rjoint = rmap.joint
    results = [_h_x(rjoint, i, d) for i in range(joint.n_x)]
    values = tuple(r.ratio for r in results)
    best = max(values)
    maximizers = tuple(i for i, v in enumerate(values) if isclose(v, best))
    x = maximizers[0]
    event, reduced_event = _lift_event(joint, rmap, results[x])
    return KappaResult(best, x, event, reduced_event, values, maximizers, rmap)


def check_eps_delta_eml(joint: Joint, eps_ratio, delta) -> GuaranteeReport:
    """(epsilon, delta)-EML holds iff ``kappa(delta) <= eps_ratio``; delta = 0 is epsilon-PML."""
    eps = _epsilon(joint, eps_ratio)
    d = _delta(joint, delta)
    if d == 0:
        return check_eps_pml(joint, eps, kind=Kind.EML)
    res = eml_kappa(joint, d)
    note = ""
    if len(res.maximizers) > 1:
        others = ", ".join(joint.labels_x[i] for i in res.maximizers[1:])
        note = f"event built for {joint.labels_x[res.x]}; also maximal for {others}"
    return GuaranteeReport(Kind.EML, eps, d, leq(res.ratio, eps), res.event, res.ratio, note)


@dataclass(frozen=True)
class KappaCurve:
    """``kappa`` evaluated at every mass where some secret's extreme point changes.

    Between consecutive breakpoints each ``h_x`` has the form ``a + b/delta``,
    so these points describe the whole curve.
    """

    breakpoints: tuple[tuple[object, object], ...]


def kappa_curve(joint: Joint) -> KappaCurve:
    rmap = reduce(joint)
    rjoint = rmap.joint
    cuts = set()
    for i in range(joint.n_x):
        density = {j: rjoint.channel.matrix[i, j] / rjoint.p_y[j] for j in rjoint.support_y}
        order = sorted(rjoint.support_y, key=lambda j: (-density[j], j))
        mass = zero(joint.mode)
        for j in order:
            mass = mass + rjoint.p_y[j]
            cuts.add(min(mass, parse_scalar(1, joint.mode)))
    points = []
    for d in sorted(cuts):
        if d > 0:
            values = [_h_x(rjoint, i, d).ratio for i in range(joint.n_x)]
            points.append((d, max(values)))
    return KappaCurve(tuple(points))


@dataclass(frozen=True)
class EmlPmlDiagnostic:
    """Whether (epsilon, delta)-EML lets us conclude (epsilon, delta)-PML.

    The conclusion is available when one secret maximizes the information
    density of every output in ``high`` (the outputs leaking more than
    epsilon).  Then ``high`` itself is an event leaking more than epsilon,
    so EML forces its mass below delta.
    """

    condition_met: bool
    common_x: int | None
    high: tuple[int, ...]
    high_mass: object
    eml_holds: bool
    pml_holds: bool
    note: str


def eml_implies_pml_check(joint: Joint, eps_ratio, delta) -> EmlPmlDiagnostic:
    eps = _epsilon(joint, eps_ratio)
    d = _delta(joint, delta)
    eml_holds = check_eps_delta_eml(joint, eps, d).holds
    dist = leakage_distribution(joint)
    high = tuple(sorted(e.y for e in dist if lt(eps, e.ratio)))
    mass = sum((joint.p_y[j] for j in high), zero(joint.mode))
    pml_holds = leq(mass, d)
    if not high:
        return EmlPmlDiagnostic(True, None, high, mass, eml_holds, pml_holds,
                                "no output leaks more than epsilon")
    common = set(range(joint.n_x))
    for j in high:
        common &= set(pml_maximizers(joint, j))
    if common:
        x = min(common)
        note = (f"{joint.labels_x[x]} maximizes every high-leakage output; "
                f"their mass is {format_scalar(mass)}")
        return EmlPmlDiagnostic(True, x, high, mass, eml_holds, pml_holds, note)
    note = ("no single secret maximizes all high-leakage outputs; "
            f"their mass is {format_scalar(mass)}")
    return EmlPmlDiagnostic(False, None, high, mass, eml_holds, pml_holds, note)


__all__ = [
    "EmlPmlDiagnostic",
    "GuaranteeReport",
    "HxResult",
    "KappaCurve",
    "KappaResult",
    "Kind",
    "check_delta_pml",
    "check_eps_delta_eml",
    "check_eps_pml",
    "eml_h_x",
    "eml_implies_pml_check",
    "eml_kappa",
    "kappa_curve",
    "min_eps_for_delta_pml",
]
