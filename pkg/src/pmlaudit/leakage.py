"""Pointwise, conditional, event and maximal leakage as exact ratios."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .core import (
    Channel,
    EmptyEvent,
    Event,
    Joint,
    OutOfSupport,
    Prior,
    ZeroProbabilityEvent,
    isclose,
    to_log,
)


def pml(joint: Joint, y):
    """Ratio ``exp(l(X -> y)) = max_x P_{Y|X=x}(y) / P_Y(y)``."""
    j = joint.supported_y(y)
    return joint.channel.matrix[:, j].max() / joint.p_y[j]


def pml_maximizers(joint: Joint, y) -> tuple[int, ...]:
    """Indices of every x attaining the maximum in :func:`pml`."""
    j = joint.supported_y(y)
    col = joint.channel.matrix[:, j]
    top = col.max()
    return tuple(i for i, v in enumerate(col) if isclose(v, top))


@dataclass(frozen=True)
class LeakageEntry:
    y: int
    label: str
    probability: object
    ratio: object

    @property
    def nats(self) -> float:
        return to_log(self.ratio)


@dataclass(frozen=True)
class LeakageDistribution:
    """The random variable ``l(X -> Y)`` as sorted (outcome, mass, ratio) triples.

    Entries are sorted by ratio, largest first; ties keep output order.
    """

    entries: tuple[LeakageEntry, ...]

    def __iter__(self) -> Iterator[LeakageEntry]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def max_ratio(self):
        return self.entries[0].ratio

    def expected_ratio(self):
        """``E[exp l(X -> Y)]``, which equals ``exp`` of maximal leakage."""
        return sum((e.probability * e.ratio for e in self.entries), 0 * self.entries[0].ratio)

    def expected_log(self) -> float:
        return float(sum(float(e.probability) * e.nats for e in self.entries))

    def tail_mass(self, ratio):
        """``P_Y[exp l(X -> Y) > ratio]``."""
        mass = 0 * self.entries[0].probability
        for e in self.entries:
            if e.ratio > ratio and not isclose(e.ratio, ratio):
                mass = mass + e.probability
        return mass


def leakage_distribution(joint: Joint) -> LeakageDistribution:
    entries = [
        LeakageEntry(j, joint.labels_y[j], joint.p_y[j], pml(joint, j))
        for j in joint.support_y
    ]
    # stable sort keeps index order among equal ratios
    entries.sort(key=lambda e: -e.ratio)
    return LeakageDistribution(tuple(entries))


def _xz_rows(prior: Prior, channel_z: Channel, channel_y: Channel) -> np.ndarray:
    n_x, n_z = len(prior), channel_z.shape[1]
    if channel_z.shape[0] != n_x:
        raise OutOfSupport("P_{Z|X} rows do not match the prior")
    if channel_y.shape[0] != n_x * n_z:
        raise OutOfSupport("P_{Y|XZ} must have one row per (x, z) pair")
    return channel_y.matrix.reshape(n_x, n_z, channel_y.shape[1])


def conditional_pml(prior: Prior, channel_z: Channel, channel_y: Channel, y, z):
    """Ratio ``exp(l(X -> y | z))``.

    ``channel_y`` has one row per pair (x, z), ordered x-major.
    """
    pyxz = _xz_rows(prior, channel_z, channel_y)
    zi = channel_z.y_index(z) if isinstance(z, str) else int(z)
    yi = channel_y.y_index(y) if isinstance(y, str) else int(y)
    joint_xz = prior.probs * channel_z.matrix[:, zi]
    p_z = joint_xz.sum()
    if p_z == 0:
        raise OutOfSupport(f"z = {channel_z.labels_y[zi]!r} has zero probability")
    post_x = joint_xz / p_z
    col = pyxz[:, zi, yi]
    p_y_given_z = (post_x * col).sum()
    if p_y_given_z == 0:
        raise OutOfSupport(
            f"y = {channel_y.labels_y[yi]!r} has zero probability given z = {channel_z.labels_y[zi]!r}"
        )
    support = [i for i in range(len(prior)) if post_x[i] > 0]
    return max(col[i] for i in support) / p_y_given_z


def conditional_maximizers(prior: Prior, channel_z: Channel, channel_y: Channel, y, z):
    pyxz = _xz_rows(prior, channel_z, channel_y)
    zi, yi = int(z), int(y)
    post_x = prior.probs * channel_z.matrix[:, zi]
    support = [i for i in range(len(prior)) if post_x[i] > 0]
    top = max(pyxz[i, zi, yi] for i in support)
    return tuple(i for i in support if isclose(pyxz[i, zi, yi], top))


def event_leakage(joint: Joint, e: Event):
    """Ratio ``max_x P_{Y|X=x}(E) / P_Y(E)``, honouring a fractional split."""
    if not e.members and e.split is None:
        raise EmptyEvent("event has no outputs")
    w = e.weights(joint.n_y, joint.mode)
    den = (w * joint.p_y).sum()
    if den == 0 or isclose(den, 0):
        raise ZeroProbabilityEvent(f"event {e.describe(joint.labels_y)} has zero probability")
    num = joint.channel.matrix @ w
    return num.max() / den


def maximal_leakage(channel: Channel):
    """``exp L(P_{Y|X}) = sum_y max_x P_{Y|X=x}(y)``; the prior plays no role."""
    return channel.matrix.max(axis=0).sum()


def eps_max(prior: Prior):
    """Largest possible ratio under ``prior``: ``1 / min P_X``."""
    positive = [p for p in prior.probs if p > 0]
    return 1 / min(positive)


def dynamic_leakage(joint: Joint, y):
    """Dynamic min-entropy leakage ratio ``max_x P_{X|Y=y}(x) / max_x P_X(x)``."""
    j = joint.supported_y(y)
    post = joint.prior.probs * joint.channel.matrix[:, j] / joint.p_y[j]
    return post.max() / joint.prior.probs.max()


__all__ = [
    "LeakageDistribution",
    "LeakageEntry",
    "conditional_maximizers",
    "conditional_pml",
    "dynamic_leakage",
    "eps_max",
    "event_leakage",
    "leakage_distribution",
    "maximal_leakage",
    "pml",
    "pml_maximizers",
]
