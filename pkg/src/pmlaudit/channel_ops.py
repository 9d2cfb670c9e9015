"""Channel algebra: similarity, reduction, splitting and composition."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .core import (
    FLOAT,
    RATIONAL,
    Channel,
    Event,
    InvalidDelta,
    InvalidEpsilon,
    InvalidZeta,
    Joint,
    MissingStage,
    Prior,
    ShapeMismatch,
    isclose,
    leq,
    one,
    parse_scalar,
    validate_model,
    zero,
)
from .leakage import eps_max as _eps_max


def are_similar(joint: Joint, y, y2) -> bool:
    """True iff the two outputs induce the same posterior on X."""
    a, b = joint.supported_y(y), joint.supported_y(y2)
    m = joint.channel.matrix
    post_a = m[:, a] / joint.p_y[a]
    post_b = m[:, b] / joint.p_y[b]
    return all(isclose(u, v) for u, v in zip(post_a, post_b))


@dataclass(frozen=True, eq=False)
class ReducedChannelMap:
    """A reduced channel with the bookkeeping back to the original outputs.

    ``merge_map[k]`` lists the original outputs summed into reduced output
    ``k``; ``dropped`` lists outputs whose column is zero on ``supp(P_X)``.
    """

    reduced: Channel
    merge_map: tuple[tuple[int, ...], ...]
    dropped: tuple[int, ...]
    prior: Prior

    @property
    def joint(self) -> Joint:
        return validate_model(self.prior, self.reduced)

    def class_of(self, y: int) -> int:
        for k, members in enumerate(self.merge_map):
            if y in members:
                return k
        raise KeyError(y)


def _similarity_classes(joint: Joint) -> list[list[int]]:
    m = joint.channel.matrix
    if joint.mode == RATIONAL:
        # exact posteriors are canonical, so they can be used as hash keys
        groups: dict[tuple, list[int]] = {}
        for j in joint.support_y:
            key = tuple(m[:, j] / joint.p_y[j])
            groups.setdefault(key, []).append(j)
        return list(groups.values())
    classes: list[list[int]] = []
    for j in joint.support_y:
        for cls in classes:
            if are_similar(joint, cls[0], j):
                cls.append(j)
                break
        else:
            classes.append([j])
    return classes


def reduce(joint: Joint) -> ReducedChannelMap:
    """Drop zero columns and merge similar outputs by adding their columns."""
    classes = _similarity_classes(joint)
    m = joint.channel.matrix
    cols = [m[:, cls].sum(axis=1) for cls in classes]
    matrix = np.stack(cols, axis=1)
    labels = ["+".join(joint.labels_y[j] for j in cls) for cls in classes]
    reduced = Channel(matrix, joint.labels_x, labels, joint.mode)
    return ReducedChannelMap(
        reduced,
        tuple(tuple(cls) for cls in classes),
        joint.out_of_support,
        joint.prior,
    )


def _fresh_label(base: str, taken: set) -> str:
    label, n = base, 1
    while label in taken:
        n += 1
        label = f"{base}{n}"
    return label


def split_outcome(joint: Joint, y, zeta) -> Joint:
    """Replace output ``y`` by two similar outputs carrying ``zeta`` and ``1 - zeta``."""
    j = joint.supported_y(y)
    zeta = parse_scalar(zeta, joint.mode)
    if not (zeta > 0 and zeta < 1) or isclose(zeta, 0) or isclose(zeta, 1):
        raise InvalidZeta(f"split weight must lie strictly between 0 and 1")
    m = joint.channel.matrix
    col = m[:, j]
    matrix = np.concatenate([m[:, :j], (zeta * col)[:, None], ((1 - zeta) * col)[:, None], m[:, j + 1:]], axis=1)
    taken = set(joint.labels_y)
    lab = joint.labels_y[j]
    first = _fresh_label(f"{lab}'", taken)
    taken.add(first)
    second = _fresh_label(f"{lab}''", taken)
    labels = joint.labels_y[:j] + (first, second) + joint.labels_y[j + 1:]
    return validate_model(joint.prior, Channel(matrix, joint.labels_x, labels, joint.mode))


def postprocess(joint: Joint, k: Channel) -> Joint:
    """Joint of X and ``Z``, where ``Z`` is ``Y`` passed through ``P_{Z|Y} = k``."""
    if k.shape[0] != joint.n_y:
        raise ShapeMismatch(
            f"post-processing kernel has {k.shape[0]} rows for {joint.n_y} outputs"
        )
    if k.mode != joint.mode:
        k = Channel(k.matrix, k.labels_x, k.labels_y, joint.mode)
    matrix = joint.channel.matrix @ k.matrix
    return validate_model(joint.prior, Channel(matrix, joint.labels_x, k.labels_y, joint.mode))


def _stage_rows(stage: Channel, labels_x: Sequence[str], mode: str) -> np.ndarray:
    if set(labels_x) <= set(stage.labels_x):
        rows = stage.rows_for(labels_x)
    elif stage.shape[0] == len(labels_x):
        # stages with default labels are matched by position
        rows = stage.matrix
    else:
        raise ShapeMismatch(f"stage channel has no rows for {list(labels_x)}")
    if mode == FLOAT:
        return rows.astype(float)
    if stage.mode != mode:
        out = np.empty(rows.shape, dtype=object)
        out[...] = [[parse_scalar(v, mode) for v in r] for r in rows]
        return out
    return rows


def compose_adaptive(prior: Prior, first: Channel, second: Mapping[str, Channel]) -> Joint:
    """Adaptive composition ``P_{YZ|X=x}(y,z) = P_{Y|X=x}(y) P_{Z|X=x,Y=y}(z)``.

    ``second`` maps each output label of ``first`` to the channel used after
    observing it.  Every supported output needs a stage.  The product
    alphabet is kept in full, ordered y-major with labels ``"y,z"``; pairs
    of zero probability appear outside ``support_y``.
    """
    base = validate_model(prior, first)
    labels_z = None
    for stage in second.values():
        if labels_z is None:
            labels_z = stage.labels_y
        elif stage.labels_y != labels_z:
            raise ShapeMismatch("second-stage channels use different output alphabets")
    for j in base.support_y:
        if base.labels_y[j] not in second:
            raise MissingStage(f"no second-stage channel for output {base.labels_y[j]!r}")
    if labels_z is None:
        raise MissingStage("no second-stage channels given")
    n_x, n_z = base.n_x, len(labels_z)
    mode = base.mode
    blocks = []
    for j, lab in enumerate(base.labels_y):
        col = base.channel.matrix[:, j][:, None]
        if lab in second:
            blocks.append(col * _stage_rows(second[lab], base.labels_x, mode))
        else:
            blocks.append(np.array([[zero(mode)] * n_z] * n_x, dtype=base.channel.matrix.dtype))
    matrix = np.concatenate(blocks, axis=1)
    labels = [f"{y},{z}" for y in base.labels_y for z in labels_z]
    return validate_model(base.prior, Channel(matrix, base.labels_x, labels, mode))


def stage_joint(prior: Prior, first: Channel, second: Mapping[str, Channel], y) -> Joint:
    """The second stage seen from an observer who already knows ``Y = y``.

    Its prior is the posterior ``P_{X|Y=y}``; guarantees for stage channels
    are stated relative to this joint.
    """
    base = validate_model(prior, first)
    j = base.supported_y(y)
    post = base.prior.probs * base.channel.matrix[:, j] / base.p_y[j]
    lab = base.labels_y[j]
    if lab not in second:
        raise MissingStage(f"no second-stage channel for output {lab!r}")
    rows = _stage_rows(second[lab], base.labels_x, base.mode)
    stage = Channel(rows, base.labels_x, second[lab].labels_y, base.mode)
    return validate_model(Prior(post, base.labels_x, base.mode), stage)


def pair_index(y: int, z: int, n_z: int) -> int:
    """Column of the pair (y, z) in a composed joint."""
    return y * n_z + z


def stage_event_condition(composed: Joint, n_z: int, event: Event, delta2) -> bool:
    """Check ``delta2 <= min_y P_{Z|Y=y}(E_Z(y))`` over the outputs touched by ``event``.

    ``event`` lives on the product alphabet of ``composed``.  Events carrying
    a fractional split are not covered by this condition and return False.
    """
    if event.split is not None:
        return False
    by_y: dict[int, list[int]] = {}
    for k in event.members:
        by_y.setdefault(k // n_z, []).append(k)
    for yi, pairs in by_y.items():
        row = range(yi * n_z, (yi + 1) * n_z)
        p_y = sum((composed.p_y[k] for k in row), zero(composed.mode))
        if p_y == 0:
            continue
        share = sum((composed.p_y[k] for k in pairs), zero(composed.mode)) / p_y
        if not leq(delta2, share):
            return False
    return True


def shattering_channel(prior: Prior) -> Channel:
    """Kernel ``P_{U|X}`` that splits each x into letters of mass ``p* = min P_X``.

    Secret ``x`` gets ``floor(k)`` letters of conditional mass ``p*/P_X(x)``
    and, when ``k = P_X(x)/p*`` is not an integer, one more letter holding
    the remainder.  Only secrets in the support get rows.
    """
    mode = prior.mode
    support = [i for i, p in enumerate(prior.probs) if p > 0 and not isclose(p, 0)]
    p_star = min(prior.probs[i] for i in support)
    letters: list[tuple[int, object]] = []
    labels: list[str] = []
    for i in support:
        px = prior.probs[i]
        k = px / p_star
        whole = round(k) if isclose(k, round(k)) else math.floor(k)
        share = p_star / px
        for t in range(whole):
            letters.append((i, share))
            labels.append(f"{prior.labels[i]}:{t + 1}")
        if whole != k and not isclose(k, whole):
            letters.append((i, one(mode) - whole * share))
            labels.append(f"{prior.labels[i]}:{whole + 1}")
    matrix = [[zero(mode)] * len(letters) for _ in support]
    row_of = {i: r for r, i in enumerate(support)}
    for u, (i, w) in enumerate(letters):
        matrix[row_of[i]][u] = w
    return Channel(matrix, [prior.labels[i] for i in support], labels, mode)


# ------------------------------------------------------ guarantee calculators


def _check_pair(eps, delta, what):
    if eps is not None and not leq(1, eps):
        raise InvalidEpsilon(f"{what}: epsilon ratio {eps} is below 1")
    if delta < 0 or (delta > 1 and not isclose(delta, 1)):
        raise InvalidDelta(f"{what}: delta {delta} outside [0, 1]")


def _cap(delta):
    return min(delta, one(RATIONAL) if isinstance(delta, Fraction) else 1.0)


def compose_pml_bounds(part: int, eps1, delta1, eps2, delta2):
    """Guarantee for an adaptive composition built from PML stage guarantees.

    Epsilons are ratios, so composition multiplies them.

    Parameters
    ----------
    part : int
        1: both stages satisfy epsilon-PML (deltas must be 0).
        2: both stages satisfy (epsilon, delta)-PML.
        3: first stage (epsilon, delta)-PML, and the conditional leakage of
        the second stage exceeds ``eps2`` with probability at most ``delta2``.

    Returns
    -------
    (eps_ratio, delta)
        delta is capped at 1.
    """
    _check_pair(eps1, delta1, "first stage")
    _check_pair(eps2, delta2, "second stage")
    eps = eps1 * eps2
    if part == 1:
        if delta1 != 0 or delta2 != 0:
            raise InvalidDelta("part 1 composes pure guarantees; both deltas must be 0")
        return eps, delta1 * 0
    if part == 2:
        return eps, _cap(delta1 + delta2 - delta1 * delta2)
    if part == 3:
        return eps, _cap(delta1 + delta2)
    raise ValueError(f"PML composition has parts 1-3, not {part}")


def compose_eml_bounds(part: int, eps1, delta1, eps2, delta2, prior: Prior | None = None,
                       event_condition: bool = False):
    """Guarantee for an adaptive composition built from EML stage guarantees.

    Parameters
    ----------
    part : int
        4: first stage (eps1, delta1)-EML, second stage eps2-PML (``delta2 = 0``).
        For ``delta2 > 0`` part 4 only speaks about events passing
        :func:`stage_event_condition`; pass ``event_condition=True`` to get
        the bound that applies to those events.
        5: both stages (epsilon, delta)-EML; needs ``prior`` for epsilon_max.

    Returns
    -------
    (eps_ratio, delta)
    """
    _check_pair(eps1, delta1, "first stage")
    _check_pair(eps2, delta2, "second stage")
    if part == 4:
        if delta2 != 0 and not event_condition:
            raise InvalidDelta(
                "part 4 gives a blanket guarantee only for delta2 = 0; "
                "check events with stage_event_condition instead"
            )
        return eps1 * eps2, delta1
    if part == 5:
        if prior is None:
            raise ValueError("part 5 needs the prior to compute epsilon_max")
        total = delta1 + delta2
        if total == 0:
            return eps1 * eps2, total
        weight = delta2 / total
        return weight * _eps_max(prior) + eps1 * eps2, _cap(total)
    raise ValueError(f"EML composition has parts 4-5, not {part}")
