"""Adversary views of leakage: guessing a randomized function, or maximizing a gain.

Both views compare the adversary's best expected success after seeing
``y`` with the best success without it.  Every randomized function is a
gain function, and for a fixed ``y`` every gain function can be emulated by
a randomized function; :func:`gain_from_function` and
:func:`function_from_gain` build these translations explicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import (
    Channel,
    Joint,
    NegativeEntry,
    ShapeMismatch,
    ZeroBaselineGain,
    as_array,
    isclose,
    one,
    posterior,
    zero,
)


@dataclass(frozen=True, eq=False)
class RandomizedFunction:
    """A randomized function ``U`` of the secret, given by its kernel ``P_{U|X}``."""

    kernel: Channel
    construction: str = ""

    @property
    def labels_u(self) -> tuple[str, ...]:
        return self.kernel.labels_y


@dataclass(frozen=True, eq=False)
class GainFunction:
    """Gain matrix ``g(x, xhat)`` scaled so that its largest entry is 1."""

    matrix: np.ndarray
    labels_x: tuple[str, ...]
    labels_xhat: tuple[str, ...]

    def __init__(self, matrix, labels_x: Sequence[str] | None = None,
                 labels_xhat: Sequence[str] | None = None, mode: str | None = None):
        arr = as_array(matrix, mode)
        if arr.ndim != 2:
            raise ShapeMismatch("gain must be a matrix")
        n_x, n_g = arr.shape
        if any(v < 0 for v in arr.ravel()):
            raise NegativeEntry("gain entries must be nonnegative")
        top = arr.max()
        if top > 0:
            arr = arr / top
        labels_x = tuple(labels_x) if labels_x is not None else tuple(f"x{i + 1}" for i in range(n_x))
        labels_xhat = (tuple(labels_xhat) if labels_xhat is not None
                       else tuple(f"g{i + 1}" for i in range(n_g)))
        if len(labels_x) != n_x or len(labels_xhat) != n_g:
            raise ShapeMismatch("gain labels do not match the matrix shape")
        arr.setflags(write=False)
        object.__setattr__(self, "matrix", arr)
        object.__setattr__(self, "labels_x", labels_x)
        object.__setattr__(self, "labels_xhat", labels_xhat)


def _rows(matrix: np.ndarray, labels: Sequence[str], joint: Joint, what: str) -> np.ndarray:
    if set(joint.labels_x) <= set(labels):
        pos = {lab: i for i, lab in enumerate(labels)}
        rows = matrix[[pos[lab] for lab in joint.labels_x]]
    elif matrix.shape[0] == joint.n_x:
        rows = matrix
    else:
        raise ShapeMismatch(f"{what} has no row for some secret of the model")
    return as_array(rows, joint.mode)


def _ratio(num_vec, den_vec):
    den = den_vec.max()
    if den == 0:
        raise ZeroBaselineGain("the best gain without observation is zero")
    return num_vec.max() / den


def u_leakage(joint: Joint, u: RandomizedFunction, y):
    """Multiplicative gain in guessing ``U`` after observing ``y``."""
    k = _rows(u.kernel.matrix, u.kernel.labels_x, joint, "kernel")
    post = posterior(joint, y)
    return _ratio(post @ k, joint.prior.probs @ k)


def g_leakage(joint: Joint, g: GainFunction, y):
    """Multiplicative increase of the best expected gain after observing ``y``."""
    gm = _rows(g.matrix, g.labels_x, joint, "gain")
    post = posterior(joint, y)
    return _ratio(post @ gm, joint.prior.probs @ gm)


def identity_gain(joint: Joint) -> GainFunction:
    """Gain 1 for guessing the secret exactly; its leakage is dynamic min-entropy leakage."""
    n = joint.n_x
    m = [[one(joint.mode) if i == j else zero(joint.mode) for j in range(n)] for i in range(n)]
    return GainFunction(m, joint.labels_x, joint.labels_x, joint.mode)


def gain_from_function(u: RandomizedFunction) -> GainFunction:
    """Gain ``g(x, u) = P_{U|X=x}(u)``: guessing ``U`` is a gain function."""
    k = u.kernel
    return GainFunction(k.matrix, k.labels_x, k.labels_y, k.mode)


# ------------------------------------------------------------ gain -> U


def _floor_ceil(k):
    r = round(k)
    if isclose(k, r):
        return r, r
    return math.floor(k), math.ceil(k)


def _block(gcol, members: Sequence[int]):
    """Shattering-style letters: ``floor(1/g)`` chunks of mass ``g`` plus a remainder.

    Returns the list of letter columns as ``{row: mass}`` dictionaries.
    """
    sizes = {i: _floor_ceil(1 / gcol[i]) for i in members}
    n_letters = max(c for _, c in sizes.values())
    letters = [dict() for _ in range(n_letters)]
    for i in members:
        lo, hi = sizes[i]
        for t in range(lo):
            letters[t][i] = gcol[i]
        if hi > lo:
            letters[lo][i] = 1 - lo * gcol[i]
    return letters


def _padding(members: Sequence[int], post, prior, num_target, den_target, mode):
    """Uniform letters for ``members``, enough of them that none can win a max.

    Each padding letter collects ``mass / n``; ``n`` is the smallest integer
    with ``mass / n`` strictly below the target, under both distributions.
    """
    n = 1
    for dist, target in ((post, num_target), (prior, den_target)):
        mass = sum(dist[i] for i in members)
        n = max(n, math.floor(mass / target) + 1)
    share = one(mode) / n
    return [{i: share for i in members} for _ in range(n)]


def function_from_gain(joint: Joint, g: GainFunction, y) -> RandomizedFunction:
    """Randomized function ``U_g`` whose leakage at ``y`` equals the g-leakage at ``y``.

    If one guess is best both before and after observing ``y``, a single
    shattering-style block built from that guess's gains suffices.  Otherwise
    ``U_g`` flips a fair coin between a block for the best guess after
    observing ``y`` and a block for the best guess before it.  Secrets that a
    block gives zero gain get padding letters, numerous enough that no
    padding letter becomes the adversary's best guess.
    """
    mode = joint.mode
    gm = _rows(g.matrix, g.labels_x, joint, "gain")
    post = posterior(joint, y)
    prior = joint.prior.probs
    num_vals = post @ gm
    den_vals = prior @ gm
    N, D = num_vals.max(), den_vals.max()
    if D == 0:
        raise ZeroBaselineGain("the best gain without observation is zero")
    if N == 0:
        raise ZeroBaselineGain(
            f"every guess has zero gain after observing {joint.labels_y[joint.supported_y(y)]!r}; "
            "no randomized function has zero leakage ratio"
        )
    best_num = [j for j, v in enumerate(num_vals) if isclose(v, N)]
    best_den = [j for j, v in enumerate(den_vals) if isclose(v, D)]
    shared = [j for j in best_num if j in best_den]
    n_x = joint.n_x
    letters: list[dict] = []
    half = one(mode) / 2
    if shared:
        v = shared[0]
        x_v = [i for i in range(n_x) if gm[i, v] > 0]
        letters += _block(gm[:, v], x_v)
        rest = [i for i in range(n_x) if i not in x_v]
        construction = "case 1"
        if rest:
            pad = _padding(rest, post, prior, N, D, mode)
            letters += pad
            construction += " with padding"
    else:
        v, w = best_num[0], best_den[0]
        x_v = [i for i in range(n_x) if gm[i, v] > 0]
        x_w = [i for i in range(n_x) if gm[i, w] > 0]
        v_letters = _block(gm[:, v], x_v)
        w_letters = _block(gm[:, w], x_w)
        construction = "case 2.1" if set(x_v) == set(x_w) else "case 2.2"
        only_w = [i for i in x_w if i not in x_v]
        only_v = [i for i in x_v if i not in x_w]
        if only_w:
            v_letters += _padding(only_w, post, prior, N / 2, D / 2, mode)
        if only_v:
            w_letters += _padding(only_v, post, prior, N / 2, D / 2, mode)
        # each half carries probability 1/2
        letters += [{i: half * p for i, p in col.items()} for col in v_letters]
        letters += [{i: half * p for i, p in col.items()} for col in w_letters]
        covered = set(x_v) | set(x_w)
        rest = [i for i in range(n_x) if i not in covered]
        if rest:
            pad = _padding(rest, post, prior, N / 2, D / 2, mode)
            letters += pad
            construction += " with padding"
    matrix = [[col.get(i, zero(mode)) for col in letters] for i in range(n_x)]
    labels = [f"u{t + 1}" for t in range(len(letters))]
    kernel = Channel(matrix, joint.labels_x, labels, mode)
    return RandomizedFunction(kernel, construction)


__all__ = [
    "GainFunction",
    "RandomizedFunction",
    "function_from_gain",
    "g_leakage",
    "gain_from_function",
    "identity_gain",
    "u_leakage",
]
