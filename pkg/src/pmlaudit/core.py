"""Priors, channels and joints over finite alphabets.

Every probability is stored in a numpy array whose dtype fixes the scalar
mode of the model: ``object`` arrays hold :class:`fractions.Fraction`
entries (rational mode, exact), ``float64`` arrays hold binary floats
(float mode).  A model never mixes the two.

Leakage quantities are handled as ratios ``exp(leakage)``; logarithms are
only taken when a value is displayed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np

RATIONAL = "rational"
FLOAT = "float"
MODES = (RATIONAL, FLOAT)

#: Relative tolerance used for every float-mode comparison.
FLOAT_RTOL = 1e-9
#: Absolute floor so that comparisons against zero behave sensibly.
FLOAT_ATOL = 1e-12


class PMLError(ValueError):
    """Base class for all validation and computation errors."""


class NonStochasticRow(PMLError):
    pass


class NegativeEntry(PMLError):
    pass


class ShapeMismatch(PMLError):
    pass


class EmptySupport(PMLError):
    pass


class OutOfSupport(PMLError):
    pass


class EmptyEvent(PMLError):
    pass


class ZeroProbabilityEvent(PMLError):
    pass


class InvalidEpsilon(PMLError):
    pass


class InvalidDelta(PMLError):
    pass


class InvalidZeta(PMLError):
    pass


class MissingStage(PMLError):
    pass


class ZeroBaselineGain(PMLError):
    pass


class UnknownF(PMLError):
    pass


class InfiniteInput(PMLError):
    pass


class ModeMismatch(PMLError):
    pass


class BudgetExceeded(PMLError):
    pass


class TooLargeForBruteForce(PMLError):
    """Raised when exhaustive event search would be too large.

    The sufficient bound that is still available is attached as ``fallback``.
    """

    def __init__(self, message, fallback=None):
        super().__init__(message)
        self.fallback = fallback


class _Unbounded:
    """Positive infinity that compares above every finite scalar."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "UNBOUNDED"

    def __str__(self):
        return "inf"

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("pmlaudit.UNBOUNDED")

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True


#: Flag for ratios with a zero denominator; not a float, so rational mode stays closed.
UNBOUNDED = _Unbounded()


# ---------------------------------------------------------------- scalars


def parse_scalar(value, mode: str | None = None):
    """Convert ``value`` to a scalar of the requested mode.

    Strings of the form ``"a/b"`` or ``"3"`` are rational by default, strings
    with a decimal point or exponent are floats by default.  An explicit
    ``mode`` overrides the literal's own type; ``"0.6"`` in rational mode is
    exactly ``3/5``.
    """
    if mode is not None and mode not in MODES:
        raise PMLError(f"unknown mode {mode!r}")
    if isinstance(value, str):
        text = value.strip()
        if mode is None:
            mode = FLOAT if any(c in text for c in ".eE") and "/" not in text else RATIONAL
        try:
            exact = Fraction(text)
        except (ValueError, ZeroDivisionError):
            raise PMLError(f"cannot parse {value!r} as a probability") from None
        return exact if mode == RATIONAL else float(exact)
    if isinstance(value, bool):
        raise PMLError(f"cannot parse {value!r} as a probability")
    if isinstance(value, (Rational, np.integer)):
        exact = Fraction(int(value)) if isinstance(value, np.integer) else Fraction(value)
        return float(exact) if mode == FLOAT else exact
    if isinstance(value, (float, np.floating)):
        if not math.isfinite(value):
            raise InfiniteInput(f"non-finite value {value!r}")
        if mode == RATIONAL:
            return Fraction(str(float(value)))
        return float(value)
    raise PMLError(f"cannot parse {value!r} as a probability")


def _infer_mode(values: Iterable) -> str:
    for v in values:
        if isinstance(v, (float, np.floating)):
            return FLOAT
        if isinstance(v, str) and any(c in v for c in ".eE") and "/" not in v:
            return FLOAT
    return RATIONAL


def as_array(values, mode: str | None = None) -> np.ndarray:
    """Build a 1-D or 2-D array of scalars in a single mode."""
    if isinstance(values, np.ndarray) and mode is None:
        mode = RATIONAL if values.dtype == object else FLOAT
    raw = np.asarray(values, dtype=object)
    flat = list(raw.ravel())
    if mode is None:
        mode = _infer_mode(flat)
    converted = [parse_scalar(v, mode) for v in flat]
    if mode == FLOAT:
        return np.array(converted, dtype=float).reshape(raw.shape)
    out = np.empty(len(converted), dtype=object)
    out[:] = converted
    return out.reshape(raw.shape)


def mode_of(arr: np.ndarray) -> str:
    return RATIONAL if arr.dtype == object else FLOAT


def zero(mode: str):
    return Fraction(0) if mode == RATIONAL else 0.0


def one(mode: str):
    return Fraction(1) if mode == RATIONAL else 1.0


def _is_exact(v) -> bool:
    return isinstance(v, Rational)


def isclose(a, b) -> bool:
    """Equality that is exact for rationals and uses ``FLOAT_RTOL`` otherwise."""
    if a is UNBOUNDED or b is UNBOUNDED:
        return a is b
    if _is_exact(a) and _is_exact(b):
        return a == b
    return math.isclose(float(a), float(b), rel_tol=FLOAT_RTOL, abs_tol=FLOAT_ATOL)


def leq(a, b) -> bool:
    """``a <= b`` with the float tolerance."""
    if a is UNBOUNDED:
        return b is UNBOUNDED
    if b is UNBOUNDED:
        return True
    return a <= b or isclose(a, b)


def lt(a, b) -> bool:
    """Strict ``a < b`` that treats nearly equal floats as equal."""
    return not leq(b, a)


def to_log(ratio) -> float:
    """Natural log of a ratio, for display."""
    if ratio is UNBOUNDED:
        return math.inf
    if ratio == 0:
        return -math.inf
    return math.log(ratio)


def format_scalar(v) -> str:
    if v is UNBOUNDED:
        return "inf"
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, Rational):
        return str(Fraction(v))
    return repr(float(v))


# ----------------------------------------------------------------- models


def _default_labels(prefix: str, n: int) -> tuple[str, ...]:
    return tuple(f"{prefix}{i + 1}" for i in range(n))


def _check_labels(labels: Sequence[str], n: int, what: str) -> tuple[str, ...]:
    labels = tuple(str(lab) for lab in labels)
    if len(labels) != n:
        raise ShapeMismatch(f"{what}: {len(labels)} labels for {n} entries")
    if len(set(labels)) != n:
        raise ShapeMismatch(f"{what}: labels are not distinct")
    return labels


def _check_distribution(vec: np.ndarray, what: str) -> None:
    for v in vec:
        if v < 0 and not isclose(v, 0):
            raise NegativeEntry(f"{what} has negative entry {format_scalar(v)}")
    total = vec.sum()
    if not isclose(total, 1):
        raise NonStochasticRow(f"{what} sums to {format_scalar(total)}, not 1")


@dataclass(frozen=True, eq=False)
class Prior:
    """Distribution ``P_X`` over labelled secrets."""

    probs: np.ndarray
    labels: tuple[str, ...]

    def __init__(self, probs, labels: Sequence[str] | None = None, mode: str | None = None):
        arr = as_array(probs, mode)
        if arr.ndim != 1:
            raise ShapeMismatch("prior must be a vector")
        if arr.size == 0:
            raise EmptySupport("prior has no entries")
        labels = _default_labels("x", arr.size) if labels is None else labels
        labels = _check_labels(labels, arr.size, "prior")
        _check_distribution(arr, "prior")
        arr.setflags(write=False)
        object.__setattr__(self, "probs", arr)
        object.__setattr__(self, "labels", labels)

    @property
    def mode(self) -> str:
        return mode_of(self.probs)

    def __len__(self) -> int:
        return self.probs.size

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise OutOfSupport(f"unknown x label {label!r}") from None


@dataclass(frozen=True, eq=False)
class Channel:
    """Row-stochastic matrix ``P_{Y|X}``; row i is secret i, column j is output j."""

    matrix: np.ndarray
    labels_x: tuple[str, ...]
    labels_y: tuple[str, ...]

    def __init__(
        self,
        matrix,
        labels_x: Sequence[str] | None = None,
        labels_y: Sequence[str] | None = None,
        mode: str | None = None,
    ):
        arr = as_array(matrix, mode)
        if arr.ndim != 2:
            raise ShapeMismatch("channel must be a matrix")
        n_x, n_y = arr.shape
        if n_x == 0 or n_y == 0:
            raise EmptySupport("channel has an empty alphabet")
        labels_x = _default_labels("x", n_x) if labels_x is None else labels_x
        labels_y = _default_labels("y", n_y) if labels_y is None else labels_y
        labels_x = _check_labels(labels_x, n_x, "channel rows")
        labels_y = _check_labels(labels_y, n_y, "channel columns")
        for i, row in enumerate(arr):
            _check_distribution(row, f"channel row {labels_x[i]!r}")
        arr.setflags(write=False)
        object.__setattr__(self, "matrix", arr)
        object.__setattr__(self, "labels_x", labels_x)
        object.__setattr__(self, "labels_y", labels_y)

    @property
    def mode(self) -> str:
        return mode_of(self.matrix)

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape

    def y_index(self, label: str) -> int:
        try:
            return self.labels_y.index(label)
        except ValueError:
            raise OutOfSupport(f"unknown y label {label!r}") from None

    def rows_for(self, labels_x: Sequence[str]) -> np.ndarray:
        """Rows of the matrix reordered to ``labels_x``."""
        pos = {lab: i for i, lab in enumerate(self.labels_x)}
        missing = [lab for lab in labels_x if lab not in pos]
        if missing:
            raise ShapeMismatch(f"channel has no row for x label {missing[0]!r}")
        return self.matrix[[pos[lab] for lab in labels_x]]


@dataclass(frozen=True, eq=False)
class Joint:
    """A prior and channel restricted to ``supp(P_X)``, with ``P_Y`` cached.

    Outputs with ``P_Y(y) = 0`` are kept for channel algebra but are absent
    from ``support_y``.
    """

    prior: Prior
    channel: Channel
    p_y: np.ndarray
    support_y: tuple[int, ...]
    dropped_x: tuple[str, ...] = field(default=())

    @property
    def mode(self) -> str:
        return self.prior.mode

    @property
    def n_x(self) -> int:
        return len(self.prior)

    @property
    def n_y(self) -> int:
        return self.channel.shape[1]

    @property
    def labels_x(self) -> tuple[str, ...]:
        return self.prior.labels

    @property
    def labels_y(self) -> tuple[str, ...]:
        return self.channel.labels_y

    @property
    def out_of_support(self) -> tuple[int, ...]:
        return tuple(j for j in range(self.n_y) if j not in set(self.support_y))

    def mass(self) -> np.ndarray:
        """``P_XY`` as an ``n_x`` by ``n_y`` array."""
        return self.prior.probs[:, None] * self.channel.matrix

    def x_index(self, x) -> int:
        if isinstance(x, str):
            return self.prior.index(x)
        if not 0 <= x < self.n_x:
            raise OutOfSupport(f"x index {x} outside supp(P_X)")
        return int(x)

    def y_index(self, y) -> int:
        if isinstance(y, str):
            return self.channel.y_index(y)
        if not 0 <= y < self.n_y:
            raise OutOfSupport(f"y index {y} outside the output alphabet")
        return int(y)

    def supported_y(self, y) -> int:
        j = self.y_index(y)
        if self.p_y[j] == 0:
            raise OutOfSupport(f"output {self.labels_y[j]!r} has P_Y = 0")
        return j


def validate_model(prior: Prior, channel: Channel) -> Joint:
    """Combine a prior and a channel into a :class:`Joint`.

    Secrets with zero prior mass are dropped; ``P_Y`` is computed once.
    """
    if prior.mode != channel.mode:
        raise ModeMismatch("prior and channel use different scalar modes")
    if len(prior) != channel.shape[0]:
        raise ShapeMismatch(
            f"prior has {len(prior)} entries but the channel has {channel.shape[0]} rows"
        )
    if tuple(channel.labels_x) != tuple(prior.labels):
        matrix = channel.rows_for(prior.labels)
    else:
        matrix = channel.matrix
    keep = [i for i, p in enumerate(prior.probs) if p > 0 and not isclose(p, 0)]
    if not keep:
        raise EmptySupport("prior has no positive entry")
    dropped = tuple(prior.labels[i] for i in range(len(prior)) if i not in keep)
    mode = prior.mode
    probs = prior.probs[keep]
    if dropped:
        probs = probs / probs.sum()
    labels = [prior.labels[i] for i in keep]
    trimmed_prior = Prior(probs, labels, mode)
    trimmed_channel = Channel(matrix[keep], labels, channel.labels_y, mode)
    p_y = trimmed_prior.probs @ trimmed_channel.matrix
    if mode == FLOAT:
        p_y = np.where(np.isclose(p_y, 0, rtol=0, atol=FLOAT_ATOL), 0.0, p_y)
    p_y.setflags(write=False)
    support = tuple(int(j) for j in range(p_y.size) if p_y[j] > 0)
    return Joint(trimmed_prior, trimmed_channel, p_y, support, dropped)


def make_joint(prior, channel, labels_x=None, labels_y=None, mode=None) -> Joint:
    """Convenience wrapper: build and validate from plain nested lists."""
    if mode is None:
        mode = _infer_mode(list(np.asarray(prior, dtype=object).ravel())
                           + list(np.asarray(channel, dtype=object).ravel()))
    p = Prior(prior, labels_x, mode)
    c = Channel(channel, p.labels, labels_y, mode)
    return validate_model(p, c)


def convert_mode(joint: Joint, mode: str) -> Joint:
    """Return the same model in another scalar mode."""
    if mode == joint.mode:
        return joint
    p = Prior(as_array(joint.prior.probs, mode), joint.labels_x, mode)
    c = Channel(as_array(joint.channel.matrix, mode), joint.labels_x, joint.labels_y, mode)
    return validate_model(p, c)


def posterior(joint: Joint, y) -> np.ndarray:
    """``P_{X|Y=y}`` over the supported secrets."""
    j = joint.supported_y(y)
    return joint.prior.probs * joint.channel.matrix[:, j] / joint.p_y[j]


def info_density(joint: Joint, x, y):
    """``exp(i(x;y)) = P_{Y|X=x}(y) / P_Y(y)``."""
    i = joint.x_index(x)
    j = joint.supported_y(y)
    return joint.channel.matrix[i, j] / joint.p_y[j]


def density_matrix(joint: Joint) -> np.ndarray:
    """Information-density ratios for all ``x`` and supported ``y`` columns."""
    cols = list(joint.support_y)
    return joint.channel.matrix[:, cols] / joint.p_y[cols]


@dataclass(frozen=True)
class Event:
    """A set of outputs plus an optional fractional share of one more output.

    ``split = (j, zeta)`` adds the fraction ``zeta`` of output ``j``; this is
    how an event is expressed after splitting ``j`` into two similar outputs.
    """

    members: frozenset
    split: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(int(m) for m in self.members))
        if self.split is not None:
            j, zeta = self.split
            if j in self.members:
                raise InvalidZeta("split output already belongs to the event")
            if not (zeta > 0 and leq(zeta, 1)):
                raise InvalidZeta(f"split weight {format_scalar(zeta)} outside (0, 1]")

    def weights(self, n_y: int, mode: str) -> np.ndarray:
        """Indicator vector with the split weight filled in."""
        w = np.array([zero(mode)] * n_y, dtype=object if mode == RATIONAL else float)
        for m in self.members:
            w[m] = one(mode)
        if self.split is not None:
            j, zeta = self.split
            w[j] = parse_scalar(zeta, mode)
        return w

    def describe(self, labels_y: Sequence[str]) -> str:
        parts = [labels_y[m] for m in sorted(self.members)]
        if self.split is not None:
            j, zeta = self.split
            label = labels_y[j]
            if "+" in label:
                label = f"({label})"
            parts.append(f"{format_scalar(zeta)}*{label}")
        return "{" + ", ".join(parts) + "}"
