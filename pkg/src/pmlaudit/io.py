"""JSON formats for models, second-stage channel families and gain functions.

Model::

    {"mode": "rational", "prior": ["1/4", ...], "channel": [["0", "1/2", ...], ...],
     "labels_x": [...], "labels_y": [...]}

Stages (adaptive second stage, one channel per first-stage output label)::

    {"labels_z": ["z1", "z2"], "stages": {"y1": [[...], ...], ...}}

Gain::

    {"gain": [[...], ...], "labels_xhat": [...]}

Rational values are written as ``"a/b"`` strings, floats as JSON numbers.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Mapping

from .adversary import GainFunction
from .core import (
    FLOAT,
    MODES,
    RATIONAL,
    UNBOUNDED,
    Channel,
    Joint,
    PMLError,
    Prior,
    ShapeMismatch,
    _infer_mode,
    validate_model,
)


def _read(source) -> Any:
    if isinstance(source, Mapping):
        return source
    if isinstance(source, (str, Path)):
        text = Path(source).read_text()
        try:
            return json.loads(text)
        except json.JSONDecodeError as exc:
            raise PMLError(f"{source}: invalid JSON ({exc})") from None
    return json.load(source)


def _mode(doc: Mapping, override: str | None, values) -> str:
    mode = override or doc.get("mode")
    if mode is None:
        mode = _infer_mode(values)
    if mode not in MODES:
        raise PMLError(f"unknown mode {mode!r}; expected one of {MODES}")
    return mode


def _flat(rows):
    return [v for row in rows for v in row]


def load_model(source, mode: str | None = None) -> Joint:
    """Read a model document (path, file object or dict) and validate it."""
    doc = _read(source)
    try:
        prior, channel = doc["prior"], doc["channel"]
    except KeyError as exc:
        raise PMLError(f"model is missing the {exc.args[0]!r} field") from None
    mode = _mode(doc, mode, list(prior) + _flat(channel))
    labels_x = doc.get("labels_x")
    p = Prior(prior, labels_x, mode)
    if any(len(row) != len(channel[0]) for row in channel):
        raise ShapeMismatch("channel rows have different lengths")
    c = Channel(channel, p.labels, doc.get("labels_y"), mode)
    return validate_model(p, c)


def load_stages(source, mode: str | None = None) -> dict[str, Channel]:
    """Read a family of second-stage channels keyed by first-stage output label."""
    doc = _read(source)
    stages = doc.get("stages")
    if not isinstance(stages, Mapping) or not stages:
        raise PMLError("stage document needs a non-empty 'stages' object")
    values = [v for rows in stages.values() for v in _flat(rows)]
    mode = _mode(doc, mode, values)
    labels_x = doc.get("labels_x")
    labels_z = doc.get("labels_z")
    return {
        str(lab): Channel(rows, labels_x, labels_z, mode)
        for lab, rows in stages.items()
    }


def load_gain(source, labels_x=None, mode: str | None = None) -> GainFunction:
    doc = _read(source)
    try:
        gain = doc["gain"]
    except KeyError:
        raise PMLError("gain document is missing the 'gain' field") from None
    mode = _mode(doc, mode, _flat(gain))
    return GainFunction(gain, doc.get("labels_x", labels_x), doc.get("labels_xhat"), mode)


def scalar_to_json(v):
    """Rationals become ``"a/b"`` strings, floats stay numbers, infinity is ``"inf"``."""
    if v is UNBOUNDED:
        return "inf"
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, int):
        return str(v)
    return float(v)


def model_to_dict(joint: Joint) -> dict:
    return {
        "mode": joint.mode,
        "prior": [scalar_to_json(v) for v in joint.prior.probs],
        "channel": [[scalar_to_json(v) for v in row] for row in joint.channel.matrix],
        "labels_x": list(joint.labels_x),
        "labels_y": list(joint.labels_y),
    }


def dump_model(joint: Joint, path) -> None:
    Path(path).write_text(json.dumps(model_to_dict(joint), indent=2) + "\n")


__all__ = [
    "dump_model",
    "load_gain",
    "load_model",
    "load_stages",
    "model_to_dict",
    "scalar_to_json",
]
