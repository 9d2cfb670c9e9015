"""Command-line interface: ``pmlaudit <command> -i model.json [options]``.

Exit status is 0 on success, 1 for unreadable or invalid input and 2 when a
valid model hits a computational limit (oracle budget, zero baseline gain).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
import time
from fractions import Fraction

from . import comparisons as cmp
from .channel_ops import compose_adaptive, reduce
from .core import (
    RATIONAL,
    BudgetExceeded,
    EmptyEvent,
    InfiniteInput,
    Joint,
    PMLError,
    TooLargeForBruteForce,
    ZeroBaselineGain,
    ZeroProbabilityEvent,
    format_scalar,
    parse_scalar,
    to_log,
)
from .guarantees import (
    check_delta_pml,
    check_eps_delta_eml,
    check_eps_pml,
    eml_kappa,
    min_eps_for_delta_pml,
)
from .io import load_model, load_stages, model_to_dict, scalar_to_json
from .leakage import eps_max, leakage_distribution, maximal_leakage
from .oracles import random_model

SCHEMA_VERSION = 1

COMPUTATION_ERRORS = (
    BudgetExceeded,
    TooLargeForBruteForce,
    ZeroBaselineGain,
    InfiniteInput,
    ZeroProbabilityEvent,
    EmptyEvent,
)

MEASURES = ("ldp", "lip", "ldi", "mi", "tv", "maxinfo", "fdiv:kl", "fdiv:tv", "fdiv:chi2")


class UsageError(PMLError):
    pass


def parse_epsilon(text: str, mode: str):
    """``"a/b"`` is a ratio; ``"log:x"`` is epsilon in nats, converted to ``exp(x)``."""
    text = text.strip()
    if text.startswith("log:"):
        try:
            nats = float(text[4:])
        except ValueError:
            raise UsageError(f"cannot parse epsilon {text!r}") from None
        if nats < 0:
            raise UsageError("epsilon must be nonnegative")
        if nats == 0:
            return parse_scalar(1, mode)
        return parse_scalar(math.exp(nats), mode)
    return parse_scalar(text, mode)


def _ratio(v) -> dict:
    return {"ratio": scalar_to_json(v), "nats": to_log(v) if v is not None else None}


def _event_json(event, labels) -> dict:
    out = {"members": [labels[m] for m in sorted(event.members)]}
    if event.split is not None:
        j, zeta = event.split
        out["split"] = {"output": labels[j], "zeta": scalar_to_json(zeta)}
    return out


def _report_json(report, joint: Joint, labels=None) -> dict:
    labels = labels or joint.labels_y
    witness = report.witness
    if isinstance(witness, int):
        witness = {"output": labels[witness]}
    else:
        witness = _event_json(witness, labels)
    out = {
        "kind": report.kind.value,
        "epsilon": _ratio(report.epsilon_ratio),
        "delta": scalar_to_json(report.delta),
        "holds": report.holds,
        "witness": witness,
        "witness_leakage": _ratio(report.witness_ratio),
    }
    if report.note:
        out["note"] = report.note
    return out


def _distribution_json(joint: Joint) -> list:
    return [
        {"output": e.label, "probability": scalar_to_json(e.probability), **_ratio(e.ratio)}
        for e in leakage_distribution(joint)
    ]


def _digest(joint: Joint) -> str:
    text = json.dumps(model_to_dict(joint), sort_keys=True)
    return hashlib.sha256(text.encode()).hexdigest()[:16]


# --------------------------------------------------------------- commands


def cmd_pml(joint: Joint, args) -> dict:
    out_of_support = [joint.labels_y[j] for j in joint.out_of_support]
    return {
        "distribution": _distribution_json(joint),
        "maximal_leakage": _ratio(maximal_leakage(joint.channel)),
        "eps_max": _ratio(eps_max(joint.prior)),
        "out_of_support": out_of_support,
    }


def _delta(args, joint: Joint, required=False):
    if args.delta is None:
        if required:
            raise UsageError("this command needs --delta")
        return None
    return parse_scalar(args.delta, joint.mode)


def cmd_eml(joint: Joint, args) -> dict:
    d = _delta(args, joint, required=True)
    res = eml_kappa(joint, d)
    rlabels = res.reduced.reduced.labels_y
    out = {
        "delta": scalar_to_json(d),
        "kappa": _ratio(res.ratio),
        "worst_x": joint.labels_x[res.x],
        "maximizers": [joint.labels_x[i] for i in res.maximizers],
        "h": {joint.labels_x[i]: scalar_to_json(v) for i, v in enumerate(res.h_values)},
        "worst_event": _event_json(res.event, joint.labels_y),
        "worst_event_reduced": _event_json(res.reduced_event, rlabels),
    }
    if args.epsilon is not None:
        eps = parse_epsilon(args.epsilon, joint.mode)
        out["check"] = _report_json(check_eps_delta_eml(joint, eps, d), joint)
    return out


def _guarantees(joint: Joint, eps, d) -> list:
    reports = []
    if eps is None:
        r, excluded = min_eps_for_delta_pml(joint, d)
        reports.append({
            "kind": "DELTA_PML" if d else "PML",
            "delta": scalar_to_json(d),
            "smallest_epsilon": _ratio(r),
            "excluded": [joint.labels_y[j] for j in excluded],
        })
        if d:
            res = eml_kappa(joint, d)
            reports.append({
                "kind": "EML",
                "delta": scalar_to_json(d),
                "smallest_epsilon": _ratio(res.ratio),
                "worst_event": _event_json(res.event, joint.labels_y),
            })
        return reports
    if d:
        reports.append(_report_json(check_delta_pml(joint, eps, d), joint))
    else:
        reports.append(_report_json(check_eps_pml(joint, eps), joint))
    reports.append(_report_json(check_eps_delta_eml(joint, eps, d), joint))
    return reports


def cmd_guarantee(joint: Joint, args) -> dict:
    d = _delta(args, joint) or parse_scalar(0, joint.mode)
    eps = parse_epsilon(args.epsilon, joint.mode) if args.epsilon is not None else None
    return {"guarantees": _guarantees(joint, eps, d)}


def cmd_reduce(joint: Joint, args) -> dict:
    rmap = reduce(joint)
    reduced = rmap.joint
    return {
        "merge_map": {
            rmap.reduced.labels_y[k]: [joint.labels_y[j] for j in members]
            for k, members in enumerate(rmap.merge_map)
        },
        "dropped": [joint.labels_y[j] for j in rmap.dropped],
        "reduced_model": model_to_dict(reduced),
    }


def cmd_compose(joint: Joint, args) -> dict:
    if args.second is None:
        raise UsageError("compose needs --second stages.json")
    stages = load_stages(args.second, joint.mode)
    composed = compose_adaptive(joint.prior, joint.channel, stages)
    out = {
        "composed_model": model_to_dict(composed),
        "distribution": _distribution_json(composed),
        "zero_mass_pairs": [composed.labels_y[j] for j in composed.out_of_support],
    }
    d = _delta(args, joint)
    if d is not None or args.epsilon is not None:
        eps = parse_epsilon(args.epsilon, joint.mode) if args.epsilon is not None else None
        out["guarantees"] = _guarantees(composed, eps, d or parse_scalar(0, joint.mode))
    return out


def _measure(joint: Joint, name: str, d) -> dict:
    name = name.strip().lower()
    if name == "ldp":
        v = cmp.ldp_epsilon(joint.channel)
        bound = None if v is cmp.UNBOUNDED else cmp.implied_pml_bound("LDP", v, joint.prior)
        return {"measure": "LDP", "epsilon": _ratio(v), "implied_pml_bound": _ratio(bound) if bound else None}
    if name in ("lip", "ldi"):
        v = cmp.lip_epsilon(joint) if name == "lip" else cmp.ldi_epsilon(joint)
        bound = None if v is cmp.UNBOUNDED else cmp.implied_pml_bound(name, v, joint.prior)
        return {"measure": name.upper(), "epsilon": _ratio(v), "implied_pml_bound": _ratio(bound) if bound else None}
    if name == "mi":
        return {"measure": "MI", "nats": cmp.mutual_information(joint),
                "expected_pml_nats": cmp.expected_log_leakage(joint)}
    if name == "tv":
        b = cmp.tv_bounds(joint, delta=d)
        return {
            "measure": "TV",
            "value": scalar_to_json(cmp.total_variation_privacy(joint)),
            "bounds": {
                "maximal_leakage": scalar_to_json(b.maximal_leakage),
                "regime": scalar_to_json(b.regime),
                "regime_index": b.regime_index,
                "regime_epsilon": _ratio(b.epsilon_ratio),
                "regime_delta": scalar_to_json(b.delta),
                "expected_pml": scalar_to_json(b.expected_pml),
                "cardinality": scalar_to_json(b.cardinality),
            },
        }
    if name == "maxinfo":
        out = {"measure": "MAX_INFO", "max_information": _ratio(cmp.max_information(joint))}
        if d:
            out["delta"] = scalar_to_json(d)
            try:
                out["approx_max_information"] = _ratio(cmp.approx_max_information(joint, d))
            except TooLargeForBruteForce as exc:
                out["approx_max_information_bound"] = _ratio(exc.fallback)
        return out
    if name.startswith("fdiv:"):
        f = name[5:]
        return {"measure": "F_INFO", "f": f, "value": cmp.f_information(joint, f),
                "pml_bound": cmp.f_info_pml_bound(joint, f)}
    raise UsageError(f"unknown measure {name!r}; choose from {', '.join(MEASURES)}")


def cmd_compare(joint: Joint, args) -> dict:
    names = args.against.split(",") if args.against else list(MEASURES)
    d = _delta(args, joint) or parse_scalar(0, joint.mode)
    return {"measures": [_measure(joint, n, d) for n in names]}


DEFAULT_DELTAS = ("0", "1/10", "1/6", "1/3", "1/2")


def cmd_audit(joint: Joint, args) -> dict:
    started = time.perf_counter()
    deltas = [parse_scalar(args.delta, joint.mode)] if args.delta else [
        parse_scalar(t, joint.mode) for t in DEFAULT_DELTAS
    ]
    eps = parse_epsilon(args.epsilon, joint.mode) if args.epsilon is not None else None
    guarantees = [g for d in deltas for g in _guarantees(joint, eps, d)]
    names = args.against.split(",") if args.against else list(MEASURES)
    measures = [_measure(joint, n, deltas[-1]) for n in names]
    return {
        "model_digest": _digest(joint),
        "model": model_to_dict(joint),
        "leakage_distribution": _distribution_json(joint),
        "maximal_leakage": _ratio(maximal_leakage(joint.channel)),
        "guarantees": guarantees,
        "measures": measures,
        "timing_ms": round((time.perf_counter() - started) * 1000, 3),
    }


COMMANDS = {
    "pml": (cmd_pml, "leakage of every output"),
    "eml": (cmd_eml, "kappa(delta) and the least private event"),
    "guarantee": (cmd_guarantee, "check or derive PML / EML guarantees"),
    "reduce": (cmd_reduce, "merge similar outputs, drop impossible ones"),
    "compose": (cmd_compose, "adaptive composition with a second stage"),
    "compare": (cmd_compare, "LDP, LIP, LDI, MI, TV, max-information, f-information"),
    "audit": (cmd_audit, "full report"),
}


# --------------------------------------------------------------- output


def _cell(v) -> str:
    if isinstance(v, dict):
        if "ratio" in v:
            nats = v["nats"]
            return f"{v['ratio']} (log {nats:.6g})" if nats is not None else "-"
        return ", ".join(f"{k}={_cell(x)}" for k, x in v.items())
    if isinstance(v, list):
        return "[" + ", ".join(_cell(x) for x in v) + "]"
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def _table(rows: list[dict]) -> str:
    keys = list(dict.fromkeys(k for r in rows for k in r))
    cells = [[_cell(r.get(k, "")) for k in keys] for r in rows]
    widths = [max(len(k), *(len(c[i]) for c in cells)) for i, k in enumerate(keys)]
    lines = ["  ".join(k.ljust(w) for k, w in zip(keys, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(c.ljust(w) for c, w in zip(row, widths)) for row in cells]
    return "\n".join(lines)


def render_table(result: dict) -> str:
    parts = []
    for key, value in result.items():
        if key in ("schema_version", "command"):
            continue
        if key == "measures":
            # measures have different fields, so each gets its own block
            for m in value:
                lines = [f"{m['measure']}:"]
                lines += [f"  {k}: {_cell(v)}" for k, v in m.items() if k != "measure"]
                parts.append("\n".join(lines))
        elif isinstance(value, list) and value and all(isinstance(v, dict) for v in value):
            parts.append(f"{key}:\n{_table(value)}")
        elif isinstance(value, dict) and key in ("model", "reduced_model", "composed_model"):
            parts.append(f"{key}: labels_y = {', '.join(value['labels_y'])}")
        else:
            parts.append(f"{key}: {_cell(value)}")
    return "\n".join(parts)


# ------------------------------------------------------------------ main


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pmlaudit", description="Audit finite privacy mechanisms with pointwise maximal leakage."
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("-i", "--input", help="model JSON file")
        src.add_argument("--random", metavar="NXxNY", help="generate a random model of this shape")
        p.add_argument("--seed", type=int, default=0, help="seed for --random (default 0)")
        p.add_argument("--mode", choices=["rational", "float"], help="override the model's scalar mode")
        p.add_argument("--delta", help="probability budget, e.g. 1/6 or 0.6")
        p.add_argument("--epsilon", help='epsilon as a ratio ("6/5") or in nats ("log:0.18")')
        p.add_argument("--second", help="second-stage JSON for compose")
        p.add_argument("--against", help=f"comma-separated measures: {','.join(MEASURES)}")
        p.add_argument("--format", choices=["table", "json"], default="table")
    return parser


def _load(args) -> Joint:
    if args.input:
        return load_model(args.input, args.mode)
    try:
        n_x, n_y = (int(t) for t in args.random.lower().split("x"))
    except ValueError:
        raise UsageError(f"--random expects a shape like 3x4, got {args.random!r}") from None
    return random_model(args.seed, (n_x, n_y), args.mode or RATIONAL)


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        joint = _load(args)
        handler = COMMANDS[args.command][0]
        result = {"schema_version": SCHEMA_VERSION, "command": args.command, **handler(joint, args)}
    except COMPUTATION_ERRORS as exc:
        print(f"pmlaudit: {type(exc).__name__}: {exc}", file=stderr)
        return 2
    except (PMLError, OSError) as exc:
        print(f"pmlaudit: {type(exc).__name__}: {exc}", file=stderr)
        return 1
    if args.format == "json":
        print(json.dumps(result, indent=2), file=stdout)
    else:
        print(render_table(result), file=stdout)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
