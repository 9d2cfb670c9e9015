"""Brute-force reference computations and a reproducible model generator.

The oracles here deliberately avoid the shortcuts of the main code: no
sorting by information density and no channel reduction.  They are only
meant for small alphabets.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import (
    FLOAT,
    RATIONAL,
    BudgetExceeded,
    Channel,
    InvalidDelta,
    Joint,
    Prior,
    isclose,
    leq,
    parse_scalar,
    validate_model,
)


@dataclass(frozen=True)
class OracleBudget:
    max_outputs: int = 6
    max_event_bits: int = 20
    grid_steps: int = 2


DEFAULT_BUDGET = OracleBudget()


def _check_delta(joint: Joint, delta):
    d = parse_scalar(delta, joint.mode)
    if not (d > 0) or (d > 1 and not isclose(d, 1)):
        raise InvalidDelta("brute-force EML needs delta in (0, 1]")
    return d


def _subset_sums(values, n):
    """``out[mask] = sum of values[j] for bits j of mask``."""
    out = [values[0] * 0] * (1 << n)
    for mask in range(1, 1 << n):
        low = (mask & -mask).bit_length() - 1
        out[mask] = out[mask & (mask - 1)] + values[low]
    return out


def brute_force_eml(joint: Joint, delta, budget: OracleBudget = DEFAULT_BUDGET):
    """``kappa(delta)`` by enumerating every vertex of the feasible polytope.

    The feasible set is ``{a in [0,1]^Y : sum_y a_y P_Y(y) >= delta}``.  Its
    vertices are 0/1 vectors with enough mass, plus vectors that are 0/1
    except for one coordinate set so that the mass is exactly ``delta``.
    """
    d = _check_delta(joint, delta)
    cols = list(joint.support_y)
    n = len(cols)
    if n > budget.max_outputs:
        raise BudgetExceeded(f"{n} outputs exceed the oracle budget of {budget.max_outputs}")
    p = [joint.p_y[j] for j in cols]
    rows = [[joint.channel.matrix[i, j] for j in cols] for i in range(joint.n_x)]
    mass = _subset_sums(p, n)
    nums = [_subset_sums(r, n) for r in rows]
    best = None
    for mask in range(1 << n):
        m = mass[mask]
        if mask and leq(d, m):
            value = max(num[mask] for num in nums) / m
            best = value if best is None or value > best else best
            continue
        for t in range(n):
            if mask >> t & 1:
                continue
            if not leq(d, m + p[t]):
                continue
            zeta = (d - m) / p[t]
            value = max((num[mask] + zeta * r[t]) for num, r in zip(nums, rows)) / d
            best = value if best is None or value > best else best
    return best


def grid_screen_eml(joint: Joint, delta, steps: int | None = None,
                    budget: OracleBudget = DEFAULT_BUDGET):
    """Best leakage over weights ``a_y`` restricted to ``{0, 1/q, ..., 1}``.

    Every grid point is feasible for the EML program, so the result is a
    lower bound on ``kappa(delta)``.
    """
    d = _check_delta(joint, delta)
    q = budget.grid_steps if steps is None else steps
    cols = list(joint.support_y)
    n = len(cols)
    if n > budget.max_outputs:
        raise BudgetExceeded(f"{n} outputs exceed the oracle budget of {budget.max_outputs}")
    grid = np.array(list(itertools.product(range(q + 1), repeat=n)), dtype=np.int64)
    p = [joint.p_y[j] for j in cols]
    m = joint.channel.matrix[:, cols]
    if joint.mode == RATIONAL:
        scale = math.lcm(*(v.denominator for v in p + [d]))
        pi = np.array([int(v * scale) for v in p], dtype=np.int64)
        feasible = grid @ pi >= int(d * scale) * q
    else:
        feasible = grid @ np.array(p, dtype=float) >= float(d) * q * (1 - 1e-12)
    grid = grid[feasible]
    pf = np.array([float(v) for v in p])
    mf = np.array([[float(v) for v in row] for row in m])
    values = (grid @ mf.T) / (grid @ pf)[:, None]
    k, i = np.unravel_index(np.argmax(values), values.shape)
    a = grid[k]
    if joint.mode == RATIONAL:
        return (sum(int(a[t]) * m[i, t] for t in range(n))
                / sum(int(a[t]) * p[t] for t in range(n)))
    return float(values[k, i])


def brute_force_approx_maxinfo(joint: Joint, delta, budget: OracleBudget = DEFAULT_BUDGET):
    """``exp I_inf^delta`` by looping over every event of ``supp(P_XY)``.

    Works on integers scaled by a common denominator, so rational results
    are exact.
    """
    cells_p, cells_q = [], []
    for i in range(joint.n_x):
        for j in joint.support_y:
            pxy = joint.prior.probs[i] * joint.channel.matrix[i, j]
            if pxy > 0:
                cells_p.append(pxy)
                cells_q.append(joint.prior.probs[i] * joint.p_y[j])
    n = len(cells_p)
    if n > budget.max_event_bits:
        raise BudgetExceeded(f"{n} cells exceed the oracle budget of {budget.max_event_bits}")
    d = parse_scalar(delta, joint.mode)
    if joint.mode == FLOAT:
        pm, qm = _subset_sums(cells_p, n), _subset_sums(cells_q, n)
        return max((pm[k] - d) / qm[k] for k in range(1, 1 << n) if leq(d, pm[k]))
    scale = math.lcm(*(v.denominator for v in cells_p + cells_q + [d]))
    pm = _subset_sums([int(v * scale) for v in cells_p], n)
    qm = _subset_sums([int(v * scale) for v in cells_q], n)
    di = int(d * scale)
    best_num, best_den = None, None
    for k in range(1, 1 << n):
        if pm[k] < di:
            continue
        num, den = pm[k] - di, qm[k]
        if best_num is None or num * best_den > best_num * den:
            best_num, best_den = num, den
    return Fraction(best_num, best_den)


# ------------------------------------------------------------- generator


class SplitMix64:
    """The splitmix64 generator; the same seed gives the same stream everywhere."""

    MASK = (1 << 64) - 1

    def __init__(self, seed: int):
        self.state = seed & self.MASK

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & self.MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & self.MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & self.MASK
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        return self.next() % n


DENOMINATOR = 64


def random_row(rng: SplitMix64, n: int, positive: bool = False) -> list[Fraction]:
    """Weights ``k / 64`` with ``k`` in ``0..64`` (``1..64`` if positive), normalized."""
    if positive:
        ks = [1 + rng.below(DENOMINATOR) for _ in range(n)]
    else:
        ks = [rng.below(DENOMINATOR + 1) for _ in range(n)]
    if sum(ks) == 0:
        ks[rng.below(n)] = 1
    total = sum(ks)
    return [Fraction(k, total) for k in ks]


def random_prior(rng: SplitMix64, n: int, mode: str = RATIONAL) -> Prior:
    return Prior(random_row(rng, n, positive=True), mode=mode)


def random_channel(rng: SplitMix64, n_x: int, n_y: int, mode: str = RATIONAL,
                   positive: bool = False, labels_y=None) -> Channel:
    rows = [random_row(rng, n_y, positive) for _ in range(n_x)]
    return Channel(rows, labels_y=labels_y, mode=mode)


def random_model(seed: int, shape: tuple[int, int], mode: str = RATIONAL,
                 positive: bool = False) -> Joint:
    """Deterministic random joint with a full-support prior.

    Prior weights are drawn first, then the channel row by row.  Every
    weight is an integer ``k`` from the splitmix64 stream reduced modulo 65
    (modulo 64 plus one for the prior and for ``positive`` channels), then
    each row is divided by its sum.
    """
    n_x, n_y = shape
    rng = SplitMix64(seed)
    prior = random_prior(rng, n_x, mode)
    channel = random_channel(rng, n_x, n_y, mode, positive)
    return validate_model(prior, channel)


__all__ = [
    "DEFAULT_BUDGET",
    "OracleBudget",
    "SplitMix64",
    "brute_force_approx_maxinfo",
    "brute_force_eml",
    "grid_screen_eml",
    "random_channel",
    "random_model",
    "random_prior",
    "random_row",
]
