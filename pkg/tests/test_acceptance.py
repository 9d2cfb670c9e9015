"""Acceptance checks, one test per criterion.

Each test prints a PASS/FAIL line and records it in ``RESULTS``; the
conftest hook repeats the lines in the pytest summary.  Run this file
directly (``python -m tests.test_acceptance``) for the lines alone.
Rational results are compared exactly, float results with a relative
tolerance of 1e-9.
"""

import math
import time
from fractions import Fraction as F

from pmlaudit.adversary import (
    GainFunction,
    RandomizedFunction,
    function_from_gain,
    g_leakage,
    gain_from_function,
    u_leakage,
)
from pmlaudit.channel_ops import (
    compose_adaptive,
    compose_eml_bounds,
    compose_pml_bounds,
    postprocess,
    reduce,
    shattering_channel,
    split_outcome,
    stage_joint,
)
from pmlaudit.comparisons import (
    approx_ldp_holds,
    approx_max_information,
    expected_log_leakage,
    implied_pml_bound,
    ldi_epsilon,
    ldp_epsilon,
    lip_epsilon,
    max_information,
    mutual_information,
    total_variation_privacy,
    tv_bounds,
)
from pmlaudit.core import FLOAT, UNBOUNDED, Channel, ZeroBaselineGain, make_joint
from pmlaudit.fixtures import ALL_JOINTS, fix_c, fix_c_postprocessing, fix_d, fix_f, fix_g
from pmlaudit.guarantees import (
    check_delta_pml,
    eml_kappa,
    min_eps_for_delta_pml,
)
from pmlaudit.leakage import (
    conditional_maximizers,
    conditional_pml,
    leakage_distribution,
    pml,
    pml_maximizers,
)
from pmlaudit.oracles import (
    OracleBudget,
    SplitMix64,
    brute_force_approx_maxinfo,
    brute_force_eml,
    grid_screen_eml,
    random_channel,
    random_model,
    random_prior,
    random_row,
)

RTOL = 1e-9
DELTAS = (F(1, 10), F(1, 6), F(1, 3), F(1, 2), F(3, 5), F(9, 10))
RESULTS: dict[int, tuple[bool, str, float]] = {}

TITLES = {
    1: "fixture reproduction",
    2: "EML algorithm",
    3: "oracle equivalence",
    4: "class invariance",
    5: "adversary equivalences",
    6: "leakage properties",
    7: "composition calculators",
    8: "cross-measure bounds",
    9: "approximate-LDP divergence",
}


def summary_lines():
    lines = []
    for n in sorted(RESULTS):
        ok, detail, secs = RESULTS[n]
        status = "PASS" if ok else "FAIL"
        lines.append(f"criterion {n} ({TITLES[n]}): {status} [{secs:.2f}s] {detail}")
    return lines


class Checker:
    """Collects failed expectations so a criterion reports all of them at once."""

    def __init__(self, number):
        self.number = number
        self.failures = []
        self.count = 0
        self.started = time.perf_counter()

    def expect(self, condition, message):
        self.count += 1
        if not condition:
            self.failures.append(message)

    def finish(self):
        secs = time.perf_counter() - self.started
        ok = not self.failures
        detail = f"{self.count} checks" if ok else "; ".join(self.failures[:3])
        RESULTS[self.number] = (ok, detail, secs)
        print(summary_lines()[sorted(RESULTS).index(self.number)])
        assert ok, "\n".join(self.failures)


def close(a, b):
    return math.isclose(float(a), float(b), rel_tol=RTOL)


def test_criterion_1_fixture_reproduction():
    c = Checker(1)
    joint = fix_c()
    pairs = sorted((e.probability, e.ratio) for e in leakage_distribution(joint))
    expected = sorted([(F(1, 12), F(4)), (F(1, 12), F(4)), (F(5, 12), F(6, 5)), (F(5, 12), F(6, 5))])
    c.expect(pairs == expected, f"FIX-C distribution {pairs}")
    c.expect(min_eps_for_delta_pml(joint, F(1, 6))[0] == F(6, 5), "minimal epsilon at 1/6")
    z = postprocess(joint, fix_c_postprocessing())
    c.expect(list(z.p_y) == [F(1, 2), F(1, 2)], f"P_Z = {list(z.p_y)}")
    c.expect(pml(z, 0) == pml(z, 1) == F(4, 3), "post-processed leakage 4/3")
    zf = postprocess(fix_c(FLOAT), fix_c_postprocessing(FLOAT))
    c.expect(close(pml(zf, 0), 4 / 3) and close(pml(zf, 1), 4 / 3), "float post-processing")
    c.finish()


def test_criterion_2_eml_algorithm():
    c = Checker(2)
    res = eml_kappa(fix_c(), F(1, 6))
    c.expect(res.h_values == (F(6, 5), F(6, 5), F(12, 5), F(12, 5)), f"h = {res.h_values}")
    c.expect(res.ratio == F(12, 5), f"kappa(1/6) = {res.ratio}")
    c.expect(eml_kappa(fix_d(), F(3, 5)).ratio == F(34, 30), "FIX-D kappa(3/5)")
    c.expect(close(eml_kappa(fix_d(FLOAT), 0.6).ratio, 34 / 30), "FIX-D float kappa(0.6)")
    post = eml_kappa(postprocess(fix_c(), fix_c_postprocessing()), F(1, 6)).ratio
    c.expect(post == F(4, 3) and post <= res.ratio, f"post-processed kappa {post}")
    c.finish()


def _fixture_budget(joint):
    return OracleBudget(max_outputs=max(6, len(joint.support_y)))


def test_criterion_3_oracle_equivalence():
    c = Checker(3)
    for name, make in ALL_JOINTS.items():
        joint = make()
        budget = _fixture_budget(joint)
        for d in DELTAS + (1,):
            kappa = eml_kappa(joint, d).ratio
            c.expect(brute_force_eml(joint, d, budget) == kappa, f"{name} at {d}")
            c.expect(grid_screen_eml(joint, d, budget=budget) <= kappa, f"{name} grid at {d}")
    for seed in range(200):
        joint = random_model(seed, (4, 5))
        for d in (DELTAS[seed % 6], DELTAS[(seed + 3) % 6]):
            kappa = eml_kappa(joint, d).ratio
            c.expect(brute_force_eml(joint, d) == kappa, f"seed {seed} at {d}")
            c.expect(grid_screen_eml(joint, d) <= kappa, f"seed {seed} grid at {d}")
    c.finish()


def _random_split(joint, rng):
    for _ in range(1 + rng.below(3)):
        y = joint.support_y[rng.below(len(joint.support_y))]
        joint = split_outcome(joint, y, F(1 + rng.below(7), 8))
    return joint


def test_criterion_4_class_invariance():
    c = Checker(4)
    for name, make in ALL_JOINTS.items():
        joint = make()
        reduced = reduce(joint).joint
        base = {d: eml_kappa(reduced, d).ratio for d in DELTAS}
        rng = SplitMix64(len(name) * 1000 + ord(name[-1]))
        for k in range(20):
            variant = _random_split(joint, rng)
            for d in DELTAS:
                c.expect(eml_kappa(variant, d).ratio == base[d], f"{name} variant {k} at {d}")
    c.finish()


def test_criterion_5_adversary_equivalences():
    c = Checker(5)
    rng = SplitMix64(5)
    for t in range(100):
        n_x, n_y = 2 + rng.below(3), 2 + rng.below(3)
        joint = random_model(1000 + t, (n_x, n_y))
        u = RandomizedFunction(random_channel(rng, n_x, 1 + rng.below(4)))
        n_g = 1 + rng.below(4)
        g = GainFunction([[F(rng.below(65), 64) for _ in range(n_g)] for _ in range(n_x)])
        g_of_u = gain_from_function(u)
        shatter = RandomizedFunction(shattering_channel(joint.prior))
        for y in joint.support_y:
            bound = pml(joint, y)
            lu, lg = u_leakage(joint, u, y), g_leakage(joint, g, y)
            c.expect(lu <= bound, f"U leakage above pml, model {t}")
            c.expect(lg <= bound, f"g leakage above pml, model {t}")
            c.expect(g_leakage(joint, g_of_u, y) == lu, f"U -> g round trip, model {t}")
            try:
                u_g = function_from_gain(joint, g, y)
                c.expect(u_leakage(joint, u_g, y) == lg, f"g -> U round trip, model {t}")
            except ZeroBaselineGain:
                # every guess is worthless after y: the g-leakage is 0, no U matches it
                c.expect(lg == 0, f"zero-gain branch, model {t}")
            c.expect(u_leakage(joint, shatter, y) == bound, f"shattering, model {t}")
    c.finish()


def _kernel(rng, n_in, n_out, positive=False):
    return Channel([random_row(rng, n_out, positive) for _ in range(n_in)])


def test_criterion_6_properties():
    c = Checker(6)
    rng = SplitMix64(6)
    for t in range(200):
        n_x, n_y, n_z = 2 + rng.below(2), 2 + rng.below(2), 2 + rng.below(2)
        joint = random_model(2000 + t, (n_x, n_y))
        k = _kernel(rng, n_y, n_z)
        z = postprocess(joint, k)
        worst = max(pml(joint, y) for y in joint.support_y)
        support = list(joint.support_y)
        inner = make_joint([joint.p_y[j] for j in support], [k.matrix[j] for j in support])
        for zi in z.support_y:
            c.expect(pml(z, zi) <= worst, f"post-processing, model {t}")
            c.expect(pml(z, zi) <= pml(inner, zi), f"pre-processing, model {t}")

        # Z - X - Y: side information with a fully supported P_{Z|X}
        prior = joint.prior
        cz = _kernel(rng, n_x, n_z, positive=True)
        pz = make_joint(prior.probs, cz.matrix)
        labels_xz = [f"{x},{zl}" for x in prior.labels for zl in cz.labels_y]
        cy = Channel([joint.channel.matrix[x] for x in range(n_x) for _ in range(n_z)], labels_xz)
        for y in joint.support_y:
            for zi in range(n_z):
                post = prior.probs * cz.matrix[:, zi] / pz.p_y[zi]
                info = (post @ joint.channel.matrix[:, y]) / joint.p_y[y]
                c.expect(conditional_pml(prior, cz, cy, y, zi) * info == pml(joint, y),
                         f"side information, model {t}")

        # composition: Z first, then Y from a z-dependent channel
        cz2 = _kernel(rng, n_x, n_z)
        stages = {zl: _kernel(rng, n_x, n_y) for zl in cz2.labels_y}
        cyz = Channel([stages[zl].matrix[x] for x in range(n_x) for zl in cz2.labels_y], labels_xz)
        first = make_joint(prior.probs, cz2.matrix)
        both = compose_adaptive(prior, cz2, stages)
        for zi in first.support_y:
            for y in range(n_y):
                col = zi * n_y + y
                if col not in both.support_y:
                    continue
                whole = pml(both, col)
                split = pml(first, zi) * conditional_pml(prior, cz2, cyz, y, zi)
                common = set(pml_maximizers(first, zi)) & set(conditional_maximizers(prior, cz2, cyz, y, zi))
                c.expect(whole <= split, f"chain inequality, model {t}")
                c.expect((whole == split) == bool(common), f"chain equality condition, model {t}")
    c.finish()


def _stage_tail_level(prior, first, stages, delta2):
    """Smallest r with P_YZ[stage leakage of z after y > r] <= delta2."""
    base = make_joint(prior.probs, first.matrix)
    cells = []
    for y in base.support_y:
        sj = stage_joint(prior, first, stages, y)
        for z in sj.support_y:
            cells.append((base.p_y[y] * sj.p_y[z], pml(sj, z)))
    for r in sorted({1} | {v for _, v in cells}):
        if sum((p for p, v in cells if v > r), F(0)) <= delta2:
            return r
    raise AssertionError("unreachable")


def test_criterion_7_composition():
    c = Checker(7)
    rng = SplitMix64(7)
    choices = (F(1, 10), F(1, 5), F(1, 4), F(1, 3))
    for t in range(50):
        n_x, n_y, n_z = 2 + rng.below(2), 2 + rng.below(2), 2
        prior = random_prior(rng, n_x)
        first = random_channel(rng, n_x, n_y)
        stages = {yl: random_channel(rng, n_x, n_z) for yl in first.labels_y}
        base = make_joint(prior.probs, first.matrix)
        composed = compose_adaptive(prior, first, stages)
        stage = [stage_joint(prior, first, stages, y) for y in base.support_y]
        d1, d2 = choices[rng.below(4)], choices[rng.below(4)]

        # part 1: pure guarantees measured on each stage
        e1 = min_eps_for_delta_pml(base, 0)[0]
        e2 = max(min_eps_for_delta_pml(s, 0)[0] for s in stage)
        eps, delta = compose_pml_bounds(1, e1, 0, e2, 0)
        c.expect(check_delta_pml(composed, eps, delta).holds, f"part 1, instance {t}")

        # part 2: (eps, delta) on both stages
        e1 = min_eps_for_delta_pml(base, d1)[0]
        e2 = max(min_eps_for_delta_pml(s, d2)[0] for s in stage)
        eps, delta = compose_pml_bounds(2, e1, d1, e2, d2)
        c.expect(check_delta_pml(composed, eps, delta).holds, f"part 2, instance {t}")

        # part 3: the stage leakage exceeds eps2 with P_YZ-probability at most delta2
        e2 = _stage_tail_level(prior, first, stages, d2)
        eps, delta = compose_pml_bounds(3, e1, d1, e2, d2)
        c.expect(check_delta_pml(composed, eps, delta).holds, f"part 3, instance {t}")

        # part 4: EML first stage, pure PML second stage
        k1 = eml_kappa(base, d1).ratio
        p2 = max(min_eps_for_delta_pml(s, 0)[0] for s in stage)
        eps, delta = compose_eml_bounds(4, k1, d1, p2, 0)
        c.expect(eml_kappa(composed, delta).ratio <= eps, f"part 4, instance {t}")

        # part 5: EML on both stages
        k2 = max(eml_kappa(s, d2).ratio for s in stage)
        eps, delta = compose_eml_bounds(5, k1, d1, k2, d2, prior=prior)
        c.expect(eml_kappa(composed, delta).ratio <= eps, f"part 5, instance {t}")
    c.finish()


def test_criterion_8_cross_measure():
    c = Checker(8)
    for t in range(200):
        joint = random_model(3000 + t, (3, 4), positive=bool(t % 2))
        worst = max(pml(joint, y) for y in joint.support_y)
        mi, el = mutual_information(joint), expected_log_leakage(joint)
        c.expect(mi <= el or close(mi, el), f"MI above E[leakage], model {t}")
        c.expect(max_information(joint) == worst, f"max-information, model {t}")
        delta = DELTAS[t % 6]
        eps, _ = min_eps_for_delta_pml(joint, delta)
        approx = approx_max_information(joint, delta)
        c.expect(approx == brute_force_approx_maxinfo(joint, delta), f"max-info search, model {t}")
        c.expect(approx <= eps, f"approximate max-information, model {t}")
        tv = total_variation_privacy(joint)
        b = tv_bounds(joint, eps, delta)
        c.expect(tv <= b.maximal_leakage and tv <= b.regime and tv <= b.expected_pml,
                 f"TV bounds, model {t}")
        for kind, value in (("LDP", ldp_epsilon(joint)), ("LIP", lip_epsilon(joint)),
                            ("LDI", ldi_epsilon(joint))):
            if value is not UNBOUNDED:
                c.expect(worst <= implied_pml_bound(kind, value, joint.prior), f"{kind}, model {t}")
    d = fix_d()
    tight = implied_pml_bound("LDP", ldp_epsilon(d), d.prior)
    c.expect(tight == F(6, 5) == max(pml(d, y) for y in range(2)), "FIX-D LDP tightness")
    c.finish()


def test_criterion_9_approx_ldp_divergence():
    c = Checker(9)
    f = fix_f()
    c.expect(approx_ldp_holds(f.channel, 1, F(1, 4)), "FIX-F approximate LDP")
    for k in range(100):
        c.expect(min_eps_for_delta_pml(f, F(k, 100))[0] == 2, f"FIX-F at {k}/100")
    g = fix_g()
    for e in (1, 10, 100, 10**3, 10**4, 10**5, 10**6):
        for k in range(100):
            c.expect(not approx_ldp_holds(g.channel, e, F(k, 100)), f"FIX-G LDP at {e}, {k}/100")
    c.expect(check_delta_pml(g, F(10, 9), F(1, 10)).holds, "FIX-G (10/9, 1/10)-PML")
    c.expect(min_eps_for_delta_pml(g, F(1, 10))[0] == F(10, 9), "FIX-G minimal epsilon")
    c.finish()


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                pass
