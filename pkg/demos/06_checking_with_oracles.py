"""
Checking the algorithm against brute force
==========================================

The EML value comes from a sort-and-cut rule.  Brute force enumerates
every vertex of the feasible set instead; on random models the two agree
exactly.
"""

from fractions import Fraction as F

from pmlaudit import eml_kappa
from pmlaudit.oracles import brute_force_eml, grid_screen_eml, random_model

mismatches = 0
for seed in range(50):
    joint = random_model(seed, (4, 5))
    for d in (F(1, 10), F(1, 3), F(3, 5)):
        fast = eml_kappa(joint, d).ratio
        slow = brute_force_eml(joint, d)
        mismatches += fast != slow
        # a coarse grid over event weights only ever finds less
        assert grid_screen_eml(joint, d) <= fast
print("mismatches:", mismatches)

joint = random_model(0, (4, 5))
print(joint.channel.matrix)
print("kappa(1/3) =", eml_kappa(joint, F(1, 3)).ratio)
