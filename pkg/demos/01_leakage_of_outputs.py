"""
How much does each output leak?
===============================

A 4x4 channel where two rare outputs pin down a secret and two common
outputs say little.  We look at the leakage of every output, the
smallest epsilon that covers all but a delta-fraction of outputs, and
what happens when outputs are merged afterwards.
"""

from fractions import Fraction as F

from pmlaudit import (
    leakage_distribution,
    maximal_leakage,
    min_eps_for_delta_pml,
    pml,
    postprocess,
)
from pmlaudit.fixtures import fix_c, fix_c_postprocessing

joint = fix_c()
print(joint.channel.matrix)

# %%
# Leakage of each output, worst first.  Ratios are exact fractions;
# ``nats`` is the same number on the log scale.
for e in leakage_distribution(joint):
    print(f"{e.label}: P = {e.probability}, ratio = {e.ratio}, {e.nats:.4f} nats")

# the average ratio is the maximal leakage of the channel
print("maximal leakage ratio:", maximal_leakage(joint.channel))

# %%
# y1 and y2 carry 1/6 of the mass.  Allow that much and epsilon drops to 6/5.
ratio, excluded = min_eps_for_delta_pml(joint, F(1, 6))
print("epsilon ratio:", ratio, "excluded:", [joint.labels_y[j] for j in excluded])

# %%
# Merge y1 with y3 and y2 with y4.  No merged output can leak more than
# the worst output it came from.
z = postprocess(joint, fix_c_postprocessing())
print("P_Z:", list(z.p_y))
print("leakage of z1, z2:", pml(z, 0), pml(z, 1))
