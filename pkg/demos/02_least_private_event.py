"""
The least private event of a given probability
===============================================

Single outputs can be made to look safe by splitting them into many
similar copies.  Event maximal leakage asks instead: among all events of
probability at least delta, which one leaks most?  ``eml_kappa`` answers
with the value and the event.
"""

from fractions import Fraction as F

from pmlaudit import eml_kappa, event_leakage, kappa_curve, reduce, split_outcome
from pmlaudit.fixtures import fix_c, fix_d

joint = fix_c()

# %%
# Similar outputs (same posterior) are merged before solving.
rmap = reduce(joint)
print("reduced outputs:", rmap.reduced.labels_y)

# %%
res = eml_kappa(joint, F(1, 6))
print("kappa(1/6) =", res.ratio)
print("per-secret values:", [str(h) for h in res.h_values])
print("worst event:", res.event.describe(joint.labels_y))
print("same event on the reduced channel:", res.reduced_event.describe(rmap.reduced.labels_y))
print("its leakage:", event_leakage(joint, res.event))

# %%
# Splitting outputs does not change the answer.
split = split_outcome(split_outcome(joint, 3, F(1, 4)), 0, F(1, 2))
print("after splitting:", split.labels_y, eml_kappa(split, F(1, 6)).ratio)

# %%
# The whole curve is piecewise of the form a + b/delta; breakpoints suffice.
for d, k in kappa_curve(joint).breakpoints:
    print(f"delta = {d}: kappa = {k}")

# binary symmetric channel with crossover 2/5
print("FIX-D kappa(3/5) =", eml_kappa(fix_d(), F(3, 5)).ratio)
