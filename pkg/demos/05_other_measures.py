"""
Other privacy measures next to PML
==================================

Local differential privacy, mutual information, total variation and
max-information each see the same channel differently.  Each one here is
paired with the PML quantity that bounds it or is bounded by it.
"""

from fractions import Fraction as F

from pmlaudit import comparisons as cmp
from pmlaudit import min_eps_for_delta_pml, pml
from pmlaudit.fixtures import fix_d, fix_f, fix_g

joint = fix_d()

# %%
eps = cmp.ldp_epsilon(joint)
print("LDP ratio:", eps, "implies PML ratio <=", cmp.implied_pml_bound("LDP", eps, joint.prior))
print("actual:", max(pml(joint, y) for y in range(2)))

# %%
print("I(X;Y) =", cmp.mutual_information(joint), "<= E[pml] =", cmp.expected_log_leakage(joint))
b = cmp.tv_bounds(joint)
print("T(X;Y) =", cmp.total_variation_privacy(joint), "<=", b.tightest())

# %%
# Approximate LDP can hold while every output reveals the secret.
f = fix_f()
print("FIX-F (1, 1/4)-LDP:", cmp.approx_ldp_holds(f.channel, 1, F(1, 4)))
print("FIX-F epsilon at delta 0.99:", min_eps_for_delta_pml(f, F(99, 100))[0])

# and the reverse: no LDP guarantee at all, yet PML is small most of the time
g = fix_g()
print("FIX-G (10^6, 0.99)-LDP:", cmp.approx_ldp_holds(g.channel, 10**6, F(99, 100)))
print("FIX-G epsilon at delta 1/10:", min_eps_for_delta_pml(g, F(1, 10))[0])
print("approximate max-information:", cmp.approx_max_information(g, F(1, 10)))
