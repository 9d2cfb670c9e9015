"""
Guessing games behind the numbers
=================================

The leakage of an output bounds how much any adversary gains from seeing
it, whether they guess a randomized function of the secret or maximize
an arbitrary gain.  The two views translate into each other.
"""

from itertools import combinations

from pmlaudit import (
    GainFunction,
    RandomizedFunction,
    function_from_gain,
    g_leakage,
    identity_gain,
    pml,
    shattering_channel,
    u_leakage,
)
from pmlaudit.fixtures import fix_c, fix_g

joint = fix_c()

# %%
# Guess the secret itself, or get two tries.
pairs = list(combinations(range(4), 2))
two_tries = GainFunction([[1 if i in p else 0 for p in pairs] for i in range(4)])
for y in range(4):
    print(joint.labels_y[y], "pml", pml(joint, y),
          "| one guess", g_leakage(joint, identity_gain(joint), y),
          "| two guesses", g_leakage(joint, two_tries, y))

# %%
# A gain function becomes a randomized function with the same leakage at y.
u = function_from_gain(joint, two_tries, 0)
print(u.construction, "with", len(u.labels_u), "letters:", u_leakage(joint, u, 0))

# %%
# Shattering each secret into letters of the smallest prior mass makes the
# guessing game as hard as possible up front, and attains the leakage.
g = fix_g()
shatter = RandomizedFunction(shattering_channel(g.prior))
print(shatter.labels_u)
for y in g.support_y:
    print(g.labels_y[y], u_leakage(g, shatter, y), pml(g, y))
