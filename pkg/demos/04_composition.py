"""
Releasing twice
===============

A second mechanism may depend on what the first one released.  We build
the composed channel, measure each stage on its own and compare the
composed leakage with what the composition rules promise.
"""

from fractions import Fraction as F
from pathlib import Path

from pmlaudit import (
    compose_adaptive,
    compose_eml_bounds,
    compose_pml_bounds,
    eml_kappa,
    leakage_distribution,
    min_eps_for_delta_pml,
    stage_joint,
)
from pmlaudit.io import load_model, load_stages

here = Path(__file__).parent / "models"
first = load_model(here / "fixD.json")
stages = load_stages(here / "fixD_stages.json")

composed = compose_adaptive(first.prior, first.channel, stages)
for e in leakage_distribution(composed):
    print(e.label, e.probability, e.ratio)

# %%
# Each stage is judged against the posterior left by the first release.
eps1 = min_eps_for_delta_pml(first, 0)[0]
eps2 = max(min_eps_for_delta_pml(stage_joint(first.prior, first.channel, stages, y), 0)[0]
           for y in first.support_y)
print("stage epsilons:", eps1, eps2)
eps, delta = compose_pml_bounds(1, eps1, 0, eps2, 0)
print("promised:", eps, "actual:", min_eps_for_delta_pml(composed, 0)[0])

# %%
d = F(1, 5)
k1 = eml_kappa(first, d).ratio
k2 = max(eml_kappa(stage_joint(first.prior, first.channel, stages, y), d).ratio
         for y in first.support_y)
eps, delta = compose_eml_bounds(5, k1, d, k2, d, prior=first.prior)
print(f"EML promise ({eps}, {delta}); actual kappa = {eml_kappa(composed, delta).ratio}")
