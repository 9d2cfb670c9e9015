"""Audit finite privacy mechanisms with pointwise maximal leakage (PML).

All quantities are exact in rational mode; see :mod:`pmlaudit.core`.
"""

from .core import (
    FLOAT,
    RATIONAL,
    UNBOUNDED,
    Channel,
    Event,
    Joint,
    PMLError,
    Prior,
    convert_mode,
    info_density,
    make_joint,
    posterior,
    validate_model,
)
from .leakage import (
    LeakageDistribution,
    conditional_pml,
    eps_max,
    event_leakage,
    leakage_distribution,
    maximal_leakage,
    pml,
)
from .guarantees import (
    GuaranteeReport,
    check_delta_pml,
    check_eps_delta_eml,
    check_eps_pml,
    eml_h_x,
    eml_implies_pml_check,
    eml_kappa,
    kappa_curve,
    min_eps_for_delta_pml,
)
from .channel_ops import (
    are_similar,
    compose_adaptive,
    compose_eml_bounds,
    compose_pml_bounds,
    postprocess,
    reduce,
    shattering_channel,
    split_outcome,
    stage_joint,
)
from .adversary import (
    GainFunction,
    RandomizedFunction,
    function_from_gain,
    g_leakage,
    gain_from_function,
    identity_gain,
    u_leakage,
)
from .io import load_model

__version__ = "0.1.0"
