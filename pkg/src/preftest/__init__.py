"""preftest: sampling-based closeness testers for preference profiles.

Library layout: ``prefcore`` (data model and generators), ``domains``
(recognizers and content arithmetic), ``distances`` (exact oracles),
``oracle`` (the query model), ``testers`` (the algorithms), ``mc``
(vectorized trial batches over numba/numpy kernels), ``expharness``
(experiment driver), ``cli`` (command line).
"""

from .prefcore import (
    Alternative,
    GroundTruth,
    LinearOrder,
    Profile,
    gen_lb_sc_profile,
    gen_lb_sp_profile,
    gen_prop3_profile,
    gen_sp_order_uniform,
    gen_type1_profile,
    gen_uniform_profile,
    make_order,
    profile_from_text,
    profile_to_text,
    read_profile,
    restrict,
    write_profile,
)
from .domains import (
    DomainSpec,
    Witness,
    con_value,
    get_domain,
    is_sp_wrt_axis,
    m0,
    m_eps,
    recognize_sc,
    recognize_sp,
    res_value,
    single_crossing_domain,
    single_peaked_domain,
)
from .distances import (
    DistanceReport,
    alt_distance,
    check_lemma_subsample,
    combined_feasible,
    pref_distance,
)
from .oracle import AgentHandle, QueryOracle, compare, learn_restricted_order
from .testers import (
    TesterParams,
    Verdict,
    test_alt_outliers,
    test_combined_outliers,
    test_random_outliers,
    test_worst_outliers_any_eps,
    test_worst_outliers_small_eps,
    test_worst_worst_pref,
)
from .expharness import ExperimentConfig, preset_config, run_experiment

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
