# pylint: disable=C0114
from .batch import SampleBatch
from .properties import (
    coalescence_violations,
    containment_violations,
    coupler_property_check,
    law_checks,
)
from .statistics import (
    IndependenceResult,
    KSResult,
    RegressionResult,
    TVEstimate,
    bonferroni,
    conditional_regression,
    independence_test,
    ks_constant,
    ks_test,
    radius_tv_bound,
    tail_bound,
    tail_curve,
    tv_discretized,
    wilson_interval,
)
from .tables import (
    format_scientific,
    generate_check_table,
    generate_moment_table,
    generate_verdict_table,
)
