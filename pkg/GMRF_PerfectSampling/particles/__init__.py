# pylint: disable=C0114
from .duality import (
    DualityReport,
    attractiveness_violations,
    disjointness_violations,
    domination_violations,
    duality_check_binary,
    duality_check_level,
    kappa_below,
)
from .glauber import forward_glauber
from .level import (
    INF,
    backward_dual_level,
    dual_level_from_cone,
    estimate_level_rates,
    forward_level,
    initial_spins,
    level_rates,
    level_update,
)
from .spin import (
    backward_dual_binary,
    estimate_spin_rate,
    forward_spin,
    spin_rate,
    spin_rate_table,
    spin_update,
)
from .torus import TorusWindow
from .trajectory import (
    BinarySpinTrajectory,
    DualTrajectory,
    ForwardTrajectory,
    LevelTrajectory,
)
