# pylint: disable=C0114
from .hypotheses import (
    GrowthReport,
    H1Report,
    H3Report,
    H4Report,
    check_growth,
    check_h1,
    check_h3,
    check_h4,
)
from .lattice import (
    NeighborhoodSpec,
    Site,
    ball_count,
    l1_distance,
    neighbors,
    sphere_count,
    unit_offsets,
)
from .params import ModelParams
from .schedule import MAX_LEVEL, LevelSchedule, level_bound, level_prob
