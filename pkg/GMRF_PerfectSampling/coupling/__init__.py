# pylint: disable=C0114
from .boundary import BoundaryConfig, as_boundary, check_uniform
from .flat import FlatCoupler, flat_update
from .stratified import (
    StratifiedCoupler,
    common_component_cdf,
    common_value,
    stratified_update,
)
from .tables import MonotoneTable
