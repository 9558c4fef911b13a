# pylint: disable=C0114
from .cone import DEFAULT_BUDGET, ConeDag, ConeNode, explore_cone, reach
from .store import MarkKey, MarkStore, UpdateMark, zigzag
