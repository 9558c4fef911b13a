# pylint: disable=R0913
"""
Truncated sampler module
========================

Coupling from the past for the truncated model under high noise. A mark with
u <= gamma takes the coalesced value R^{-1}(u) whatever its neighbours; a mark
with u > gamma needs the values of its children. The backward exploration
stops on every path at the first coalescing mark, and the values propagate
upwards in time order.
"""
import logging
from typing import Dict, Sequence, Tuple

from GMRF_PerfectSampling.coupling.flat import FlatCoupler
from GMRF_PerfectSampling.errors import BudgetExceededError, ScheduleError
from GMRF_PerfectSampling.marks.cone import DEFAULT_BUDGET, ConeDag
from GMRF_PerfectSampling.marks.store import MarkKey, MarkStore
from GMRF_PerfectSampling.sampling.reports import CodingReport


class TruncatedSampler:
    """
    Exact sampler of the truncated model.

    Attributes:
        store (MarkStore): Mark source shared by every query.
        coupler (FlatCoupler): Update function.
        spec: Neighbourhood (defaults to the nearest neighbours).
        budget (int): Mark cap per query.
        logger (logging.Logger): Logger instance.
    """

    def __init__(
        self,
        store: MarkStore,
        coupler: FlatCoupler,
        spec=None,
        budget: int = DEFAULT_BUDGET,
        force: bool = False,
        logger: logging.Logger = None,
    ) -> None:
        """
        Initializes the sampler and checks the high-noise gate.

        Args:
            store (MarkStore): Mark source.
            coupler (FlatCoupler): Update function.
            spec (optional): Neighbourhood. Defaults to the model's.
            budget (int, optional): Mark cap per query. Defaults to 10^7.
            force (bool, optional): Run even when gamma <= 1 - 1/|B|; the
                termination is then unproven. Defaults to False.
            logger (logging.Logger, optional): Logger instance. If None, a
                default logger is created.

        Raises:
            ScheduleError: If the gate fails and `force` is False.
        """
        if logger is None:
            logger = logging.getLogger(__name__)
        self.logger = logger
        self.store = store
        self.coupler = coupler
        self.spec = spec if spec is not None else coupler.params.neighborhood
        self.budget = budget
        gate = 1.0 - 1.0 / self.spec.size
        if not coupler.gamma > gate:
            message = (
                f"High-noise gate fails: gamma={coupler.gamma:.6f} <= 1 - 1/|B| = "
                f"{gate:.6f}."
            )
            if not force:
                raise ScheduleError(message + " Pass force=True to run anyway.")
            self.logger.warning("%s Running anyway; a budget failure may follow.", message)
        self._values: Dict[MarkKey, float] = {}

    def reset(self) -> None:
        """Forgets the memoized mark values."""
        self._values.clear()

    def sample(self, site: Sequence[int]) -> Tuple[float, CodingReport]:
        """
        Value of the stationary field at `site`.

        Args:
            site (Sequence[int]): Lattice point.

        Returns:
            Tuple[float, CodingReport]: The value and the cost of the query.

        Raises:
            BudgetExceededError: If more than `budget` marks are revealed.
        """
        site = tuple(int(c) for c in site)
        root = self.store.last_mark_before(site, 0.0)
        cone = ConeDag(self.store, root, self.spec, self.budget)
        gamma = self.coupler.gamma
        try:
            cone.deepen(
                expand=lambda node: node.mark.u > gamma and node.mark.key not in self._values
            )
        except BudgetExceededError as error:
            partial = CodingReport(site, cone.radius(site), cone.depth, len(cone))
            raise BudgetExceededError(str(error), report=partial) from error
        for node in cone.nodes_in_time_order():
            key = node.mark.key
            if key in self._values:
                node.value = self._values[key]
                continue
            if node.mark.u <= gamma:
                node.value = self.coupler.common_value(node.mark.u)
            else:
                node.value = self.coupler.update(
                    [self._values[child] for child in node.children], node.mark.u
                )
            self._values[key] = node.value
        report = CodingReport(site, cone.radius(site), cone.depth, len(cone))
        self.logger.debug(
            "Site %s resolved at depth %d with %d marks", site, report.depth, len(cone)
        )
        return cone.root_node.value, report


def sample_truncated(
    store: MarkStore,
    site: Sequence[int],
    coupler: FlatCoupler,
    budget: int = DEFAULT_BUDGET,
    force: bool = False,
) -> Tuple[float, CodingReport]:
    """One-shot truncated query."""
    return TruncatedSampler(store, coupler, budget=budget, force=force).sample(site)
