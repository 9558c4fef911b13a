# pylint: disable=R0902, R0913, R0914
"""
Gaussian sampler module
=======================

Samplers of the unbounded model built on the stratified coupler.

`GaussianSampler` explores the cone of the root until every active path from
the root meets a certified-dry mark. A mark q wets the marks at distance below
K(q) = inf{k : u_q <= q_k} above it; a mark is dry when nothing in its cone
wets it, and then its value is the coalesced value phi(0, u). Dryness is
certified by exploring to a depth D whose tail bound, summed over the cutset,
stays below `delta_fail`. Values propagate from the cutset upwards through the
wet marks.

`LDependentSampler` cuts the cone at arrow depth floor(l/2) instead, which
yields an l-dependent approximation that coincides with the exact value when
the first dry cutset lies above that depth.
"""
import logging
from collections import deque
from typing import Dict, List, Sequence, Tuple

import numpy as np

from GMRF_PerfectSampling.analytics.bounds import (
    certificate_tail,
    certification_depth,
    check_h2,
)
from GMRF_PerfectSampling.analytics.normal import std_normal_quantile
from GMRF_PerfectSampling.coupling.stratified import StratifiedCoupler
from GMRF_PerfectSampling.errors import BudgetExceededError, CertificateError, ScheduleError
from GMRF_PerfectSampling.marks.cone import DEFAULT_BUDGET, ConeDag, ConeNode
from GMRF_PerfectSampling.marks.store import MarkKey, MarkStore
from GMRF_PerfectSampling.model.hypotheses import check_growth, check_h1, check_h3
from GMRF_PerfectSampling.model.lattice import NeighborhoodSpec
from GMRF_PerfectSampling.model.schedule import MAX_LEVEL, LevelSchedule
from GMRF_PerfectSampling.sampling.reports import CodingReport, DrynessCertificate

_UNIT_OPEN = (np.finfo(float).tiny, 1.0 - 2.0**-53)


def validate_schedule(schedule: LevelSchedule, b_size: int) -> Dict[str, bool]:
    """
    Runs H1, H2 (n = 1..64), H3 and the growth check.

    Args:
        schedule (LevelSchedule): The schedule.
        b_size (int): |B|.

    Returns:
        Dict[str, bool]: Verdict per check.

    Raises:
        ScheduleError: If any check fails.
    """
    verdicts = {
        "H1": check_h1(schedule).passes,
        "H2": all(check_h2(schedule, n) for n in range(1, MAX_LEVEL + 1)),
        "H3": check_h3(schedule, b_size).passes,
        "growth": check_growth(schedule).passes,
    }
    failed = [name for name, passed in verdicts.items() if not passed]
    if failed:
        raise ScheduleError(
            f"Schedule a={schedule.a}, L1={schedule.L1}, epsilon={schedule.epsilon} "
            f"fails {', '.join(failed)}."
        )
    return verdicts


def iid_value(u: float) -> float:
    """Standard normal value of a mark when epsilon = 0."""
    return std_normal_quantile(min(max(u, _UNIT_OPEN[0]), _UNIT_OPEN[1]))


class GaussianSampler:
    """
    Dry-cutset sampler of the unbounded model.

    Attributes:
        store (MarkStore): Mark source.
        schedule (LevelSchedule): Level schedule.
        coupler (StratifiedCoupler | None): Update function; None in i.i.d. mode.
        delta_fail (float): Bound on the certificate failure probability per query.
        budget (int): Mark cap per query.
        spec (NeighborhoodSpec): Neighbourhood.
        logger (logging.Logger): Logger instance.
    """

    def __init__(
        self,
        store: MarkStore,
        schedule: LevelSchedule,
        delta_fail: float = 1e-9,
        budget: int = DEFAULT_BUDGET,
        coupler: StratifiedCoupler = None,
        check_hypotheses: bool = True,
        logger: logging.Logger = None,
    ) -> None:
        """
        Initializes the sampler.

        Args:
            store (MarkStore): Mark source.
            schedule (LevelSchedule): Level schedule.
            delta_fail (float, optional): Certificate bound. Defaults to 1e-9.
            budget (int, optional): Mark cap per query. Defaults to 10^7.
            coupler (StratifiedCoupler, optional): Prebuilt coupler for `schedule`.
            check_hypotheses (bool, optional): Whether to refuse schedules failing
                H1, H2, H3 or the growth check. Defaults to True.
            logger (logging.Logger, optional): Logger instance. If None, a
                default logger is created.

        Raises:
            ScheduleError: If a hypothesis check fails.
        """
        if not delta_fail > 0:
            raise ValueError(f"`delta_fail` must be positive, got {delta_fail}.")
        if logger is None:
            logger = logging.getLogger(__name__)
        self.logger = logger
        self.store = store
        self.schedule = schedule
        self.delta_fail = delta_fail
        self.budget = budget
        self.spec = NeighborhoodSpec.default(schedule.d)
        self.iid = schedule.epsilon == 0
        if self.iid:
            self.coupler = None
            self.logger.debug("epsilon = 0: sampling in i.i.d. mode")
        else:
            if check_hypotheses:
                validate_schedule(schedule, self.spec.size)
            self.coupler = coupler if coupler is not None else StratifiedCoupler(schedule)
        self._values: Dict[MarkKey, float] = {}
        self._cutsets: Dict[Tuple[int, ...], Dict[MarkKey, int]] = {}

    def reset(self) -> None:
        """Forgets memoized values and cutsets."""
        self._values.clear()
        self._cutsets.clear()

    def cutset(self, site: Sequence[int]) -> Dict[MarkKey, int]:
        """Cutset of the last query at `site`, with root distances."""
        return dict(self._cutsets[tuple(int(c) for c in site)])

    def _wetness(self, cone: ConeDag) -> None:
        """W(p) = max(K(p), max over children of W(c) - 1), children first."""
        for node in cone.nodes_in_time_order():
            if node.reach is None:
                node.reach = self.schedule.level_index(node.mark.u)
            wetness = node.reach
            if node.expanded:
                wetness = max(
                    [wetness] + [cone[child].wetness - 1 for child in node.children]
                )
            node.wetness = wetness

    def _traverse(
        self, cone: ConeDag, depth: int, max_depth: int
    ) -> Tuple[List[ConeNode], List[ConeNode], List[ConeNode]]:
        """Splits the region reached from the root into cutset, wet and pending marks."""
        cutset, wet, pending = [], [], []
        seen = {cone.root.key}
        queue = deque([cone.root_node])
        while queue:
            node = queue.popleft()
            key = node.mark.key
            if key in self._values and node is not cone.root_node:
                node.label = "known"
                continue
            if node.wetness <= 0:
                if node.dist + depth <= max_depth:
                    node.label = "dry"
                    cutset.append(node)
                else:
                    node.label = "pending"
                    pending.append(node)
                continue
            node.label = "wet"
            wet.append(node)
            if not node.expanded:
                pending.append(node)
                continue
            for child in node.children:
                if child not in seen:
                    seen.add(child)
                    queue.append(cone[child])
        return cutset, wet, pending

    def sample(self, site: Sequence[int]) -> Tuple[float, CodingReport, DrynessCertificate]:
        """
        Value of the unbounded field at `site`.

        Args:
            site (Sequence[int]): Lattice point.

        Returns:
            Tuple[float, CodingReport, DrynessCertificate]: The value, the cost
                of the query and the certificate.

        Raises:
            BudgetExceededError: If more than `budget` marks are revealed.
            CertificateError: If the wet region reaches 64 levels past the
                certification depth.
        """
        site = tuple(int(c) for c in site)
        root = self.store.last_mark_before(site, 0.0)
        if self.iid:
            return (
                iid_value(root.u),
                CodingReport(site, 0, 0, 1, wet_depth=0),
                DrynessCertificate(0, 0.0, 1, self.delta_fail),
            )
        if root.key in self._values:
            self._cutsets[site] = {}
            return (
                self._values[root.key],
                CodingReport(site, 0, 0, 1, wet_depth=0),
                DrynessCertificate(0, 0.0, 0, self.delta_fail),
            )
        b_size = self.spec.size
        depth = certification_depth(self.schedule, b_size, self.delta_fail)
        max_depth = depth
        cone = ConeDag(self.store, root, self.spec, self.budget)
        while True:
            if max_depth - depth > MAX_LEVEL:
                raise CertificateError(
                    f"No dry cutset certified at site {site} within {MAX_LEVEL} levels "
                    f"past depth {depth}.",
                    diagnostics={
                        "wet_region": sum(1 for n in cone.nodes.values() if n.label == "wet"),
                        "deepest_wet": max(
                            (n.dist for n in cone.nodes.values() if n.label == "wet"),
                            default=0,
                        ),
                        "cert_depth": depth,
                        "explored_depth": max_depth,
                    },
                )
            try:
                cone.deepen(max_depth=max_depth)
            except BudgetExceededError as error:
                partial = CodingReport(site, cone.radius(site), cone.depth, len(cone))
                raise BudgetExceededError(str(error), report=partial) from error
            self._wetness(cone)
            deepest_reach = max(node.reach for node in cone.nodes.values())
            if deepest_reach >= depth:
                depth = deepest_reach + 1
                max_depth = max(max_depth, depth)
                continue
            cutset, wet, pending = self._traverse(cone, depth, max_depth)
            if pending:
                max_depth += 1
                continue
            residual = len(cutset) * certificate_tail(self.schedule, b_size, depth)
            if residual > self.delta_fail:
                depth += 1
                max_depth = max(max_depth, depth)
                continue
            break
        values: Dict[MarkKey, float] = {}
        for node in cutset:
            values[node.mark.key] = self.coupler.common_value(node.mark.u)
        for node in sorted(wet, key=lambda n: n.mark.order_key()):
            values[node.mark.key] = self.coupler.update(
                [values.get(child, self._values.get(child)) for child in node.children],
                node.mark.u,
            )
        for key, value in values.items():
            cone[key].value = value
        self._values.update(values)
        self._cutsets[site] = {node.mark.key: node.dist for node in cutset}
        wet_depth = max((node.dist + 1 for node in wet), default=0)
        report = CodingReport(
            site, cone.radius(site), cone.depth, len(cone), wet_depth=wet_depth
        )
        certificate = DrynessCertificate(depth, residual, len(cutset), self.delta_fail)
        self.logger.debug(
            "Site %s: cutset of %d marks, wet depth %d, certification depth %d",
            site,
            len(cutset),
            wet_depth,
            depth,
        )
        return values[root.key], report, certificate


class LDependentSampler:
    """
    l-dependent approximation: the cone is cut at arrow depth h = floor(l/2),
    the marks at depth h take phi(0, u) and the values propagate upwards.

    Attributes:
        store (MarkStore): Mark source.
        schedule (LevelSchedule): Level schedule.
        l (int): Dependence range parameter.
        coupler (StratifiedCoupler | None): Update function; None in i.i.d. mode.
    """

    def __init__(
        self,
        store: MarkStore,
        schedule: LevelSchedule,
        l: int,
        budget: int = DEFAULT_BUDGET,
        coupler: StratifiedCoupler = None,
        logger: logging.Logger = None,
    ) -> None:
        if l < 0:
            raise ValueError(f"`l` must be nonnegative, got {l}.")
        if logger is None:
            logger = logging.getLogger(__name__)
        self.logger = logger
        self.store = store
        self.schedule = schedule
        self.l = l
        self.budget = budget
        self.spec = NeighborhoodSpec.default(schedule.d)
        if schedule.epsilon == 0:
            self.coupler = None
        else:
            self.coupler = coupler if coupler is not None else StratifiedCoupler(schedule)

    @property
    def cut_depth(self) -> int:
        """floor(l/2)."""
        return self.l // 2

    def sample(self, site: Sequence[int]) -> Tuple[float, CodingReport]:
        """
        Y* at `site`.

        Args:
            site (Sequence[int]): Lattice point.

        Returns:
            Tuple[float, CodingReport]: The value and the cost of the query.
        """
        site = tuple(int(c) for c in site)
        root = self.store.last_mark_before(site, 0.0)
        if self.coupler is None:
            return iid_value(root.u), CodingReport(site, 0, 0, 1)
        cut = self.cut_depth
        if cut == 0:
            return self.coupler.zero_update(root.u), CodingReport(site, 0, 0, 1)
        cone = ConeDag(self.store, root, self.spec, self.budget).deepen(max_depth=cut)
        values: Dict[MarkKey, float] = {}
        for node in cone.nodes_in_time_order():
            if node.dist >= cut:
                node.value = self.coupler.zero_update(node.mark.u)
            else:
                # children below the cut always exist; 0 is the fallback boundary
                node.value = self.coupler.update(
                    [values.get(child, 0.0) for child in node.children], node.mark.u
                )
            values[node.mark.key] = node.value
        report = CodingReport(site, cone.radius(site), cone.depth, len(cone))
        return cone.root_node.value, report


def sample_gaussian(
    store: MarkStore,
    site: Sequence[int],
    schedule: LevelSchedule,
    delta_fail: float = 1e-9,
    budget: int = DEFAULT_BUDGET,
) -> Tuple[float, CodingReport, DrynessCertificate]:
    """One-shot dry-cutset query."""
    return GaussianSampler(store, schedule, delta_fail, budget).sample(site)


def sample_l_dependent(
    store: MarkStore, site: Sequence[int], schedule: LevelSchedule, l: int
) -> float:
    """One-shot l-dependent query."""
    value, _ = LDependentSampler(store, schedule, l).sample(site)
    return value
