"""
Cone module
===========

Exploration of the active-path DAG below a root mark: nodes are the revealed
marks, each with its arrow distance from the root and its children (one per
neighbour offset). Samplers attach reach, wetness and values to the nodes.
"""
from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

from GMRF_PerfectSampling.errors import BudgetExceededError
from GMRF_PerfectSampling.marks.store import MarkKey, MarkStore, UpdateMark
from GMRF_PerfectSampling.model.lattice import l1_distance
from GMRF_PerfectSampling.model.schedule import LevelSchedule

DEFAULT_BUDGET = 10**7


@dataclass
class ConeNode:
    """
    One revealed mark of a cone.

    Attributes:
        mark (UpdateMark): The mark.
        dist (int): Minimal number of arrows from the root.
        children (List[MarkKey] | None): Child keys once expanded.
        reach (int | None): K(mark), filled by the gaussian sampler.
        wetness (int | None): Max over explored descendants of K - distance.
        label (str): "unknown", "wet", "dry" or "pending".
        value (float | None): Field value at the mark, once evaluated.
    """

    mark: UpdateMark
    dist: int
    children: Optional[List[MarkKey]] = None
    reach: Optional[int] = None
    wetness: Optional[int] = None
    label: str = "unknown"
    value: Optional[float] = field(default=None, repr=False)

    @property
    def expanded(self) -> bool:
        """Whether the children are revealed."""
        return self.children is not None


class ConeDag:
    """
    Explored part of the active cone of a root mark.

    Attributes:
        store (MarkStore): Source of the marks.
        root (UpdateMark): The root mark.
        spec: Neighbourhood exposing `neighbors(site)` and `size`.
        budget (int): Maximal number of revealed marks.
        nodes (Dict[MarkKey, ConeNode]): Revealed marks.
    """

    def __init__(
        self, store: MarkStore, root: UpdateMark, spec, budget: int = DEFAULT_BUDGET
    ) -> None:
        if budget < 1:
            raise ValueError(f"`budget` must be positive, got {budget}.")
        self.store = store
        self.root = root
        self.spec = spec
        self.budget = budget
        self.nodes: Dict[MarkKey, ConeNode] = {root.key: ConeNode(root, 0)}

    def __len__(self) -> int:
        return len(self.nodes)

    def __getitem__(self, key: MarkKey) -> ConeNode:
        return self.nodes[key]

    @property
    def root_node(self) -> ConeNode:
        """Node of the root mark."""
        return self.nodes[self.root.key]

    def statistics(self) -> Dict[str, object]:
        """Node count, depth and per-depth counts."""
        return {
            "nodes": len(self.nodes),
            "depth": self.depth,
            "depth_counts": dict(sorted(self.depth_counts().items())),
        }

    def expand(self, node: ConeNode) -> List[ConeNode]:
        """
        Reveals the children of `node`.

        Raises:
            BudgetExceededError: If the node count would exceed the budget.
        """
        if node.expanded:
            return [self.nodes[key] for key in node.children]
        children = self.store.children(node.mark, self.spec)
        fresh = sum(1 for child in children if child.key not in self.nodes)
        if len(self.nodes) + fresh > self.budget:
            raise BudgetExceededError(
                f"Cone exploration exceeded the budget of {self.budget} marks.",
                report=self.statistics(),
            )
        keys = []
        for child in children:
            existing = self.nodes.get(child.key)
            if existing is None:
                self.nodes[child.key] = ConeNode(child, node.dist + 1)
            else:
                existing.dist = min(existing.dist, node.dist + 1)
            keys.append(child.key)
        node.children = keys
        return [self.nodes[key] for key in keys]

    def deepen(
        self,
        max_depth: Optional[int] = None,
        expand: Optional[Callable[[ConeNode], bool]] = None,
    ) -> "ConeDag":
        """
        Breadth-first pass from the root that expands the nodes with
        dist < max_depth accepted by `expand`, and recomputes minimal distances
        over the explored graph.

        Args:
            max_depth (int, optional): Depth bound of the expansion.
            expand (Callable[[ConeNode], bool], optional): Expansion predicate.

        Returns:
            ConeDag: self.
        """
        if max_depth is None and expand is None:
            raise ValueError("An unbounded exploration needs `max_depth` or `expand`.")
        if max_depth is not None and max_depth < 0:
            raise ValueError(f"`max_depth` must be nonnegative, got {max_depth}.")
        dist = {self.root.key: 0}
        queue = deque([self.root.key])
        while queue:
            key = queue.popleft()
            node = self.nodes[key]
            node.dist = dist[key]
            if (
                not node.expanded
                and (max_depth is None or node.dist < max_depth)
                and (expand is None or expand(node))
            ):
                self.expand(node)
            if node.expanded:
                for child in node.children:
                    if child not in dist:
                        dist[child] = node.dist + 1
                        queue.append(child)
        return self

    @property
    def depth(self) -> int:
        """Largest distance among revealed marks."""
        return max(node.dist for node in self.nodes.values())

    def depth_counts(self) -> Counter:
        """Number of revealed marks per distance."""
        return Counter(node.dist for node in self.nodes.values())

    def nodes_in_time_order(self) -> List[ConeNode]:
        """Revealed marks by increasing time: every child precedes its parents."""
        return sorted(self.nodes.values(), key=lambda node: node.mark.order_key())

    def radius(self, site) -> int:
        """Max l1 distance from `site` among the sites of revealed marks."""
        return max(l1_distance(site, node.mark.site) for node in self.nodes.values())

    def parents(self) -> Dict[MarkKey, List[MarkKey]]:
        """Reverse adjacency of the explored graph."""
        result: Dict[MarkKey, List[MarkKey]] = {key: [] for key in self.nodes}
        for key, node in self.nodes.items():
            for child in node.children or ():
                result[child].append(key)
        return result


def explore_cone(
    store: MarkStore,
    root: UpdateMark,
    max_depth: int,
    spec,
    budget: int = DEFAULT_BUDGET,
) -> ConeDag:
    """
    Breadth-first exploration of the cone of `root` up to `max_depth` arrows.

    Args:
        store (MarkStore): Mark source.
        root (UpdateMark): Root mark.
        max_depth (int): Depth bound, >= 0.
        spec: Neighbourhood.
        budget (int, optional): Node cap. Defaults to 10^7.

    Returns:
        ConeDag: The explored cone.
    """
    return ConeDag(store, root, spec, budget).deepen(max_depth=max_depth)


def reach(mark: UpdateMark, schedule: LevelSchedule) -> int:
    """K(mark) = inf{k >= 0 : u <= q_k}."""
    return schedule.level_index(mark.u)
