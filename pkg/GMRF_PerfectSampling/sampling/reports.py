"""
Reports module
==============

Data structures returned by the samplers: the per-site coding report, the
dryness certificate of the stratified sampler, and the window sample.
"""
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, Optional, Sequence, Tuple

import pandas as pd

from GMRF_PerfectSampling.model.lattice import Site


@dataclass(frozen=True)
class CodingReport:
    """
    Cost of one site query.

    Attributes:
        site (Site): Queried site.
        radius (int): Max l1 distance from `site` among the sites of revealed marks.
        depth (int): Max arrow distance reached.
        marks_revealed (int): Number of marks in the explored cone.
        wet_depth (int | None): Length of the longest wet chain from the root
            (stratified sampler only).
    """

    site: Site
    radius: int
    depth: int
    marks_revealed: int
    wet_depth: Optional[int] = None

    def __post_init__(self):
        if self.radius < 0 or self.depth < 0 or self.marks_revealed < 1:
            raise ValueError(
                f"Invalid coding report: radius={self.radius}, depth={self.depth}, "
                f"marks_revealed={self.marks_revealed}."
            )

    def to_dict(self) -> Dict[str, Any]:
        """Flat dictionary, one column per coordinate."""
        row = {f"x{axis}": c for axis, c in enumerate(self.site)}
        row.update(
            radius=self.radius,
            depth=self.depth,
            marks_revealed=self.marks_revealed,
            wet_depth=self.wet_depth,
        )
        return row


@dataclass(frozen=True)
class DrynessCertificate:
    """
    Bound on the probability that an unexplored mark wets a certified-dry mark.

    Attributes:
        cert_depth (int): Depth D to which every certified mark was explored.
        residual (float): marks_certified * sum_{k >= D} |B|^k (1 - q_k).
        marks_certified (int): Size of the dry cutset.
        delta_fail (float): Requested bound.
    """

    cert_depth: int
    residual: float
    marks_certified: int
    delta_fail: float

    def __post_init__(self):
        if self.residual > self.delta_fail:
            raise ValueError(
                f"Residual {self.residual} exceeds the requested bound "
                f"delta_fail={self.delta_fail}."
            )


@dataclass
class FieldSample:
    """
    Realized field on a finite window.

    Attributes:
        window (Tuple[Site, ...]): Sites of the window.
        values (Dict[Site, float]): Field value per site.
        meta (Dict[str, Any]): Seed, marks revealed, depth, mode.
        reports (Tuple[CodingReport, ...]): Per-site coding reports.
    """

    window: Tuple[Site, ...]
    values: Dict[Site, float]
    meta: Dict[str, Any] = field(default_factory=dict)
    reports: Tuple[CodingReport, ...] = ()

    def __post_init__(self):
        self.window = tuple(tuple(int(c) for c in site) for site in self.window)
        if set(self.values) != set(self.window):
            raise ValueError(
                "Sample values must cover exactly the window sites: got "
                f"{sorted(self.values)} for window {sorted(self.window)}."
            )

    def __getitem__(self, site: Sequence[int]) -> float:
        return self.values[tuple(site)]

    def as_array(self):
        """Values in window order."""
        return [self.values[site] for site in self.window]

    def to_frame(self) -> pd.DataFrame:
        """One row per site: coordinates and value."""
        return pd.DataFrame(
            [
                {**{f"x{axis}": c for axis, c in enumerate(site)}, "value": self.values[site]}
                for site in self.window
            ]
        )

    def to_json_dict(self) -> Dict[str, Any]:
        """JSON-ready representation."""
        return {
            "window": [list(site) for site in self.window],
            "values": [self.values[site] for site in self.window],
            "meta": self.meta,
            "reports": [asdict(report) for report in self.reports],
        }
