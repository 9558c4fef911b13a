# pylint: disable=R0902
"""
Trajectory module
=================

Event records of the forward processes (read forward in time, right
continuous) and of the backward duals (read backward from time 0, left
continuous), with the marks each of them consumed.
"""
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, Tuple

import numpy as np
import pandas as pd

from GMRF_PerfectSampling.marks.store import MarkKey
from GMRF_PerfectSampling.model.lattice import Site
from GMRF_PerfectSampling.particles.torus import TorusWindow


@dataclass
class ForwardTrajectory:
    """
    Forward evolution of a configuration over (tau, t_end].

    Attributes:
        window (TorusWindow): The torus.
        tau (float): Start time.
        initial (Dict[Site, Any]): Configuration at tau.
        times (List[float]): Update times, increasing.
        sites (List[Site]): Updated site of each update.
        values (List[Any]): New value of each update.
        consumed (List[MarkKey]): Marks read, in reading order.
    """

    window: TorusWindow
    tau: float
    initial: Dict[Site, Any]
    times: List[float] = field(default_factory=list)
    sites: List[Site] = field(default_factory=list)
    values: List[Any] = field(default_factory=list)
    consumed: List[MarkKey] = field(default_factory=list)

    def record(self, key: MarkKey, time: float, site: Site, value: Any) -> None:
        """Appends one update."""
        if self.times and time < self.times[-1]:
            raise ValueError(
                f"Forward updates must come in increasing time: {time} after {self.times[-1]}."
            )
        self.consumed.append(key)
        self.times.append(time)
        self.sites.append(site)
        self.values.append(value)

    def state_at(self, t: float) -> Dict[Site, Any]:
        """Configuration at time t (every update with time <= t applied)."""
        stop = int(np.searchsorted(self.times, t, side="right"))
        state = dict(self.initial)
        for site, value in zip(self.sites[:stop], self.values[:stop]):
            state[site] = value
        return state

    def iter_states(self, checkpoints) -> Iterator[Tuple[float, Dict[Site, Any]]]:
        """Configurations at increasing checkpoint times, in one sweep."""
        state = dict(self.initial)
        position = 0
        for t in sorted(checkpoints):
            while position < len(self.times) and self.times[position] <= t:
                state[self.sites[position]] = self.values[position]
                position += 1
            yield t, dict(state)

    def value_at(self, site, t: float) -> Any:
        """Value at one site at time t."""
        return self.state_at(t)[self.window.wrap(site)]

    @property
    def final(self) -> Dict[Site, Any]:
        """Configuration after the last update."""
        return self.state_at(np.inf)

    def transitions(self) -> List[Tuple[float, Site, Any, Any]]:
        """(time, site, old, new) for every update that changed the value."""
        state = dict(self.initial)
        changes = []
        for time, site, value in zip(self.times, self.sites, self.values):
            if state[site] != value:
                changes.append((time, site, state[site], value))
                state[site] = value
        return changes

    def to_frame(self) -> pd.DataFrame:
        """Event log: one row per update."""
        return pd.DataFrame(
            [
                {
                    "time": time,
                    **{f"x{axis}": c for axis, c in enumerate(site)},
                    "value": value,
                }
                for time, site, value in zip(self.times, self.sites, self.values)
            ]
        )

    def dump(self, path: Path) -> pd.DataFrame:
        """Writes the event log as CSV."""
        frame = self.to_frame()
        frame.to_csv(path, index=False, float_format="%.17g")
        return frame


class BinarySpinTrajectory(ForwardTrajectory):
    """Forward binary spin system, started from all 1."""


class LevelTrajectory(ForwardTrajectory):
    """Forward multi-level particle system with spins in N and +inf."""


@dataclass
class DualTrajectory:
    """
    Backward evolution from time 0 down to tau.

    Attributes:
        window (TorusWindow): The torus.
        tau (float): Lowest time reached.
        initial (Any): State at time 0.
        times (List[float]): Times of the marks that changed the state, decreasing.
        states (List[Any]): State right after each of those marks.
        consumed (List[MarkKey]): Every mark read, in reading order.
        extinction_time (float | None): Time at which the state died out, if it did.
    """

    window: TorusWindow
    tau: float
    initial: Any
    times: List[float] = field(default_factory=list)
    states: List[Any] = field(default_factory=list)
    consumed: List[MarkKey] = field(default_factory=list)
    extinction_time: Optional[float] = None

    def record(self, time: float, state: Any) -> None:
        """Appends the state reached at a mark."""
        if self.times and time > self.times[-1]:
            raise ValueError(
                f"Dual updates must come in decreasing time: {time} after {self.times[-1]}."
            )
        self.times.append(time)
        self.states.append(state)

    def state_at(self, t: float) -> Any:
        """State at time t: every mark with time > t applied."""
        count = 0
        while count < len(self.times) and self.times[count] > t:
            count += 1
        return self.initial if count == 0 else self.states[count - 1]

    @property
    def final(self) -> Any:
        """State at tau."""
        return self.state_at(self.tau)

    def to_frame(self) -> pd.DataFrame:
        """One row per recorded mark: time and the state as text."""
        return pd.DataFrame(
            {"time": self.times, "state": [_describe(state) for state in self.states]}
        )

    def dump(self, path: Path) -> pd.DataFrame:
        """Writes the event log as CSV."""
        frame = self.to_frame()
        frame.to_csv(path, index=False, float_format="%.17g")
        return frame


def _describe(state: Any) -> str:
    if isinstance(state, dict):
        return ";".join(f"{site}:{value}" for site, value in sorted(state.items()))
    return ";".join(str(site) for site in sorted(state))
