"""
Glauber module
==============

Forward heat-bath dynamics of the field on a torus: every mark replaces the
value at its site by phi(current neighbourhood, u).
"""
import logging
from typing import Dict

from GMRF_PerfectSampling.marks.store import MarkStore
from GMRF_PerfectSampling.model.lattice import Site
from GMRF_PerfectSampling.particles.torus import TorusWindow
from GMRF_PerfectSampling.sampling.gaussian import iid_value
from GMRF_PerfectSampling.sampling.reports import FieldSample

logger = logging.getLogger(__name__)


def forward_glauber(
    window: TorusWindow,
    xi: FieldSample,
    tau: float,
    t_end: float,
    store: MarkStore,
    coupler,
) -> FieldSample:
    """
    Runs the field dynamics from xi at tau through the marks of (tau, t_end].

    Args:
        window (TorusWindow): The torus.
        xi (FieldSample): Initial field on every site of the torus.
        tau (float): Start time.
        t_end (float): End time, tau < t_end <= 0.
        store (MarkStore): Mark source.
        coupler: Any update function exposing `update(eta, u)`; None runs the
            epsilon = 0 unbounded dynamics.

    Returns:
        FieldSample: The field at t_end, with the update count in its meta.
    """
    if not tau < t_end <= 0:
        raise ValueError(f"Expected tau < t_end <= 0, got tau={tau}, t_end={t_end}.")
    if set(xi.window) != set(window.sites):
        raise ValueError("The initial field must cover exactly the torus sites.")
    state: Dict[Site, float] = {site: xi.values[site] for site in window.sites}
    marks = window.marks_in_window(store, tau, t_end)
    for mark in marks:
        if coupler is None:
            state[mark.site] = iid_value(mark.u)
        else:
            state[mark.site] = coupler.update(
                [state[n] for n in window.neighbors(mark.site)], mark.u
            )
    logger.debug("Glauber run over (%s, %s]: %d updates", tau, t_end, len(marks))
    meta = {**xi.meta, "tau": tau, "t_end": t_end, "updates": len(marks)}
    return FieldSample(window.sites, state, meta)
