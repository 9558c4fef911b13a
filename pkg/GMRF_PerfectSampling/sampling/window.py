# pylint: disable=R0902
"""
Window module
=============

Joint sampling of a finite window. Every site is evaluated against the same
mark store with one sampler, so that the marks and the memoized mark values are
shared across sites and the window carries the joint law of the field.
"""
import logging
from dataclasses import dataclass
from typing import Iterable, Literal, Optional, Sequence, Union

from GMRF_PerfectSampling.coupling.flat import FlatCoupler
from GMRF_PerfectSampling.coupling.stratified import StratifiedCoupler
from GMRF_PerfectSampling.marks.cone import DEFAULT_BUDGET
from GMRF_PerfectSampling.marks.store import MarkStore
from GMRF_PerfectSampling.model.params import ModelParams
from GMRF_PerfectSampling.model.schedule import LevelSchedule
from GMRF_PerfectSampling.sampling.gaussian import GaussianSampler, LDependentSampler
from GMRF_PerfectSampling.sampling.reports import FieldSample
from GMRF_PerfectSampling.sampling.truncated import TruncatedSampler

Mode = Literal["truncated", "gaussian", "ldep"]
MODES = ("truncated", "gaussian", "ldep")


@dataclass
class SamplerOptions:
    """
    Everything a window query needs besides the store.

    Attributes:
        params (ModelParams): Model parameters.
        schedule (LevelSchedule | None): Level schedule, required by the
            gaussian and ldep modes.
        budget (int): Mark cap per site query.
        delta_fail (float): Certificate bound of the gaussian mode.
        l (int): Dependence range of the ldep mode.
        force (bool): Run the truncated sampler below the high-noise gate.
        check_hypotheses (bool): Refuse schedules failing H1, H2, H3 or growth.
        coupler (FlatCoupler | StratifiedCoupler | None): Prebuilt coupler
            reused across windows.
    """

    params: ModelParams
    schedule: Optional[LevelSchedule] = None
    budget: int = DEFAULT_BUDGET
    delta_fail: float = 1e-9
    l: int = 0
    force: bool = False
    check_hypotheses: bool = True
    coupler: Optional[Union[FlatCoupler, StratifiedCoupler]] = None

    def __post_init__(self):
        if not isinstance(self.params, ModelParams):
            raise TypeError(
                f"`params` must be a ModelParams, but got type {type(self.params)} instead."
            )
        if self.budget < 1:
            raise ValueError(f"`budget` must be positive, got {self.budget}.")
        if self.l < 0:
            raise ValueError(f"`l` must be nonnegative, got {self.l}.")

    def require(self, mode: str) -> None:
        """
        Checks the per-mode preconditions.

        Raises:
            ValueError: On an unknown mode or a missing model ingredient.
        """
        if mode not in MODES:
            raise ValueError(f"Unknown sampling mode {mode!r}; expected one of {MODES}.")
        if mode == "truncated" and not self.params.is_truncated:
            raise ValueError("The truncated mode needs `params.truncation`.")
        if mode != "truncated":
            if self.params.is_truncated:
                raise ValueError(f"The {mode} mode samples the unbounded model.")
            if self.schedule is None:
                raise ValueError(f"The {mode} mode needs a level schedule.")
            schedule = self.schedule
            if schedule.epsilon != self.params.epsilon or schedule.d != self.params.d:
                raise ValueError(
                    f"Schedule (epsilon={schedule.epsilon}, d={schedule.d}) does "
                    f"not match the model (epsilon={self.params.epsilon}, d={self.params.d})."
                )

    def get_coupler(self, mode: str):
        """The cached coupler of `mode`, built on first use."""
        if mode == "truncated":
            if not isinstance(self.coupler, FlatCoupler):
                self.coupler = FlatCoupler(self.params)
        elif self.params.epsilon != 0 and not isinstance(self.coupler, StratifiedCoupler):
            self.coupler = StratifiedCoupler(self.schedule)
        return self.coupler

    def build_sampler(self, store: MarkStore, mode: str, logger: logging.Logger = None):
        """One sampler of `mode` bound to `store`."""
        self.require(mode)
        coupler = self.get_coupler(mode)
        if mode == "truncated":
            return TruncatedSampler(
                store, coupler, budget=self.budget, force=self.force, logger=logger
            )
        if mode == "gaussian":
            return GaussianSampler(
                store,
                self.schedule,
                delta_fail=self.delta_fail,
                budget=self.budget,
                coupler=coupler,
                check_hypotheses=self.check_hypotheses,
                logger=logger,
            )
        return LDependentSampler(
            store, self.schedule, self.l, budget=self.budget, coupler=coupler, logger=logger
        )


def sample_window(
    store: MarkStore,
    window: Iterable[Sequence[int]],
    mode: Mode,
    options: SamplerOptions,
    logger: logging.Logger = None,
) -> FieldSample:
    """
    Samples every site of `window` against one store.

    Args:
        store (MarkStore): Mark source shared by the sites.
        window (Iterable[Sequence[int]]): Finite set of lattice points.
        mode (Mode): "truncated", "gaussian" or "ldep".
        options (SamplerOptions): Model and sampler options.
        logger (logging.Logger, optional): Logger instance.

    Returns:
        FieldSample: Values, per-site reports and meta (seed, marks revealed,
            max depth, mode).

    Raises:
        BudgetExceededError: Propagated from the site sampler.
        CertificateError: Propagated from the gaussian sampler.
    """
    sites = tuple(dict.fromkeys(tuple(int(c) for c in site) for site in window))
    if not sites:
        raise ValueError("The window must contain at least one site.")
    sampler = options.build_sampler(store, mode, logger=logger)
    values, reports = {}, []
    residual = 0.0
    for site in sites:
        result = sampler.sample(site)
        values[site] = result[0]
        reports.append(result[1])
        if len(result) == 3:
            residual += result[2].residual
    meta = {
        "seed": store.master_seed,
        "mode": mode,
        "marks_revealed": sum(report.marks_revealed for report in reports),
        "marks_generated": store.marks_generated,
        "max_depth": max(report.depth for report in reports),
    }
    if mode == "gaussian":
        meta["certificate_residual"] = residual
    if mode == "ldep":
        meta["l"] = options.l
    return FieldSample(sites, values, meta, tuple(reports))
