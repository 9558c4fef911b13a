"""
Errors module
=============

Exception hierarchy shared by the samplers, couplers and hypothesis checkers.
Argument validation keeps raising plain `TypeError`/`ValueError`; the classes
below flag failures that carry domain diagnostics.
"""
from typing import Any, Dict, Optional


class PerfectSamplingError(Exception):
    """Base class of every domain failure raised by the package."""


class ScheduleError(PerfectSamplingError, ValueError):
    """A level schedule is invalid or fails one of the hypotheses gates."""


class CouplingError(PerfectSamplingError, ValueError):
    """An update function was called outside its contract."""


class BudgetExceededError(PerfectSamplingError, RuntimeError):
    """
    The exploration revealed more marks than the configured budget.

    Attributes:
        report (Any): Partial report of the exploration (a `CodingReport` when
            raised by a sampler, a statistics dictionary when raised by the cone).
    """

    def __init__(self, message: str, report: Optional[Any] = None) -> None:
        super().__init__(message)
        self.report = report


class CertificateError(PerfectSamplingError, RuntimeError):
    """
    The dryness certificate could not be obtained within the depth limit.

    Attributes:
        diagnostics (Dict[str, Any]): Wet-region size, deepest wet mark, depths.
    """

    def __init__(self, message: str, diagnostics: Optional[Dict[str, Any]] = None) -> None:
        super().__init__(message)
        self.diagnostics = diagnostics or {}
