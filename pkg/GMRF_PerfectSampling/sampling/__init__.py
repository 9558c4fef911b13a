# pylint: disable=C0114
from .collection import CodingReportCollection
from .gaussian import (
    GaussianSampler,
    LDependentSampler,
    iid_value,
    sample_gaussian,
    sample_l_dependent,
    validate_schedule,
)
from .reports import CodingReport, DrynessCertificate, FieldSample
from .runner import WORKERS_ENV, ReplicaRunner, replica_seed, worker_count
from .truncated import TruncatedSampler, sample_truncated
from .window import MODES, SamplerOptions, sample_window
