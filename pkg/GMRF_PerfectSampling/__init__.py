# pylint: disable=C0114, C0103
from .errors import *
from .model import *
from .analytics import *
from .coupling import *
from .marks import *
from .sampling import *
from .particles import *
from .validation import *
from .validation.acceptance import (
    CRITERIA,
    REFERENCE_SCHEDULE,
    TRUNCATED_REFERENCE,
    SuiteSettings,
    approximation_replica,
    run_suite,
    select_criteria,
)
from .cli import *
