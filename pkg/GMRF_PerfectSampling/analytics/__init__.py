# pylint: disable=C0114
from .normal import (
    TruncatedNormal,
    bisect_inverse,
    interval_mass,
    std_normal_cdf,
    std_normal_pdf,
    std_normal_quantile,
    trunc_cdf,
    trunc_quantile,
)
from .coupling_mass import (
    eta_truncated,
    gamma_tilde,
    gamma_tilde_exact,
    gamma_truncated,
    gamma_unbounded,
    inf_endpoint_density,
    inf_truncated_density,
    lipschitz_eta_bound,
)
from .covariance import (
    CovarianceQuery,
    covariance,
    dense_covariance,
    dense_covariance_entry,
    series_length,
)
from .bounds import (
    certificate_tail,
    certification_depth,
    check_h2,
    gaussian_tail_bound,
)
