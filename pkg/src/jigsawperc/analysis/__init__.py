"""Exact identities, discrete distributions and the bottleneck equation."""

from .bottleneck import (
    BottleneckReport,
    NoRootError,
    bottleneck_report,
    bottleneck_residual,
    bottleneck_root,
    threshold_N,
)
from .distributions import (
    DiscreteDist,
    binomial_domination_grid,
    convolve,
    cutoff,
    dominates,
    make_binomial,
    make_truncated_poisson,
    point_mass,
    poisson_sum_grid,
)
from .identities import (
    chu_vandermonde_check,
    infinite_sum_bound_holds,
    infinite_sum_closed_form,
    partial_sum_identity_check,
    stirling_bounds_check,
)
