"""On-line nearest-neighbour graphs in the unit cube.

Construction of the graph and its rooted 1-D variants, exact moment
formulas for the power-weighted total edge length, samplers for the
limiting distributions defined by recursive fixed-point equations, and
a seeded Monte Carlo harness that verifies all of it.
"""

from .errors import DomainError, NonConvergenceError, OngraphError, ResourceCapError
from .fixedpoint import (RdeMoments, RdeSample, RdeSpec, draw_many, make_spec,
                         moments_by_quadrature, sample_G, sample_H, sample_J)
from .graphs import (IncrementTrace, OngGraph, PointSequence, build_ong,
                     increments, nn_directed_total, total_weight,
                     write_edge_csv)
from .moments import (EULER_GAMMA, J_n_alpha, MomentReport, T_n_moment,
                      V_alpha, expected_nn_weight, expected_ong_weight,
                      increment_scaling_constant, j_alpha, lln_constant,
                      mean_variant_gap, rde_mean, unit_ball_volume,
                      var_nn_weight)
from .montecarlo import (DensityEstimate, ExperimentConfig, ExperimentReport,
                         KsResult, appendix_diagnostics, centred_ong_sample,
                         estimate_density, ks_critical_value, ks_statistic,
                         run_experiment)
from .spacings import (joint_spacing_moment, sample_spacings,
                       sample_spacings_many, spacing_density, spacing_moment)
from .specfun import gamma_ratio, hyp2f1, log_gamma

__version__ = "0.1.0"

__all__ = [
    "DomainError", "NonConvergenceError", "OngraphError", "ResourceCapError",
    "RdeMoments", "RdeSample", "RdeSpec", "draw_many", "make_spec",
    "moments_by_quadrature", "sample_G", "sample_H", "sample_J",
    "IncrementTrace", "OngGraph", "PointSequence", "build_ong", "increments",
    "nn_directed_total", "total_weight", "write_edge_csv",
    "EULER_GAMMA", "J_n_alpha", "MomentReport", "T_n_moment", "V_alpha",
    "expected_nn_weight", "expected_ong_weight", "increment_scaling_constant",
    "j_alpha", "lln_constant", "mean_variant_gap", "rde_mean",
    "unit_ball_volume", "var_nn_weight",
    "DensityEstimate", "ExperimentConfig", "ExperimentReport", "KsResult",
    "appendix_diagnostics", "centred_ong_sample", "estimate_density",
    "ks_critical_value", "ks_statistic", "run_experiment",
    "joint_spacing_moment", "sample_spacings", "sample_spacings_many",
    "spacing_density", "spacing_moment",
    "gamma_ratio", "hyp2f1", "log_gamma",
    "__version__",
]
