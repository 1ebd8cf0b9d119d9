"""Biparametric Fisher-Renyi complexity of one-dimensional densities.

The complexity ``C = K_FR(p, lam) * phi_{p,lam}[rho] * N_lam[rho]`` combines
a generalized Fisher information with the Renyi entropy power; it is at least
one and equals one on the generalized Gaussian family. The blackbody density
in ``d`` dimensions has a closed-form/series path in :mod:`.blackbody`.
"""

from .blackbody import (a_f_closed, a_f_quadrature, a_f_standard, a_r, a_r_quadrature,
                        blackbody_constants, complexity_analytic, complexity_report,
                        fisher_analytic, i_integral, renyi_analytic)
from .charts import chart, line_extrema
# ``blackbody`` and ``complexity`` are left as submodule names here;
# the functions of the same name live in .density and .complexity.
from .complexity import (ComplexityReport, complexity_infty, fisher_shannon,
                         mono_from_bi, replication_factor_check, require_valid, validate_params)
from .density import (BlackbodySpec, DensityModel, GenGaussianSpec, StepDensity, affine,
                      gaussian, gen_gaussian, permute_heights, replicate, step_model, uniform)
from .errors import AccuracyError, BracketError, CompositionError, DomainError
from .measures import (ParamPair, disequilibrium, fisher_biparam, fisher_total_variation,
                       renyi_entropy, renyi_power, shannon_entropy)
from .quadrature import QuadConfig, QuadResult, integrate
from .reference import k_fr, reference_constants

__version__ = "0.1.0"

__all__ = [
    "a_f_closed", "a_f_quadrature", "a_f_standard", "a_r", "a_r_quadrature", "blackbody_constants",
    "complexity_analytic", "complexity_report", "fisher_analytic", "i_integral", "renyi_analytic",
    "chart", "line_extrema", "ComplexityReport", "complexity_infty", "fisher_shannon",
    "mono_from_bi", "replication_factor_check", "require_valid", "validate_params", "BlackbodySpec",
    "DensityModel", "GenGaussianSpec", "StepDensity", "affine", "gaussian", "gen_gaussian",
    "permute_heights", "replicate", "step_model", "uniform", "AccuracyError", "BracketError",
    "CompositionError", "DomainError", "ParamPair", "disequilibrium", "fisher_biparam",
    "fisher_total_variation", "renyi_entropy", "renyi_power", "shannon_entropy", "QuadConfig",
    "QuadResult", "integrate", "k_fr", "reference_constants",
]
