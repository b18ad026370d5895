"""Copula-based kernel dependence measures.

The dependence of a random vector is measured as the maximum mean
discrepancy between its copula and the uniform distribution on the unit
cube, estimated from coordinatewise ranks.
"""
from ._kernels import BACKEND
from .copula import SampleMatrix, dkw_epsilon, empirical_copula_transform, jitter, rank
from .dependence import (DependenceEstimate, UniformSample, dep_biased, dep_raw_mmd,
                         dep_semi_analytic_sq, dep_unbiased_sq, estimate, shuffle_product)
from .embed import EmbeddingResult, classical_mds, dependence_distances, embed_profile
from .errors import (ConfigError, CopulaMMDError, DataError, NumericalInconsistencyError,
                     SemiAnalyticUnsupportedError)
from .inference import TestResult, bound_threshold, independence_test_permutation
from .kernel import DEFAULT_SIGMA, GaussianKernel, Kernel, LaplaceKernel, make_kernel
from .mmd import mmd_biased, mmd_unbiased_sq
from .select import (DependenceProfile, SelectionResult, build_profile, exhaustive_select,
                     max_relevance, mrmr_select)

__version__ = "0.1.0"
