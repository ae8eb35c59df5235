"""Nagata idealization, derivation-twisted subrings and finite-precision checks."""

from .core import (AtLeast, CoefficientField, FiniteAlgebra, FiniteModule, LaurentSeries, LocalFraction,
                   Polynomial, SmithForm, Subspace, TruncatedSeries, liouville, smith_normal_form)
from .core.kernels import BACKEND
from .errors import BoundsError, DslError, PrecisionError
from .idealization import (IdealizationElement, IdealizationRing, embedding_dimension, ideal_span,
                           local_idealization_model, quotient_model, star_mul)
from .derivations import DerivationSpec, check_linearity, derive, factor_through, kahler_presentation
from .twisted import (CheckResult, GlobalStableSpec, MembershipVerdict, Scenario, alpha_iso_check,
                      analytic_iso_check, global_stable_instance, intermediate_correspondence,
                      kq_generators, one_case_check, ring_closure_check)
from .extensions import (ExtensionInstance, contract_extend, generator_bound, induced_quotient_map,
                         is_c_analytic, is_quadratic)
from .dvr import (DvrModel, DvrModulePresentation, is_stable_ideal, minimal_generators, quotient_freeness,
                  tffr_rank)

__version__ = "0.1.0"
