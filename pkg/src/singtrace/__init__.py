"""Numerics for singular-value data of positive compact operators.

The toolkit computes decreasing rearrangements, weighted-mean
(Marcinkiewicz) norms, residue-type seminorms, averaged-trace limit bands,
zeta-function limits and heat-trace asymptotics, and cross-checks the
identities tying them together.  Hot summation kernels run through an
optional compiled extension with a bit-identical pure-Python fallback
(``singtrace._backend.BACKEND`` names the active one).
"""

from ._backend import BACKEND
from .corpus import (OscillatingSpectrum, RuleStepFunction, SmallIdealCurve,
                     gen_spectrum, load_spectrum, save_spectrum,
                     save_spectrum_csv)
from .errors import (DivergenceError, DomainMismatchError, HypothesisError,
                     InputError, NonMonotoneError, SchemaError,
                     SingtraceError, TailContinuityError,
                     UnsupportedInputError)
from .heat import (BetaFunction, HeatFitReport, HeatLimitReport, HeatProfile,
                   gamma, heat_asymptotic_fit, heat_profile,
                   heat_profile_limit, heat_trace, karamata_limit,
                   karamata_transform, shanks_extrapolate,
                   small_ideal_constant)
from .means import (LimitConfig, LimitEstimate, SampledFunction, TripleResult,
                    apply_transform, band_gap, cesaro_smooth, dixmier_estimate,
                    dixmier_triple, limit_estimate, weighted_mean_curve)
from .rearrange import (DistributionCurve, PowerTail, Spectrum, StepFunction,
                        decreasing_rearrangement, distribution_at,
                        distribution_function, mu_from_distribution,
                        partial_integral, pointwise_product,
                        submajorization_leq, truncated_trace)
from .spaces import (LOG_SQ, PSI_0, PSI_1, PsiFunction, SeminormReport,
                     SupResult, fundamental_function, make_psi,
                     marcinkiewicz_norm, marcinkiewicz_norm_from_one,
                     norm_convention_ratio, power_residue_seminorm,
                     psi_diagnostics, quasinorm, residue_seminorm,
                     weighted_mean)
from .zeta import (ZetaCurve, ZetaLimitReport, residue_estimate, zeta_limit,
                   zeta_value, zeta_vs_dixmier_check)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
