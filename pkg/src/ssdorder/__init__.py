"""Second-order stochastic dominance between order statistics.

Sufficient conditions for ``X_{i:n} >=_2 Y_{j:m}`` based on convex-transform
classes of the parent distribution, fractional-degree dominance between two
parents, numerical oracles, and a Monte Carlo test of H^{-1}-convexity.
"""

__version__ = "0.1.0"

from .catalog import (Family, Membership, ParametricDistribution, ParseError, class_membership,  # noqa: E402
                      member_classes, numeric_convexity, parse_distribution, parse_spec)
from .conditions import (DominanceVerdict, ParamRange, SearchError, corollary1, corollary2,  # noqa: E402
                         min_rank, param_range_search, scan_ranks)
from .convexity import (ConvexityTestResult, GcmResult, NodeConvention, NullDistribution,  # noqa: E402
                        TransformedEmpirical, convexity_test, gcm, ks_statistic, null_distribution,
                        power_study)
from .dominance import (CrossingReport, DominanceDegree, DominanceError, NotDominatedError,  # noqa: E402
                        PreconditionError, Sign, SsdResult, Verdict, cdf_crossings, dominance_degree,
                        maxima_mean, order_stat_cdf, order_stat_mean, sign_changes, ssd_numeric,
                        ssd_order_statistics)
from .reference import (ConvexityClass, OrderStatSpec, ReferenceTransform, TransformKind,  # noqa: E402
                        expected_transformed_beta)
from .special import beta_cdf, beta_pdf, digamma, harmonic_tail, log_gamma  # noqa: E402

__all__ = [name for name in dir() if not name.startswith("_")]
