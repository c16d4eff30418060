"""ε-complexity (packing numbers), dual ε-complexity (covering numbers) and
complexity measures on finite metric spaces."""

from .metric import (
    Ball,
    FiniteMetricSpace,
    MetricError,
    PointMap,
    ball,
    bowen_space,
    build_euclidean,
    build_from_matrix,
    check_isometry,
    disjoint_union,
    is_ultrametric,
    verify_metric_axioms,
)
from .solvers import (
    CapExceeded,
    ComplexityProfile,
    ComplexityResult,
    b_eps,
    check_subadditivity,
    complexity_profile,
    local_packing_bound,
    max_separated_exact,
    max_separated_greedy,
    min_net_exact,
    min_net_greedy,
)
from .matching import (
    BipartiteInstance,
    HallFailure,
    kx_partition,
    max_matching,
    net_injection,
    optimal_separated_bijection,
)
from .measures import (
    EpsilonSchedule,
    TestFunction,
    dimension_estimate,
    estimate_measure,
    functional_I,
    functional_I_dual,
    independence_gap,
    indicator,
    invariance_gap,
    modulus_of_continuity,
    mu_nu_comparison,
)

__version__ = "0.1.0"
