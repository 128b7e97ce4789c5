"""Set-valued Fréchet means and medoids on finite metric spaces.

Exhaustive solvers for Fréchet p-means, restricted means (medoids) and
joint means over candidate sets, Hausdorff/Kuratowski set-convergence
diagnostics, a seeded Monte Carlo harness for empirical mean sets and a
brute-force large-deviations rate function.
"""

from .config import ExperimentConfig
from .equivalence import Partition, equivalence_classes, t2_slln_hypothesis
from .errors import (
    EmptyDomainError,
    EmptySetError,
    FrechetSetsError,
    InvalidKernelError,
    InvalidMeasureError,
    InvalidMetricError,
)
from .frechet import (
    FrechetResult,
    frechet_mean,
    in_restricted_voronoi_cell,
    in_voronoi_cell,
    medoid,
    peter_paul_constant,
)
from .ldp import SimplexGrid, rate_function, rate_function_table, sublevel_sets, tail_decay_diagnostic
from .measures import (
    DiscreteMeasure,
    dirac,
    empirical_measure,
    f_p,
    from_atoms,
    relative_entropy,
    support,
    track_tau_wp,
    uniform,
    wasserstein_to_dirac,
)
from .metric import (
    MetricSpace,
    SpaceSpec,
    build_space,
    circle_grid,
    discrete,
    from_matrix,
    interval_grid,
    random_metric,
    star,
    validate_metric,
)
from .sampling import (
    MarkovKernel,
    TrajectoryRecord,
    replicate,
    run_slln,
    sample_iid,
    sample_markov,
    stationary_distribution,
)
from .sets import (
    LimitEstimate,
    PointSet,
    detect_convergence,
    hausdorff,
    kuratowski_limits,
    rho,
)

__version__ = "0.1.0"
