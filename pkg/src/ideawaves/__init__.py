"""Feedback SIRS model of idea-popularity cycles and tools to compare it with search-volume data."""

__version__ = "0.1.0"

from .model import (  # noqa: E402
    CubicCoeffs,
    DomainError,
    FixedPoint,
    Params,
    State,
    char_poly_at,
    char_poly_fixed_point,
    endemic_equilibrium,
    fixed_point,
    fixed_point_restricted,
    flow,
    jacobian,
)
from .stability import (  # noqa: E402
    RegionLabel,
    cardano_reduce,
    classify_region,
    eigenvalues_at_fixed_point,
    hopf_alpha,
    is_locally_unstable,
    locate_hopf,
    stability_map,
)
from .integrator import (  # noqa: E402
    CycleInfo,
    Converged,
    IntegrationError,
    Trajectory,
    Undecided,
    detect_asymptotics,
    hopf_sweep,
    simulate,
    step_rk4,
)
from .timeseries import (  # noqa: E402
    Decomposition,
    WeeklySeries,
    decompose,
    dtw,
    normalize_unit_range,
    random_walk,
)
from .pipeline import (  # noqa: E402
    ComparisonRecord,
    FitConfig,
    Report,
    best_model_fit,
    load_trends_csv,
    model_candidate_series,
    random_walk_baseline,
    run_report,
)
