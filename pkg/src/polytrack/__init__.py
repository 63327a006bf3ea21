"""polytrack: synthesis and analysis of linear gradient algorithms that track
polynomially time-varying optima of quadratic costs at the optimal worst-case
geometric rate."""

__version__ = "0.1.0"

from .algoform import (
    AlgorithmParams,
    TransferModel,
    build_transfer,
    characteristic_polynomial,
    integrator_count,
    params_from_transfer,
    tracking_condition_holds,
    validate,
)
from .npick import (
    GainMarginProblem,
    PickMatrixReport,
    blaschke_interpolant,
    feasibility_limit,
    pick_matrix,
    sector_disk_map,
    sector_disk_map_inverse,
)
from .poly import (
    RealPolynomial,
    RootSet,
    binomial_power,
    falling_factorial,
    poly_mul,
    poly_roots,
    root_multiplicity_at,
    stirling_second,
    ztransform_power_numerator,
)
from .rate import (
    RateReport,
    heavy_ball_params,
    rate_lower_bound,
    spectral_radius_at,
    sup_rate,
)
from .sim import (
    QuadraticCostSpec,
    TrajectoryTrace,
    gradient,
    gradient_descent_params,
    optimum_at,
    run,
    run_shifted,
    steady_state_error,
)
from .synth import (
    SynthesisReport,
    compensator_constants,
    heavy_ball_rate,
    optimal_rate,
    synthesize,
)

__all__ = [
    "AlgorithmParams",
    "GainMarginProblem",
    "PickMatrixReport",
    "QuadraticCostSpec",
    "RateReport",
    "RealPolynomial",
    "RootSet",
    "SynthesisReport",
    "TrajectoryTrace",
    "TransferModel",
    "binomial_power",
    "blaschke_interpolant",
    "build_transfer",
    "characteristic_polynomial",
    "compensator_constants",
    "falling_factorial",
    "feasibility_limit",
    "gradient",
    "gradient_descent_params",
    "heavy_ball_params",
    "heavy_ball_rate",
    "integrator_count",
    "optimal_rate",
    "optimum_at",
    "params_from_transfer",
    "pick_matrix",
    "poly_mul",
    "poly_roots",
    "rate_lower_bound",
    "root_multiplicity_at",
    "run",
    "run_shifted",
    "sector_disk_map",
    "sector_disk_map_inverse",
    "spectral_radius_at",
    "steady_state_error",
    "stirling_second",
    "sup_rate",
    "synthesize",
    "tracking_condition_holds",
    "validate",
    "ztransform_power_numerator",
]
