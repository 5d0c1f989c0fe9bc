"""Green function, Robin function, and Poisson kernels of the n-dimensional
annulus {a < |x| < 1}, evaluated through zonal-harmonic series with certified
truncation tails, plus the location of the Robin function's unique radial
critical point and a set of independent brute-force oracles."""

from .core import (
    AnnulusError,
    AnnulusGeometry,
    BracketingError,
    DEFAULT_POLICY,
    DomainValidationError,
    EvalResult,
    GridEdgeError,
    Point,
    QuadratureDegreeError,
    SeriesDivergenceError,
    SingularityError,
    TailEnvelopeError,
    TruncationPolicy,
    newtonian_potential,
    sphere_surface_area,
)
from .critical import (
    CriticalPointReport,
    concentration_root,
    count_gradient_sign_changes,
    find_critical_point,
    refine_critical_point,
)
from .green import (
    critical_equation_eval,
    green_eval,
    green_piecewise_eval,
    modal_coefficient,
    robin2d_eval,
    robin2d_first,
    robin2d_second,
    robin_eval,
    robin_radial_gradient,
    robin_radial_gradient_derivative,
)
from .kernels import (
    BoundaryData,
    SphereQuadrature,
    build_sphere_quadrature,
    harmonic_extension,
    newtonian_series_exterior,
    newtonian_series_inner,
    newtonian_series_outer,
    poisson_coeff_b,
    poisson_coeff_c,
)
from .oracle import (
    FDGrid,
    ModalOperator,
    ball_green_closed_form,
    grid_scan_extremum,
    modal_bvp_fd,
    modal_green_analytic,
    modal_green_fd,
)
from .specfun import (
    gegenbauer_endpoint_exact,
    gegenbauer_eval,
    gegenbauer_generating_partial_sum,
    gegenbauer_generating_sum,
    harmonic_space_dim,
    zonal_2d,
    zonal_direct,
    zonal_from_gegenbauer,
)
from .summation import sum_series

__version__ = "0.1.0"

__all__ = [
    "AnnulusError",
    "AnnulusGeometry",
    "BoundaryData",
    "BracketingError",
    "CriticalPointReport",
    "DEFAULT_POLICY",
    "DomainValidationError",
    "EvalResult",
    "FDGrid",
    "GridEdgeError",
    "ModalOperator",
    "Point",
    "QuadratureDegreeError",
    "SeriesDivergenceError",
    "SingularityError",
    "SphereQuadrature",
    "TailEnvelopeError",
    "TruncationPolicy",
    "ball_green_closed_form",
    "build_sphere_quadrature",
    "concentration_root",
    "count_gradient_sign_changes",
    "critical_equation_eval",
    "find_critical_point",
    "gegenbauer_endpoint_exact",
    "gegenbauer_eval",
    "gegenbauer_generating_partial_sum",
    "gegenbauer_generating_sum",
    "green_eval",
    "green_piecewise_eval",
    "grid_scan_extremum",
    "harmonic_extension",
    "harmonic_space_dim",
    "modal_bvp_fd",
    "modal_coefficient",
    "modal_green_analytic",
    "modal_green_fd",
    "newtonian_potential",
    "newtonian_series_exterior",
    "newtonian_series_inner",
    "newtonian_series_outer",
    "poisson_coeff_b",
    "refine_critical_point",
    "poisson_coeff_c",
    "robin2d_eval",
    "robin2d_first",
    "robin2d_second",
    "robin_eval",
    "robin_radial_gradient",
    "robin_radial_gradient_derivative",
    "sphere_surface_area",
    "sum_series",
    "zonal_2d",
    "zonal_direct",
    "zonal_from_gegenbauer",
]
