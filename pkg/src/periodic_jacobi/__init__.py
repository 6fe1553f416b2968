"""Orthogonal polynomials with period-N recurrence coefficients alpha_j = 2a cos(2 pi j / N).

Polynomial construction, band structure, the orthogonality measure, the
Stieltjes transform and the spectral densities of the associated doubly
infinite Jacobi matrix.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ConsistencyError,
    DomainError,
    ExtrapolationError,
    QuadratureError,
    TurningPointError,
)
from .poly import Poly  # noqa: E402
from .recurrence import (  # noqa: E402
    Discriminant,
    RecurrenceSpec,
    build_polys,
    chebyshev_shift_check,
    discriminant,
    eval_P,
    eval_P_deriv,
    eval_P_star,
    ratio_asymptotics,
    symmetry_check,
    transfer_trace,
)
from .bands import (  # noqa: E402
    BandStructure,
    ConjectureReport,
    ZeroSets,
    conjecture_scan,
    tridiag_eigs,
    turning_points,
    zero_sets,
)
from .measure import (  # noqa: E402
    OrthogonalityMeasure,
    gram_matrix,
    integrate_band,
    masses,
    orthogonality_measure,
    stieltjes_numeric,
    total_mass,
    weight,
)
from .spectral import (  # noqa: E402
    BranchedSqrt,
    SpectralDensities,
    phi_cf,
    phi_closed,
    plemelj_extract,
    quadratic_residual,
    resolvent_entries,
    spectral_densities,
)
from .verify import (  # noqa: E402
    TruncatedSeries,
    functional_equation,
    genfun_identity,
    tail_recursion_check,
)

__all__ = [name for name in dir() if not name.startswith("_")]
