"""Cantor-circle Julia sets of parabolic rational maps.

Construct the explicit map families whose Julia sets are Cantor sets of
circles, solve their parabolic coefficient systems in extended precision,
certify the trap/critical-point structure, render basin rasters, trace Julia
components by symbolic itinerary, and classify components as quasicircles.
"""

from .errors import (
    CantorCirclesError,
    CertificateFailed,
    ConstraintViolated,
    ContinuationBreakdown,
    DegenerateCurve,
    DegenerateDenominator,
    DerivativeUnderflow,
    NonConvergence,
    OrbitEscaped,
    OutOfBand,
    SeedNotFound,
    SingularJacobian,
    Undecidable,
)
from .numerics import (
    INFINITY,
    Dual,
    Pole,
    PrecisionContext,
    newton_root,
    newton_system,
)
from .families import (
    DegreeVector,
    MapSpec,
    RingParameters,
    coefficients_P,
    effective_s,
    evaluate,
    evaluate_value,
    explicit_rings,
    make_f_map,
    make_p_map,
    make_q_map,
    make_r_map,
    make_schedule,
    rational_degree,
    ref_poly_g,
    ref_poly_gmn,
    ref_rat_h,
    ref_rat_hmn,
    spec_from_json,
    spec_to_json,
    validate_degrees,
)
from .solver import (
    CoefficientSolution,
    asymptotic_regression,
    build_q_map,
    build_r_map,
    q_system,
    r_system,
    residual_q,
    residual_r,
    solve_q,
    solve_r,
)
from .certify import (
    Annulus,
    Disk,
    DiskComplement,
    canonical_traps,
    certify_canonical_traps,
    certify_critical_points,
    certify_trapping,
    check_parabolic,
    limit_map_deviation,
    reference_critical_points,
)
from .dynamics import (
    BasinLabel,
    BasinTag,
    LabelGrid,
    Viewport,
    classify_array,
    classify_point,
    render,
    write_ppm,
)
from .symbolic import (
    NOT_QUASICIRCLE,
    QUASICIRCLE,
    ComponentCurve,
    ItineraryWord,
    classify_itinerary,
    classify_run_lengths,
    itinerary_of_point,
    parse_word,
    pull_back_curve,
    shift,
    symbol_of,
    trace_component,
    turning_constant,
)

__version__ = "0.1.0"
