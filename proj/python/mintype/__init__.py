"""Critical points of pointwise minima of convex quadratics."""

from ._mintype import (
    ActiveSet,
    Box,
    Classification,
    ConvexQuadratic,
    CriticalPoint,
    Family,
    LowerLinkProfile,
    MintypeError,
    PieceId,
    Tolerances,
    TrackedFamily,
    ValidationReport,
    active_set,
    apply_scaling,
    classify_gradients,
    classify_point,
    default_region,
    directional_derivative,
    euler_sweep,
    evaluate_min,
    family_to_json,
    find_all_critical,
    has_increase_direction,
    levelset_svg,
    load_family,
    lower_link_profile,
    perturb_and_track,
    read_family,
    span_rank,
    stability_radius,
    sweep_consistent,
    validate_family,
    write_family,
)

__version__ = "0.1.0"
