"""Numerical workbench for transversality quantities of discrete
hypersurfaces: exact and Monte Carlo tuple sums, cover refinements,
projection bodies and mixed volumes, visibility functionals, Lewis
positions, and a registry of named inequality checks with uniform
machine-readable reports."""

from .constants import ConstantsCatalog, ball_volume
from .geom_core import (
    DEGENERATE_DET,
    GramMatrix,
    VectorTuple,
    local_identity_residual,
    rho_factor,
    unit_directions,
    wedge_norm,
)
from .hypersurface import (
    CoverValidation,
    DiscreteHypersurface,
    UniformCover,
    load_surface,
    make_axis_cross,
    make_sheared_cube,
    random_surface,
    sample_sphere_uniform,
    save_surface,
    surface_from_dict,
    validate_cover,
)
from .inequality_lab import (
    CHECK_IDS,
    SuiteResult,
    default_suite_config,
    run_check,
    run_suite,
    write_report_csv,
    write_report_json,
)
from .lewis import (
    IsotropyDefect,
    LewisResult,
    det_u_lower_bound,
    isotropy_defect,
    lewis_p2_closed_form,
    lewis_solve,
)
from .reports import CheckReport, fingerprint, make_report, verdict_eq, verdict_leq
from .transversality import (
    QEstimate,
    finner_check,
    i_p,
    i_p_uniform_closed_form,
    jp_bound_check,
    moment_norm_sq,
    q_exact,
    q_montecarlo,
    resolve_workers,
    uniform_moment_norm_sq,
)
from .volumes import (
    EllipsoidBody,
    VisEstimate,
    VolumeEstimate,
    covariance,
    kp_norm,
    kp_volume,
    polar_zonotope_volume,
    santalo_check,
    sigma2_plane,
    sigma2_plane_direct,
    vis_p,
)
from .zonotope import (
    Ball,
    Zonotope,
    bezout_check,
    mixed_volume,
    project_zonotope,
    projection_body,
    sigma_plane,
    sigma_plane_direct,
    zonotope_volume,
)

__version__ = "0.1.0"

__all__ = [
    "Ball",
    "CHECK_IDS",
    "CheckReport",
    "ConstantsCatalog",
    "CoverValidation",
    "DEGENERATE_DET",
    "DiscreteHypersurface",
    "EllipsoidBody",
    "GramMatrix",
    "IsotropyDefect",
    "LewisResult",
    "QEstimate",
    "SuiteResult",
    "UniformCover",
    "VectorTuple",
    "VisEstimate",
    "VolumeEstimate",
    "Zonotope",
    "ball_volume",
    "bezout_check",
    "covariance",
    "default_suite_config",
    "det_u_lower_bound",
    "fingerprint",
    "finner_check",
    "i_p",
    "i_p_uniform_closed_form",
    "isotropy_defect",
    "jp_bound_check",
    "kp_norm",
    "kp_volume",
    "lewis_p2_closed_form",
    "lewis_solve",
    "load_surface",
    "local_identity_residual",
    "make_axis_cross",
    "make_report",
    "make_sheared_cube",
    "mixed_volume",
    "moment_norm_sq",
    "polar_zonotope_volume",
    "project_zonotope",
    "projection_body",
    "q_exact",
    "q_montecarlo",
    "random_surface",
    "resolve_workers",
    "rho_factor",
    "run_check",
    "run_suite",
    "sample_sphere_uniform",
    "santalo_check",
    "save_surface",
    "sigma2_plane",
    "sigma2_plane_direct",
    "sigma_plane",
    "sigma_plane_direct",
    "surface_from_dict",
    "uniform_moment_norm_sq",
    "unit_directions",
    "validate_cover",
    "vis_p",
    "verdict_eq",
    "verdict_leq",
    "wedge_norm",
    "write_report_csv",
    "write_report_json",
    "zonotope_volume",
]
