"""Convex-layer peeling, evenly distributed point sets and layer-number experiments."""

__version__ = "0.1.0"

from ._jit import JIT_ENABLED
from .evenness import (
    BallWitness,
    EvennessReport,
    beta_for_alpha,
    certify_min_distance,
    check_evenness,
    f_d,
    probe_evenness,
    verify_witness,
)
from .experiments import ExperimentRecord, ExponentFit, check_claim, fit_exponent, run_sweep
from .generators import OnionParams, gen_collinear, gen_convex_position, gen_grid, gen_onion, gen_uniform_ball
from .geom import (
    GeometryError,
    Orientation,
    PointSet,
    PointSetFormatError,
    min_pairwise_distance,
    orientation,
    parse_point_set,
    point_set,
    read_point_set,
    write_point_set,
)
from .peeling import CapDiagnostic, LayerAssignment, cap_diagnostic, extreme_points, layer_number, peel, peel_step

__all__ = [
    "JIT_ENABLED",
    "BallWitness",
    "CapDiagnostic",
    "EvennessReport",
    "ExperimentRecord",
    "ExponentFit",
    "GeometryError",
    "LayerAssignment",
    "OnionParams",
    "Orientation",
    "PointSet",
    "PointSetFormatError",
    "beta_for_alpha",
    "cap_diagnostic",
    "certify_min_distance",
    "check_claim",
    "check_evenness",
    "extreme_points",
    "f_d",
    "fit_exponent",
    "gen_collinear",
    "gen_convex_position",
    "gen_grid",
    "gen_onion",
    "gen_uniform_ball",
    "layer_number",
    "min_pairwise_distance",
    "orientation",
    "parse_point_set",
    "peel",
    "peel_step",
    "point_set",
    "probe_evenness",
    "read_point_set",
    "run_sweep",
    "verify_witness",
    "write_point_set",
]
