"""Computational core for building surfaces out of nearly flat pairs of pants in PSL(2, C)."""

from surfacekit.errors import GeometryError
from surfacekit.psl2c import (
    INF,
    H3Point,
    Isometry,
    OrientedGeodesic,
    UnitDetMatrix,
    axis,
    cartan_kak,
    common_perpendicular,
    frame_apply,
    quasi_distance,
    translation_length,
)
from surfacekit.pants import (
    CuffTorus,
    Foot,
    MarkedPants,
    foot,
    half_lengths_of,
    is_flat,
    is_futal,
    pants_rep,
    triple_involution,
    triple_rot,
)
from surfacekit.assembly import (
    build_graph,
    crossing_count,
    extract_shear,
    glue,
    injectivity_certificate,
    theta_surface,
)
from surfacekit.measures import (
    AtomicMeasure,
    construct_involution,
    delta_close,
    equidistributed,
    hall_match,
)
from surfacekit.tripods import (
    exact_tripod_pants,
    foot_gap,
    g_r_cartan_sweep,
    margulis_search,
    varpi_foot,
    xi_harish_chandra,
)

__all__ = [
    "AtomicMeasure",
    "build_graph",
    "construct_involution",
    "crossing_count",
    "delta_close",
    "equidistributed",
    "exact_tripod_pants",
    "extract_shear",
    "foot_gap",
    "g_r_cartan_sweep",
    "glue",
    "hall_match",
    "injectivity_certificate",
    "margulis_search",
    "theta_surface",
    "varpi_foot",
    "xi_harish_chandra",
    "INF",
    "CuffTorus",
    "Foot",
    "GeometryError",
    "H3Point",
    "Isometry",
    "MarkedPants",
    "OrientedGeodesic",
    "UnitDetMatrix",
    "axis",
    "cartan_kak",
    "common_perpendicular",
    "foot",
    "frame_apply",
    "half_lengths_of",
    "is_flat",
    "is_futal",
    "pants_rep",
    "quasi_distance",
    "translation_length",
    "triple_involution",
    "triple_rot",
]

__version__ = "0.1.0"
