"""Subsets of the lattice cube [n]^d with no d+2 points on a common sphere
or hyperplane: exact construction, verification and counting.

All geometry is integer arithmetic on homogeneous lifted coordinates
(1, p, |p|^2); nothing here rounds or overflows.  A compiled kernel module
is used when available, with a pure-Python fallback selected at import time
(see latticeset.backend.BACKEND).
"""

from ._rng import GENERATOR_ID, draw, sample_indices, substream, threshold_for
from .analysis import (HyperplanePoints, RichSurfaceHistogram,
                       ViolationWitness, count_cohyperplanar_tuples,
                       count_traces, crossing_count, find_violations,
                       lattice_points_on_hyperplane, lattice_points_on_sphere,
                       rich_surface_histogram, sauer_shelah_bound, trace_sets,
                       violating_tuples)
from .backend import BACKEND
from .constructions import (METHODS, ConstructionReport, choose_D,
                            deletion_refine, greedy_construct, moment_curve,
                            random_sample, theorem1_pipeline)
from .geometry import (POINTSET_FORMAT, GeneralizedSphere, GridPartition,
                       Point, PointSet, canonicalize, grid_partition,
                       in_general_position, is_cohyperplanar,
                       is_cospherical_or_cohyperplanar, largest_prime_leq,
                       lift, on_surface, pointset_from_json, pointset_to_json,
                       sphere_from_key, sphere_through)
from .vc import REASONS, VcRefutation, vc_refute

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ConstructionReport",
    "GENERATOR_ID",
    "GeneralizedSphere",
    "GridPartition",
    "HyperplanePoints",
    "METHODS",
    "POINTSET_FORMAT",
    "Point",
    "PointSet",
    "REASONS",
    "RichSurfaceHistogram",
    "VcRefutation",
    "ViolationWitness",
    "canonicalize",
    "choose_D",
    "count_cohyperplanar_tuples",
    "count_traces",
    "crossing_count",
    "deletion_refine",
    "draw",
    "find_violations",
    "greedy_construct",
    "grid_partition",
    "in_general_position",
    "is_cohyperplanar",
    "is_cospherical_or_cohyperplanar",
    "largest_prime_leq",
    "lattice_points_on_hyperplane",
    "lattice_points_on_sphere",
    "lift",
    "moment_curve",
    "on_surface",
    "pointset_from_json",
    "pointset_to_json",
    "random_sample",
    "rich_surface_histogram",
    "sample_indices",
    "sauer_shelah_bound",
    "sphere_from_key",
    "sphere_through",
    "substream",
    "theorem1_pipeline",
    "threshold_for",
    "trace_sets",
    "vc_refute",
    "violating_tuples",
]
