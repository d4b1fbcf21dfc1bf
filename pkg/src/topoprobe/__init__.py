"""Topology and geometry of point clouds.

Vietoris-Rips persistent homology in degrees 0 and 1, power-weighted
lifespan descriptors, the persistent-homology fractal dimension, three
classical intrinsic-dimension estimators, and trajectory/correlation
analysis over neural-embedding manifests.
"""

from ._backend import BACKEND
from .classical import IdEstimate, corr_dim, mle_id, two_nn
from .cloud import (
    DistanceMatrix,
    PointCloud,
    load_point_cloud,
    pairwise_distances,
    save_point_cloud,
    subsample,
)
from .descriptors import DescriptorValue, lifespan_sum
from .persistence import (
    AUTO,
    INFINITE,
    Barcode,
    PersistenceInterval,
    brute_force_persistence,
    enclosing_radius,
    mst_h0,
    vr_persistence,
)
from .phdim import (
    PhDimConfig,
    PhDimEstimate,
    default_sample_sizes,
    estimate_phdim,
    fit_power_law,
)
from .trajectory import (
    MEASURES,
    CorrelationResult,
    EmbeddingManifest,
    EpochAccuracy,
    ManifestEntry,
    SeriesRow,
    TrajectoryReport,
    gengap_correlate,
    layer_trajectory,
    load_manifest,
    pearson,
)

__version__ = "0.1.0"

__all__ = [
    "AUTO",
    "BACKEND",
    "Barcode",
    "CorrelationResult",
    "DescriptorValue",
    "DistanceMatrix",
    "EmbeddingManifest",
    "EpochAccuracy",
    "IdEstimate",
    "INFINITE",
    "MEASURES",
    "ManifestEntry",
    "PersistenceInterval",
    "PhDimConfig",
    "PhDimEstimate",
    "PointCloud",
    "SeriesRow",
    "TrajectoryReport",
    "brute_force_persistence",
    "corr_dim",
    "default_sample_sizes",
    "enclosing_radius",
    "estimate_phdim",
    "fit_power_law",
    "gengap_correlate",
    "layer_trajectory",
    "lifespan_sum",
    "load_manifest",
    "load_point_cloud",
    "mle_id",
    "mst_h0",
    "pairwise_distances",
    "pearson",
    "save_point_cloud",
    "subsample",
    "two_nn",
    "vr_persistence",
    "__version__",
]
