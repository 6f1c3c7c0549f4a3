"""topofield: robust persistence diagrams of sampled scalar fields.

Recovers the sublevel-set persistence diagram of a scalar field from a finite
sample corrupted by geometric outliers and aberrant function values: distance
to the empirical measure filters the geometry, local regression (k-median or
minimum-disparity windows) repairs the values, and image persistence of a
nested pair of Rips complexes reads off the diagram.
"""
from ._accel import NUMBA_ENABLED
from .bottleneck import bottleneck_bruteforce, bottleneck_distance
from .core import (
    DenoisedSample,
    ManifoldParams,
    PersistenceDiagram,
    PersistencePair,
    ScalarSample,
    euclidean_distance,
    rng_from_seed,
)
from .denoise import (
    METHOD_DISPARITY,
    METHOD_KNN_MEAN,
    METHOD_MEDIAN,
    disparity,
    disparity_denoise,
    error_bound,
    kmedian_denoise,
    knn_mean_denoise,
)
from .dtm import (
    dtm_filter,
    dtm_self,
    dtm_value,
    dtm_values,
    k_from_mass,
    wasserstein2_empirical,
)
from .fileio import (
    FormatError,
    read_diagram_csv,
    read_points_csv,
    write_diagram_csv,
    write_diagram_svg,
    write_points_csv,
)
from .images import GrayImage, image_to_sample, psnr, rasterize_values, read_pgm, write_pgm
from .metrics import gap
from .neighbors import NeighborIndex, build, knn
from .noisegen import (
    Clutter,
    GaussianFunctional,
    GaussianGeometric,
    ImpulseConstant,
    ImpulseUniform,
    apply_noise,
    gaussian_delta_bound,
    sample_bone,
    sample_circle,
    volume_constant,
    wasserstein_epsilon_bound,
)
from .persistence import betti_numbers, diagram, image_diagram, rank_oracle
from .pipeline import PipelineConfig, eta_from_percentile, run_pipeline
from .rips import FilteredComplex, NestedPair, build_nested_pair, build_rips

__version__ = "0.1.0"
