"""The combined three-step recovery: filter geometric outliers by distance to
the empirical measure, denoise the observed values on the surviving points,
then read the persistence diagram off the nested Rips pair."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import DenoisedSample, PersistenceDiagram, ScalarSample
from .denoise import (
    METHOD_DISPARITY,
    METHOD_KNN_MEAN,
    METHOD_MEDIAN,
    METHODS,
    check_disparity_params,
    disparity_denoise,
    kmedian_denoise,
    knn_mean_denoise,
)
from .dtm import dtm_filter, dtm_self
from .neighbors import NeighborIndex
from .persistence import image_diagram
from .rips import build_nested_pair

__all__ = ["PipelineConfig", "run_pipeline", "eta_from_percentile", "denoise_with"]


@dataclass(frozen=True)
class PipelineConfig:
    """Tunables of the combined algorithm.

    ``dtm_k`` drives the outlier filter, ``eta`` its sublevel threshold;
    ``k``/``kprime``/``method`` drive denoising; ``delta``/``delta_prime``/
    ``max_dim`` drive the nested Rips pair.
    """

    k: int
    kprime: int
    eta: float
    delta: float
    delta_prime: float
    method: str
    max_dim: int
    dtm_k: int

    def __post_init__(self):
        check_disparity_params(self.k, self.kprime)
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}")
        if self.delta < 0 or self.delta > self.delta_prime:
            raise ValueError("need 0 <= delta <= delta_prime")
        if self.max_dim < 0:
            raise ValueError("max_dim must be >= 0")
        if self.dtm_k < 1:
            raise ValueError("dtm_k must be >= 1")


def denoise_with(sample: ScalarSample, method: str, k: int, kprime: int) -> DenoisedSample:
    if method == METHOD_MEDIAN:
        return kmedian_denoise(sample, k)
    if method == METHOD_DISPARITY:
        return disparity_denoise(sample, k, kprime)
    if method == METHOD_KNN_MEAN:
        return knn_mean_denoise(sample, k)
    raise ValueError(f"method must be one of {METHODS}")


def eta_from_percentile(sample: ScalarSample, dtm_k: int, percentile: float) -> float:
    """Heuristic threshold: the q-th percentile of the sample's own distances
    to the empirical measure.  A stand-in for the unobservable density radius;
    prefer an explicit eta when one is known."""
    if not (0.0 <= percentile <= 100.0):
        raise ValueError("percentile must lie in [0, 100]")
    values = dtm_self(NeighborIndex(sample.points), dtm_k)
    return float(np.percentile(values, percentile))


def run_pipeline(
    sample: ScalarSample, cfg: PipelineConfig
) -> tuple[PersistenceDiagram, np.ndarray, DenoisedSample]:
    """Filter, denoise, and extract the image persistence diagram.

    Step order is fixed: the distance-to-measure filter runs on the raw
    points, denoising reruns k-nearest-neighbor queries inside the filtered
    set only, and the nested pair is built over the filtered points with the
    denoised values.
    """
    if len(sample) < cfg.k:
        raise ValueError(f"sample has {len(sample)} < k={cfg.k} points")
    if cfg.dtm_k > len(sample):
        raise ValueError(f"dtm_k={cfg.dtm_k} exceeds sample size {len(sample)}")
    kept, filtered = dtm_filter(sample, cfg.dtm_k, cfg.eta)
    if kept.size < cfg.k:
        raise ValueError(
            f"only {kept.size} points survive the distance-to-measure filter at "
            f"eta={cfg.eta}; increase eta or decrease k={cfg.k}"
        )
    denoised = denoise_with(filtered, cfg.method, cfg.k, cfg.kprime)
    pair = build_nested_pair(
        filtered.points, denoised.denoised, cfg.delta, cfg.delta_prime, cfg.max_dim
    )
    return image_diagram(pair, cfg.max_dim), kept, denoised
