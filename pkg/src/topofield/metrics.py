"""Diagram quality metrics."""
from __future__ import annotations

import math

import numpy as np

from .core import PersistenceDiagram
from .images import psnr  # noqa: F401  (re-export: psnr lives with the image code)

__all__ = ["gap", "psnr"]


def gap(diagram: PersistenceDiagram, dim: int, n_relevant: int) -> float:
    """Ratio of the n-th longest lifespan to the (n+1)-th in one dimension.

    With n_relevant features considered signal, a gap above 1 means the
    shortest-lived signal feature still outlives the strongest noise feature.
    Returns +inf when there is no (n+1)-th feature to compare against, or when
    the n-th feature is essential.
    """
    if n_relevant < 1:
        raise ValueError("n_relevant must be >= 1")
    spans = np.sort(diagram.lifespans(dim))[::-1]
    if spans.size < n_relevant + 1:
        return math.inf
    top = float(spans[n_relevant - 1])
    nxt = float(spans[n_relevant])
    if math.isinf(top) or nxt == 0.0:
        return math.inf
    return top / nxt
