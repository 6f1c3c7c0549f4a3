"""Synthetic scalar fields, noise models, and closed-form sampling bounds.

Everything randomized takes an explicit seed and is bit-reproducible.  The
noise specs cover aberrant functional values (impulse noise), additive
Gaussian noise on values or coordinates, and uniform background clutter.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .core import ManifoldParams, ScalarSample, rng_from_seed

__all__ = [
    "ImpulseUniform",
    "ImpulseConstant",
    "GaussianFunctional",
    "GaussianGeometric",
    "Clutter",
    "NoiseSpec",
    "sample_circle",
    "sample_bone",
    "apply_noise",
    "gaussian_delta_bound",
    "volume_constant",
    "wasserstein_epsilon_bound",
]


# ---------------------------------------------------------------------------
# Noise specifications
# ---------------------------------------------------------------------------

def _check_probability(p: float) -> None:
    if not (0.0 <= p <= 1.0):
        raise ValueError("probability must lie in [0, 1]")


@dataclass(frozen=True)
class ImpulseUniform:
    """With probability p a value is replaced by a uniform draw from [lo, hi]."""

    p: float
    lo: float
    hi: float

    def __post_init__(self):
        _check_probability(self.p)
        if self.lo > self.hi:
            raise ValueError("need lo <= hi")


@dataclass(frozen=True)
class ImpulseConstant:
    """With probability p a value is replaced by a fixed constant."""

    p: float
    value: float

    def __post_init__(self):
        _check_probability(self.p)


@dataclass(frozen=True)
class GaussianFunctional:
    """Additive centered Gaussian noise with standard deviation sigma on values."""

    sigma: float

    def __post_init__(self):
        if self.sigma < 0:
            raise ValueError("sigma must be >= 0")


@dataclass(frozen=True)
class GaussianGeometric:
    """Additive centered Gaussian noise with standard deviation sigma per coordinate."""

    sigma: float

    def __post_init__(self):
        if self.sigma < 0:
            raise ValueError("sigma must be >= 0")


@dataclass(frozen=True)
class Clutter:
    """Uniform background points inside an axis-aligned box, values drawn
    uniformly from the range of the existing values."""

    count: int
    box: tuple

    def __post_init__(self):
        if self.count < 0:
            raise ValueError("count must be >= 0")
        box = np.asarray(self.box, dtype=np.float64)
        if box.ndim != 2 or box.shape[1] != 2:
            raise ValueError("box must be a (d, 2) array of [lo, hi] bounds")
        if np.any(box[:, 0] > box[:, 1]):
            raise ValueError("box bounds must satisfy lo <= hi")
        object.__setattr__(self, "box", tuple(map(tuple, box)))


NoiseSpec = Union[ImpulseUniform, ImpulseConstant, GaussianFunctional,
                  GaussianGeometric, Clutter]


def apply_noise(sample: ScalarSample, spec: NoiseSpec, seed: int) -> ScalarSample:
    """Corrupt a sample according to one noise spec, deterministically per seed."""
    rng = rng_from_seed(seed)
    points = np.array(sample.points)
    values = np.array(sample.values)
    n = len(sample)

    if isinstance(spec, (ImpulseUniform, ImpulseConstant)):
        mask = rng.random(n) < spec.p
        hit = int(mask.sum())
        if isinstance(spec, ImpulseUniform):
            values[mask] = rng.uniform(spec.lo, spec.hi, hit)
        else:
            values[mask] = spec.value
        return ScalarSample(points, values)

    if isinstance(spec, GaussianFunctional):
        values = values + rng.normal(0.0, spec.sigma, n)
        return ScalarSample(points, values)

    if isinstance(spec, GaussianGeometric):
        points = points + rng.normal(0.0, spec.sigma, points.shape)
        return ScalarSample(points, values)

    if isinstance(spec, Clutter):
        if spec.count == 0:
            return ScalarSample(points, values)
        box = np.asarray(spec.box, dtype=np.float64)
        if box.shape[0] != sample.dim:
            raise ValueError("clutter box dimension does not match the sample")
        extra = rng.uniform(box[:, 0], box[:, 1], (spec.count, sample.dim))
        vmin, vmax = float(values.min()), float(values.max())
        extra_vals = rng.uniform(vmin, vmax, spec.count)
        return ScalarSample(
            np.vstack([points, extra]), np.concatenate([values, extra_vals])
        )

    raise TypeError(f"unknown noise spec {spec!r}")


# ---------------------------------------------------------------------------
# Synthetic fields
# ---------------------------------------------------------------------------

FIELD_HEIGHT = "height"
FIELD_GEODESIC = "geodesic"


def sample_circle(n: int, radius: float, field: str = FIELD_HEIGHT) -> ScalarSample:
    """n evenly spaced points on a circle with a height or arc-distance field.

    ``height`` is the y coordinate (1-Lipschitz in the circle's arc metric);
    ``geodesic`` is the arc-length distance to the point at angle zero.
    """
    if n < 3:
        raise ValueError("need at least 3 points on the circle")
    if radius <= 0:
        raise ValueError("radius must be positive")
    theta = 2.0 * np.pi * np.arange(n) / n
    points = radius * np.column_stack([np.cos(theta), np.sin(theta)])
    if field == FIELD_HEIGHT:
        values = points[:, 1].copy()
    elif field == FIELD_GEODESIC:
        values = radius * np.minimum(theta, 2.0 * np.pi - theta)
    else:
        raise ValueError(f"unknown field {field!r}")
    return ScalarSample(points, values)


class _BoneCurve:
    """Closed dumbbell outline: two unit circles bridged by a straight neck.

    Arc-length parameterized counterclockwise from the midpoint of the top
    neck edge.  The two lobes have radius 1 and centers (+-2, 0); the neck
    has total width ``neck_width`` (gap between its straight edges).
    """

    def __init__(self, neck_width: float):
        if not (0.0 < neck_width < 2.0):
            raise ValueError("neck_width must lie in (0, 2) for unit lobes")
        self.half_width = neck_width / 2.0
        self.phi = math.asin(self.half_width)
        self.center = 2.0
        self.attach_x = self.center - math.cos(self.phi)
        lobe = 2.0 * math.pi - 2.0 * self.phi
        self.lengths = np.array(
            [self.attach_x, lobe, 2.0 * self.attach_x, lobe, self.attach_x]
        )
        self.cum = np.concatenate([[0.0], np.cumsum(self.lengths)])
        self.length = float(self.cum[-1])

    def point_at(self, s) -> np.ndarray:
        s = np.mod(np.asarray(s, dtype=np.float64), self.length)
        piece = np.clip(np.searchsorted(self.cum, s, side="right") - 1, 0, 4)
        u = s - self.cum[piece]
        x = np.empty_like(s)
        y = np.empty_like(s)

        m = piece == 0  # top neck, rightmost half, heading -x
        x[m], y[m] = -u[m], self.half_width

        m = piece == 1  # left lobe, ccw from angle phi
        psi = self.phi + u[m]
        x[m], y[m] = -self.center + np.cos(psi), np.sin(psi)

        m = piece == 2  # bottom neck, heading +x
        x[m], y[m] = -self.attach_x + u[m], -self.half_width

        m = piece == 3  # right lobe, ccw from angle pi + phi
        psi = math.pi + self.phi + u[m]
        x[m], y[m] = self.center + np.cos(psi), np.sin(psi)

        m = piece == 4  # top neck, leftmost half, heading -x
        x[m], y[m] = self.attach_x - u[m], self.half_width

        return np.column_stack([x, y])

    def geodesic_to_base(self, s) -> np.ndarray:
        s = np.mod(np.asarray(s, dtype=np.float64), self.length)
        return np.minimum(s, self.length - s)


def sample_bone(n: int, neck_width: float, seed: int) -> ScalarSample:
    """Random points on a closed dumbbell curve, valued by arc distance to a
    base point at the middle of the top neck edge.

    Points straddling the neck are Euclidean-close but carry values that
    differ by up to half the perimeter.
    """
    if n < 10:
        raise ValueError("need at least 10 points on the bone curve")
    curve = _BoneCurve(neck_width)
    rng = rng_from_seed(seed)
    s = rng.uniform(0.0, curve.length, n)
    return ScalarSample(curve.point_at(s), curve.geodesic_to_base(s))


# ---------------------------------------------------------------------------
# Closed-form bounds
# ---------------------------------------------------------------------------

def gaussian_delta_bound(sigma: float, k: int, kprime: int, c: float,
                         lam: float) -> float:
    """Accuracy level delta that additive Gaussian value noise meets with
    probability at least 1 - exp(-(k - k')/6) per neighborhood:
    sigma * sqrt(ln(2k / (k - k'))) + c * lam, with lam the neighborhood radius.
    """
    if k <= kprime:
        raise ValueError("need k > k'")
    if sigma < 0 or c < 0 or lam < 0:
        raise ValueError("sigma, c and lambda must be >= 0")
    return sigma * math.sqrt(math.log(2.0 * k / (k - kprime))) + c * lam


def volume_constant(d_prime: int, curvature_bound: float) -> float:
    """Constant C with Vol(geodesic ball of radius a) >= C * a^d' on a manifold
    of intrinsic dimension d' and sectional curvature at most the given bound.
    """
    if d_prime < 1:
        raise ValueError("intrinsic dimension must be >= 1")
    if curvature_bound <= 0:
        raise ValueError("curvature bound must be positive")
    d = d_prime
    return (
        (4.0 / d)
        * math.gamma(0.5) ** d
        / math.gamma(d / 2.0)
        * (math.sqrt(curvature_bound) / math.pi) ** (d - 1)
    )


def wasserstein_epsilon_bound(m: float, sigma: float,
                              params: ManifoldParams) -> float:
    """Density radius epsilon guaranteed by a Wasserstein-close sample:
    (1 + 2/d')^(-1/2) * (m*V/C)^(1/d') + sigma/sqrt(m), valid up to the mass
    cap m <= C * (pi/c_M)^d' / V.
    """
    if sigma < 0:
        raise ValueError("sigma must be >= 0")
    d = params.intrinsic_dim
    c = volume_constant(d, params.curvature_bound)
    cap = c * (math.pi / params.curvature_bound) ** d / params.volume
    if not (0.0 < m <= cap):
        raise ValueError(f"mass m={m} outside (0, {cap}] for these manifold constants")
    density = (m * params.volume / c) ** (1.0 / d) / math.sqrt(1.0 + 2.0 / d)
    return density + sigma / math.sqrt(m)
