"""Homogeneous Poisson point processes on disks and ordered nearest distances.

All samplers take an explicit seed (anything accepted by
``numpy.random.default_rng``, including a ``Generator``) and are pure
functions of their arguments and that seed.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError

__all__ = [
    "PointSet2D",
    "OrderedDistances",
    "sample_ppp",
    "sample_ordered_nearest",
    "ordered_from_points",
    "joint_distance_pdf",
]


@dataclass(frozen=True)
class PointSet2D:
    """Points of one PPP realization inside a disk centred at the origin."""

    points: np.ndarray  # shape (n, 2), meters
    window_radius: float
    density: float

    def __post_init__(self):
        if self.density <= 0 or self.window_radius <= 0:
            raise ConfigurationError("density and window_radius must be positive")

    def __len__(self) -> int:
        return len(self.points)

    def norms(self) -> np.ndarray:
        return np.hypot(self.points[:, 0], self.points[:, 1])


@dataclass(frozen=True)
class OrderedDistances:
    """Ascending distances from a node to its ``len(distances)`` nearest PBs."""

    distances: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.distances, dtype=float)
        if d.ndim != 1 or d.size == 0:
            raise ValueError("OrderedDistances needs a non-empty 1-D array")
        if np.any(d <= 0) or np.any(np.diff(d) <= 0):
            raise ValueError("distances must be positive and strictly ascending")
        object.__setattr__(self, "distances", d)

    def __len__(self) -> int:
        return self.distances.size


def _check_positive(**kwargs):
    for name, value in kwargs.items():
        if not value > 0:
            raise ConfigurationError(f"{name} must be positive, got {value!r}")


def sample_ppp(density: float, window_radius: float, rng_seed=None) -> PointSet2D:
    """Sample a homogeneous PPP of the given density on a disk around the origin."""
    _check_positive(density=density, window_radius=window_radius)
    rng = np.random.default_rng(rng_seed)
    n = rng.poisson(density * np.pi * window_radius**2)
    # sqrt of a uniform gives the radial law of a uniform point on the disk
    r = window_radius * np.sqrt(rng.random(n))
    phi = rng.uniform(0.0, 2.0 * np.pi, n)
    pts = np.column_stack((r * np.cos(phi), r * np.sin(phi)))
    return PointSet2D(pts, float(window_radius), float(density))


def sample_ordered_nearest(density: float, count: int, rng_seed=None, size=None) -> np.ndarray:
    """Draw distances to the ``count`` nearest points of a PPP seen from the origin.

    The squared distances scaled by ``pi * density`` are the arrival times of a
    unit-rate Poisson process on the line, so the i-th distance is
    ``sqrt(Gamma_i / (pi * density))`` with ``Gamma_i`` a sum of ``i`` unit
    exponentials.

    Returns an array of shape ``(count,)`` or ``(size, count)`` when ``size``
    is given. Rows are strictly ascending. Spacings are drawn nearest-first,
    so for a fixed seed the first ``k`` columns do not depend on ``count``.
    """
    _check_positive(density=density)
    if int(count) != count or count < 1:
        raise ConfigurationError(f"count must be an integer >= 1, got {count!r}")
    rng = np.random.default_rng(rng_seed)
    n = 1 if size is None else int(size)
    arrivals = np.cumsum(rng.standard_exponential((count, n)), axis=0).T
    d = np.sqrt(arrivals / (np.pi * density))
    return d[0] if size is None else d


def ordered_from_points(points: PointSet2D, count: int, reference=(0.0, 0.0)) -> OrderedDistances:
    """Extract the ``count`` nearest distances of ``points`` from ``reference``."""
    if len(points) < count:
        raise ValueError(f"only {len(points)} points, need {count}")
    d = np.hypot(points.points[:, 0] - reference[0], points.points[:, 1] - reference[1])
    return OrderedDistances(np.sort(np.partition(d, count - 1)[:count]))


def joint_distance_pdf(distances, density: float) -> float:
    """Joint density of the ordered nearest distances x_1 < ... < x_n.

    Evaluates ``(2 pi density)^n * prod(x) * exp(-pi density x_n^2)`` and
    returns 0 outside the ordered support.
    """
    x = np.asarray(getattr(distances, "distances", distances), dtype=float)
    if x.size == 0 or np.any(x <= 0) or np.any(np.diff(x) <= 0):
        return 0.0
    n = x.size
    log_pdf = n * np.log(2.0 * np.pi * density) + np.sum(np.log(x)) - np.pi * density * x[-1] ** 2
    return float(np.exp(log_pdf))
