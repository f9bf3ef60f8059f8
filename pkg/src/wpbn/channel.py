"""Rayleigh fading draws and forward/backward path-loss laws."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError


@dataclass(frozen=True)
class FadingDraw:
    complex_gain: np.ndarray

    @property
    def power_gain(self) -> np.ndarray:
        return np.abs(self.complex_gain) ** 2


@dataclass(frozen=True)
class PathLossLaw:
    """Power-law path loss ``d**-exponent``, optionally clamped at unit gain."""

    exponent: float
    bounded: bool = False

    def __post_init__(self):
        if not self.exponent > 2:
            raise ConfigurationError(f"path-loss exponent must exceed 2, got {self.exponent!r}")


def draw_rayleigh(rng, size=None) -> FadingDraw:
    """CN(0, 1) amplitudes: real and imaginary parts each N(0, 1/2)."""
    rng = np.random.default_rng(rng)
    z = rng.standard_normal(size) + 1j * rng.standard_normal(size)
    return FadingDraw(z * np.sqrt(0.5))


def path_loss(distance, law: PathLossLaw):
    d = np.asarray(distance, dtype=float)
    if np.any(d <= 0):
        raise ValueError("distance must be positive")
    g = d ** (-law.exponent)
    if law.bounded:
        g = np.minimum(1.0, g)
    return g if g.ndim else float(g)


def composite_received_power(pb_distances, tx_power: float, forward_law: PathLossLaw, rng, extra_gain: float = 0.0):
    """Coherently combined power from a set of PBs.

    ``pb_distances`` may be an ``OrderedDistances``, a 1-D array of distances,
    or a 2-D array where each row is one receiving node (rows may be padded
    with ``inf``, which contributes nothing). Every PB link gets an
    independent CN(0,1) amplitude; amplitudes are summed and then squared.

    ``extra_gain`` adds one more independent component of path gain
    ``extra_gain`` per row; used to stand in for the far-field remainder of an
    infinite PB field.
    """
    if not tx_power > 0:
        raise ValueError("tx_power must be positive")
    d = np.asarray(getattr(pb_distances, "distances", pb_distances), dtype=float)
    if d.size == 0 or d.shape[-1] == 0:
        raise ValueError("need at least one PB")
    g = np.where(np.isfinite(d), path_loss(np.where(np.isfinite(d), d, 1.0), forward_law), 0.0)
    h = draw_rayleigh(rng, g.shape).complex_gain
    amp = np.sum(np.sqrt(tx_power * g) * h, axis=-1)
    if extra_gain > 0:
        amp = amp + np.sqrt(tx_power * extra_gain) * draw_rayleigh(rng, np.shape(amp)).complex_gain
    power = np.abs(amp) ** 2
    return power if np.ndim(power) else float(power)
