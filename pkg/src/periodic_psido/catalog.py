"""Test signals with closed-form Fourier transforms (``d = 1``).

Each catalog entry evaluates itself and its transform
``f^(w) = int f(t) exp(-2 pi i t w) dt`` analytically, so the quadrature
oracle never touches the FFT code paths.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial, pi, sqrt

import numpy as np
from numpy.polynomial import hermite as _H

from .signal import GridSignal

__all__ = ["Gaussian", "HermiteGaussian", "Exponential", "catalog_signal"]

# exp(-pi r^2) < 1e-17 beyond r = DECAY
DECAY = 3.6


@dataclass(frozen=True)
class HermiteGaussian:
    """``H_n(sqrt(2 pi) t / sigma) exp(-pi t^2 / sigma^2)``, L2-normalised.

    The Hermite functions are eigenfunctions of the Fourier transform with
    eigenvalue ``(-i)^n``; dilation by ``sigma`` gives
    ``f^(w) = sigma (-i)^n h_n(sigma w)``.
    """

    order: int = 0
    sigma: float = 1.0

    @property
    def _norm(self) -> float:
        # int H_n(sqrt(2pi) t)^2 exp(-2 pi t^2) dt = 2^n n! / sqrt(2)
        return 1.0 / sqrt(self.sigma * 2.0**self.order * factorial(self.order) / sqrt(2.0))

    def _h(self, s):
        c = np.zeros(self.order + 1)
        c[-1] = 1.0
        return _H.hermval(sqrt(2 * pi) * s, c) * np.exp(-pi * s**2)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return self._norm * self._h(t / self.sigma) + 0j

    def fourier(self, w):
        w = np.asarray(w, dtype=float)
        return self._norm * self.sigma * (-1j) ** self.order * self._h(self.sigma * w)

    @property
    def bandwidth(self) -> float:
        """Frequency radius beyond which ``|f^|`` is below ~1e-17."""
        return (DECAY + 0.6 * sqrt(self.order)) / self.sigma

    def sample(self, extent: float, npoints: int) -> GridSignal:
        return GridSignal.sample(self, extent, npoints)


def Gaussian(sigma: float = 1.0) -> HermiteGaussian:
    """L2-normalised Gaussian ``(2/sigma^2)^{1/4} exp(-pi t^2/sigma^2)``."""
    return HermiteGaussian(0, sigma)


@dataclass(frozen=True)
class Exponential:
    """Pure exponential ``exp(2 pi i xi0 t)``; its transform is ``delta_{xi0}``."""

    xi0: float = 0.0

    def __call__(self, t):
        return np.exp(2j * pi * self.xi0 * np.asarray(t, dtype=float))

    def sample(self, extent: float, npoints: int) -> GridSignal:
        return GridSignal.sample(self, extent, npoints)


def catalog_signal(tag: str):
    """Parse tags such as ``gaussian``, ``gaussian:0.5``, ``hermite:2:0.6``, ``exp:0.25``."""
    parts = tag.strip().lower().split(":")
    kind, args = parts[0], [float(a) for a in parts[1:]]
    if kind == "gaussian":
        return Gaussian(*args)
    if kind == "hermite":
        order = int(args[0]) if args else 0
        return HermiteGaussian(order, *args[1:])
    if kind in ("exp", "exponential"):
        return Exponential(*args)
    raise ValueError(f"unknown catalog signal {tag!r}")
