"""Periodic symbols as finite lattice Fourier series.

An ``L``-periodic function ``p`` on ``R^n`` is stored through its
coefficients

    c_kappa = |det L|^{-1} int_{L[0,1]^n} p(x) exp(-2 pi i <L^{-T} kappa, x>) dx

so that ``p(x) = sum_kappa c_kappa exp(2 pi i <L^{-T} kappa, x>)``.  The
negative sign inside the coefficient integral is the one that makes
synthesis and extraction mutually inverse.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .lattice import PeriodMatrix, dual_points, enumerate_truncation, index_order_key
from .signal import GridSignal, interpolate

__all__ = [
    "PeriodicSymbol",
    "PeriodCellSamples",
    "fourier_coefficients",
    "synthesize",
    "periodize",
    "bump",
    "partition_of_unity",
    "gabor_symbol",
    "PRUNE_TOL",
    "COEFFICIENT_CONVENTION",
]

PRUNE_TOL = 1e-14
COEFFICIENT_CONVENTION = "c_k = |det L|^-1 int_{L[0,1]^n} p(x) exp(-2 pi i <L^-T k, x>) dx"


@dataclass(frozen=True, eq=False)
class PeriodicSymbol:
    """Finitely supported map ``kappa -> c_kappa`` together with its period matrix."""

    L: PeriodMatrix
    coeffs: Mapping[tuple, complex] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for k, c in dict(self.coeffs).items():
            k = tuple(int(i) for i in np.atleast_1d(k))
            if len(k) != self.L.n:
                raise ValueError(f"index {k} does not match dimension {self.L.n}")
            c = complex(c)
            if not np.isfinite(c):
                raise ValueError(f"coefficient at {k} is not finite")
            clean[k] = clean.get(k, 0) + c
        ordered = dict(sorted(clean.items(), key=lambda kv: index_order_key(kv[0])))
        object.__setattr__(self, "coeffs", ordered)

    @classmethod
    def constant(cls, L: PeriodMatrix, value: complex = 1.0) -> "PeriodicSymbol":
        return cls(L, {(0,) * L.n: value})

    @property
    def n(self) -> int:
        return self.L.n

    @property
    def radius(self) -> int:
        """Smallest ``K`` with the support inside ``|kappa|_inf <= K``."""
        return max((max(map(abs, k), default=0) for k in self.coeffs), default=0)

    def indices(self) -> np.ndarray:
        return np.array(list(self.coeffs), dtype=int).reshape(-1, self.n)

    def values(self) -> np.ndarray:
        return np.array(list(self.coeffs.values()), dtype=complex)

    def dual(self) -> np.ndarray:
        """Dual lattice points ``L^{-T} kappa`` of the support, in storage order."""
        return dual_points(self.L, self.indices())

    def coefficient(self, kappa) -> complex:
        return self.coeffs.get(tuple(int(i) for i in kappa), 0j)

    def lattice_coefficients(self) -> dict:
        """``{mu: p_hat(mu)}`` keyed by dual lattice points."""
        return {tuple(mu): c for mu, c in zip(self.dual(), self.coeffs.values())}

    def pruned(self, tol: float = PRUNE_TOL) -> "PeriodicSymbol":
        return PeriodicSymbol(self.L, {k: c for k, c in self.coeffs.items() if abs(c) >= tol})

    def truncated(self, K: int) -> "PeriodicSymbol":
        return PeriodicSymbol(self.L, {k: c for k, c in self.coeffs.items() if max(map(abs, k), default=0) <= K})

    def __call__(self, x):
        return synthesize(self, x)

    def _combine(self, other, a, b):
        if self.L != other.L:
            raise ValueError("symbols have different period matrices")
        out = {k: a * c for k, c in self.coeffs.items()}
        for k, c in other.coeffs.items():
            out[k] = out.get(k, 0) + b * c
        return PeriodicSymbol(self.L, out)

    def __add__(self, other):
        return self._combine(other, 1, 1)

    def __sub__(self, other):
        return self._combine(other, 1, -1)

    def __mul__(self, c):
        return PeriodicSymbol(self.L, {k: c * v for k, v in self.coeffs.items()})

    __rmul__ = __mul__

    def __len__(self):
        return len(self.coeffs)

    def __repr__(self):
        return f"PeriodicSymbol(n={self.n}, terms={len(self)}, radius={self.radius})"


@dataclass(frozen=True, eq=False)
class PeriodCellSamples:
    """Samples ``p(L y_j)`` on the uniform grid ``y_j = j/M`` of ``[0,1)^n``."""

    L: PeriodMatrix
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=complex)
        n = self.L.n
        if v.ndim != n or len(set(v.shape)) != 1:
            raise ValueError(f"expected an array of shape (M,)*{n}, got {v.shape}")
        if v.shape[0] < 2:
            raise ValueError("need at least two samples per axis")
        if not np.all(np.isfinite(v)):
            raise ValueError("cell samples must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def M(self) -> int:
        return self.values.shape[0]

    @staticmethod
    def unit_grid(M: int, n: int) -> np.ndarray:
        axes = np.meshgrid(*([np.arange(M) / M] * n), indexing="ij")
        return np.stack(axes, axis=-1)

    def points(self) -> np.ndarray:
        """Sample locations ``L y_j``, shape ``(M,)*n + (n,)``."""
        return self.unit_grid(self.M, self.L.n) @ self.L.entries.T

    @classmethod
    def from_function(cls, fn: Callable, L: PeriodMatrix, M: int) -> "PeriodCellSamples":
        """Sample ``fn`` (vectorised over ``(..., n)`` points) on the cell."""
        pts = cls.unit_grid(M, L.n) @ L.entries.T
        return cls(L, fn(pts))


def fourier_coefficients(samples: PeriodCellSamples, K: int, prune: float = PRUNE_TOL) -> PeriodicSymbol:
    """Coefficients ``c_kappa``, ``|kappa|_inf <= K``, from period-cell samples.

    Computed as ``M^{-n} sum_j p(L y_j) exp(-2 pi i kappa . y_j)`` with one
    n-dimensional FFT; exact for trigonometric polynomials of degree ``<= K``.
    Coefficients below ``prune`` in magnitude are dropped.
    """
    M, n = samples.M, samples.L.n
    if K < 0:
        raise ValueError("truncation must be non-negative")
    if M < 2 * K + 2:
        raise ValueError(f"undersampled cell: need M >= 2K+2 = {2 * K + 2}, got M = {M}")
    spec = np.fft.fftn(samples.values) / M**n
    coeffs = {}
    for kappa in enumerate_truncation(K, n):
        c = spec[tuple(k % M for k in kappa)]
        if abs(c) >= prune:
            coeffs[kappa] = c
    return PeriodicSymbol(samples.L, coeffs)


def synthesize(p: PeriodicSymbol, x) -> np.ndarray:
    """``sum_kappa c_kappa exp(2 pi i <L^{-T} kappa, x>)`` at points ``x`` of shape ``(..., n)``."""
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != p.n:
        raise ValueError(f"points must have trailing dimension {p.n}")
    if not len(p):
        return np.zeros(x.shape[:-1], dtype=complex)
    phase = x @ p.dual().T
    return np.exp(2j * np.pi * phase) @ p.values()


def periodize(phi: Callable, L: PeriodMatrix, R: int) -> Callable:
    """``phi_per(x) = sum_{|kappa|_inf <= R} phi(x + L kappa)``.

    The caller certifies that the omitted terms are negligible.
    """
    shifts = np.array(enumerate_truncation(R, L.n), dtype=float) @ L.entries.T

    def phi_per(x):
        x = np.asarray(x, dtype=float)
        total = 0
        for s in shifts:
            total = total + phi(x + s)
        return total

    return phi_per


def bump(t):
    """Smooth bump ``exp(-1/(1-t^2))`` supported in ``(-1, 1)``."""
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    inside = np.abs(t) < 1
    out[inside] = np.exp(-1.0 / (1.0 - t[inside] ** 2))
    return out


def partition_of_unity(x):
    """``phi(x) = prod_i psi(x_i) / sum_k psi(x_i - k)``, compactly supported.

    Its integer translates sum to one.  ``x`` has shape ``(..., n)``.
    """
    x = np.asarray(x, dtype=float)
    out = np.ones(x.shape[:-1])
    for i in range(x.shape[-1]):
        t = x[..., i]
        base = np.floor(t)
        denom = sum(bump(t - (base + j)) for j in (-1, 0, 1, 2))
        out = out * bump(t) / denom
    return out


def _as_callable(w, d):
    if isinstance(w, GridSignal):
        if w.d != d:
            raise ValueError("window dimension mismatch")
        return lambda pts: interpolate(w, pts)
    return w


def gabor_symbol(g, ghat, alpha, beta, H: int, M: int) -> PeriodCellSamples:
    """Samples of the Gabor frame-operator symbol on its period cell.

    ``a(x, w) = sum_{h,k} exp(-2 pi i (x - alpha h).(w - beta k)) g(x - alpha h) conj(ghat(w - beta k))``
    truncated to ``|h|_inf, |k|_inf <= H`` and sampled at ``M`` points per
    axis of ``[0, alpha) x [0, beta)``.

    Parameters
    ----------
    g, ghat : callable or GridSignal
        Window and its Fourier transform, vectorised over ``(..., d)``
        points.  Grid signals are evaluated by trigonometric interpolation.
    alpha, beta : float or array_like
        Lattice parameters (positive).
    H : int
        Truncation of the double sum.
    M : int
        Samples per axis of the period cell.
    """
    alpha = np.atleast_1d(np.asarray(alpha, dtype=float))
    beta = np.atleast_1d(np.asarray(beta, dtype=float))
    if np.any(alpha <= 0) or np.any(beta <= 0):
        raise ValueError("lattice parameters must be positive")
    d = len(alpha)
    if len(beta) != d:
        raise ValueError("alpha and beta must have the same length")
    g = _as_callable(g, d)
    ghat = _as_callable(ghat, d)
    L = PeriodMatrix.block_diagonal(alpha, beta)
    pts = PeriodCellSamples.unit_grid(M, 2 * d) @ L.entries.T
    x, w = pts[..., :d], pts[..., d:]
    shifts = list(itertools.product(range(-H, H + 1), repeat=d))
    total = np.zeros(pts.shape[:-1], dtype=complex)
    gx = {h: g(x - alpha * np.array(h)) for h in shifts}
    gw = {k: np.conj(ghat(w - beta * np.array(k))) for k in shifts}
    for h in shifts:
        xs = x - alpha * np.array(h)
        for k in shifts:
            ws = w - beta * np.array(k)
            total += np.exp(-2j * np.pi * np.sum(xs * ws, axis=-1)) * gx[h] * gw[k]
    return PeriodCellSamples(L, total)
