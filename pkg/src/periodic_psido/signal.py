"""Signals sampled on a computational torus and the time-frequency shifts.

A :class:`GridSignal` holds samples ``f(x_j)`` at ``x_j = -T/2 + j T/N`` on
each of ``d`` axes.  Its Fourier transform is sampled at ``xi_k = k/T`` for
``k = -N/2 .. N/2-1``, which is again a centred grid of ``N`` points with
extent ``N/T``, so :func:`dft` maps ``GridSignal`` to ``GridSignal``.

Fractional translations use the band-limited (trigonometric) interpretation:
multiply the spectrum by ``exp(-2 pi i xi x)``.  Grid-aligned translations are
exact circular shifts.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "GridSignal",
    "WrapAroundWarning",
    "dft",
    "translate",
    "modulate",
    "tfs_apply",
    "lp_m_norm",
    "flp_m_norm",
    "interpolate",
]

WRAP_ENERGY_TOL = 1e-20


class WrapAroundWarning(UserWarning):
    """A translation moves non-negligible energy across the torus seam."""


@dataclass(frozen=True, eq=False)
class GridSignal:
    """Complex samples on ``[-T/2, T/2)^d`` with ``N`` points per axis.

    Parameters
    ----------
    values : array_like
        Array of shape ``(N,) * d``.
    extent : float
        Torus length ``T`` (same on every axis).
    """

    values: np.ndarray
    extent: float
    d: int = field(init=False)

    def __post_init__(self):
        v = np.array(self.values, dtype=complex)
        if v.ndim == 0:
            raise ValueError("signal needs at least one axis")
        n = v.shape[0]
        if any(s != n for s in v.shape):
            raise ValueError(f"all axes must have the same length, got {v.shape}")
        if n < 2 or n % 2:
            raise ValueError(f"samples per axis must be even and >= 2, got {n}")
        if not np.all(np.isfinite(v)):
            raise ValueError("signal samples must be finite")
        if not (self.extent > 0 and np.isfinite(self.extent)):
            raise ValueError("torus extent must be positive")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "extent", float(self.extent))
        object.__setattr__(self, "d", v.ndim)

    # construction -----------------------------------------------------

    @classmethod
    def zeros(cls, extent: float, npoints: int, d: int = 1) -> "GridSignal":
        return cls(np.zeros((npoints,) * d, dtype=complex), extent)

    @classmethod
    def sample(cls, fn, extent: float, npoints: int, d: int = 1) -> "GridSignal":
        """Sample ``fn`` on the grid.

        For ``d == 1`` ``fn`` receives the 1-D node array; otherwise an array of
        shape ``(N,)*d + (d,)`` of grid points.
        """
        template = cls.zeros(extent, npoints, d)
        pts = template.nodes if d == 1 else template.points
        return template.with_values(fn(pts))

    def with_values(self, values) -> "GridSignal":
        return GridSignal(np.broadcast_to(values, self.values.shape), self.extent)

    # geometry ---------------------------------------------------------

    @property
    def npoints(self) -> int:
        return self.values.shape[0]

    @property
    def spacing(self) -> float:
        return self.extent / self.npoints

    @property
    def cell(self) -> float:
        """Volume ``spacing**d`` of one grid cell."""
        return self.spacing**self.d

    @property
    def nodes(self) -> np.ndarray:
        return -self.extent / 2 + np.arange(self.npoints) * self.spacing

    @property
    def frequencies(self) -> np.ndarray:
        return (np.arange(self.npoints) - self.npoints // 2) / self.extent

    @property
    def nyquist(self) -> float:
        return self.npoints / (2 * self.extent)

    @property
    def points(self) -> np.ndarray:
        axes = np.meshgrid(*([self.nodes] * self.d), indexing="ij")
        return np.stack(axes, axis=-1)

    def same_grid(self, other: "GridSignal") -> bool:
        return self.values.shape == other.values.shape and self.extent == other.extent

    # arithmetic -------------------------------------------------------

    def inner(self, other: "GridSignal") -> complex:
        """``(f, g) = sum f conj(g) dx``."""
        _check_grid(self, other)
        return complex(np.vdot(other.values, self.values) * self.cell)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.cell))

    def __add__(self, other):
        _check_grid(self, other)
        return GridSignal(self.values + other.values, self.extent)

    def __radd__(self, other):
        # lets sum() start from 0
        if isinstance(other, (int, float)) and other == 0:
            return self
        return NotImplemented

    def __sub__(self, other):
        _check_grid(self, other)
        return GridSignal(self.values - other.values, self.extent)

    def __mul__(self, c):
        return GridSignal(self.values * c, self.extent)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return GridSignal(self.values / c, self.extent)

    def __neg__(self):
        return GridSignal(-self.values, self.extent)

    def __repr__(self):
        return f"GridSignal(d={self.d}, extent={self.extent:g}, npoints={self.npoints})"


def _check_grid(f: GridSignal, g: GridSignal):
    if not f.same_grid(g):
        raise ValueError("signals live on different grids")


def _vec(x, d) -> np.ndarray:
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.shape != (d,):
        raise ValueError(f"expected a vector of length {d}, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError("shift must be finite")
    return x


def _centered_phase(n: int) -> complex:
    # exp(-2 pi i x_0 xi_0) with x_0 = -T/2, xi_0 = -N/(2T)
    return 1.0 if n % 4 == 0 else -1.0


def _alternating(n: int) -> np.ndarray:
    return np.where(np.arange(n) % 2, -1.0, 1.0)


def dft(f: GridSignal, direction: str = "forward") -> GridSignal:
    """Sampled Fourier transform ``int f(x) exp(-2 pi i x xi) dx``.

    ``forward`` returns samples at ``xi_k = k/T`` scaled by the cell volume;
    ``inverse`` uses the opposite sign and is the exact inverse of
    ``forward``.  The result has extent ``N/T``.
    """
    if direction not in ("forward", "inverse"):
        raise ValueError("direction must be 'forward' or 'inverse'")
    n, d = f.npoints, f.d
    alt = _alternating(n)
    v = f.values
    for ax in range(d):
        v = v * alt.reshape((-1,) + (1,) * (d - 1 - ax))
    axes = tuple(range(d))
    if direction == "forward":
        w = np.fft.fftn(v, axes=axes) * (_centered_phase(n) ** d) * f.cell
    else:
        w = np.fft.ifftn(v, axes=axes) * (n**d) * (_centered_phase(n) ** d) * f.cell
    for ax in range(d):
        w = w * alt.reshape((-1,) + (1,) * (d - 1 - ax))
    return GridSignal(w, n / f.extent)


def _shift_values(values: np.ndarray, x: np.ndarray, extent: float, d: int) -> np.ndarray:
    """Translate the first ``d`` axes of ``values`` by ``x`` (extra axes are batch)."""
    n = values.shape[0]
    step = extent / n
    out = values
    fractional = []
    for ax in range(d):
        m = x[ax] / step
        mi = round(m)
        if abs(m - mi) <= 1e-12 * max(1.0, abs(m)):
            if mi:
                out = np.roll(out, mi, axis=ax)
        else:
            fractional.append(ax)
    if fractional:
        spec = np.fft.fftn(out, axes=fractional)
        freqs = np.fft.fftfreq(n, d=step)
        for ax in fractional:
            ramp = np.exp(-2j * np.pi * freqs * x[ax])
            spec = spec * ramp.reshape((-1,) + (1,) * (values.ndim - 1 - ax))
        out = np.fft.ifftn(spec, axes=fractional)
    return out


def _wrap_check(f: GridSignal, x: np.ndarray):
    quarter = f.extent / 4
    if not np.any(np.abs(x) > quarter):
        return
    energy = np.abs(f.values) ** 2
    total = energy.sum()
    if total == 0:
        return
    nodes = f.nodes
    for ax in range(f.d):
        if abs(x[ax]) <= quarter:
            continue
        # nodes that cross the seam after the shift
        if x[ax] > 0:
            crossing = nodes >= f.extent / 2 - x[ax]
        else:
            crossing = nodes < -f.extent / 2 - x[ax]
        axes = tuple(i for i in range(f.d) if i != ax)
        frac = energy.sum(axis=axes)[crossing].sum() / total if axes else energy[crossing].sum() / total
        if frac > WRAP_ENERGY_TOL:
            warnings.warn(
                f"translation by {x[ax]:g} moves {frac:.2e} of the energy across the torus seam",
                WrapAroundWarning,
                stacklevel=3,
            )


def translate(f: GridSignal, x) -> GridSignal:
    """``T_x f(t) = f(t - x)`` under the band-limited interpretation."""
    x = _vec(x, f.d)
    _wrap_check(f, x)
    return GridSignal(_shift_values(f.values, x, f.extent, f.d), f.extent)


def _modulation(f: GridSignal, omega: np.ndarray) -> np.ndarray:
    nodes = f.nodes
    factor = np.ones((f.npoints,) * f.d, dtype=complex)
    for ax in range(f.d):
        if omega[ax] == 0:
            continue
        e = np.exp(2j * np.pi * omega[ax] * nodes)
        factor = factor * e.reshape((-1,) + (1,) * (f.d - 1 - ax))
    return factor


def modulate(f: GridSignal, omega) -> GridSignal:
    """``M_omega f(t) = exp(2 pi i omega . t) f(t)``, exact at the nodes."""
    omega = _vec(omega, f.d)
    return GridSignal(f.values * _modulation(f, omega), f.extent)


def tfs_apply(f: GridSignal, z) -> GridSignal:
    """Time-frequency shift ``pi_z f = M_omega T_x f`` for ``z = (x, omega)``."""
    z = np.atleast_1d(np.asarray(z, dtype=float))
    if z.shape != (2 * f.d,):
        raise ValueError(f"phase-space point must have length {2 * f.d}")
    return modulate(translate(f, z[: f.d]), z[f.d :])


def _check_p(p):
    if not (p >= 1):
        raise ValueError(f"Lebesgue exponent must be >= 1, got {p}")


def _weighted_lp(values: np.ndarray, weight: np.ndarray, cell: float, p) -> float:
    a = np.abs(values) * weight
    if np.isinf(p):
        return float(a.max()) if a.size else 0.0
    return float((np.sum(a**p) * cell) ** (1.0 / p))


def lp_m_norm(f: GridSignal, p, m) -> float:
    """``|| m(., 0) f ||_{L^p}`` by Riemann sum (grid maximum for ``p = inf``).

    ``m`` is a weight on phase space ``R^{2d}`` (evaluated at ``(t, 0)``) or
    ``None`` for the unweighted norm.
    """
    _check_p(p)
    if m is None:
        w = 1.0
    else:
        pts = f.points.reshape(-1, f.d)
        w = m(np.concatenate([pts, np.zeros_like(pts)], axis=-1)).reshape(f.values.shape)
    return _weighted_lp(f.values, w, f.cell, p)


def flp_m_norm(f: GridSignal, p, m) -> float:
    """``|| m(0, .) f^ ||_{L^p}`` on the sampled spectrum."""
    _check_p(p)
    fh = dft(f)
    if m is None:
        w = 1.0
    else:
        pts = fh.points.reshape(-1, f.d)
        w = m(np.concatenate([np.zeros_like(pts), pts], axis=-1)).reshape(fh.values.shape)
    return _weighted_lp(fh.values, w, fh.cell, p)


def interpolate(f: GridSignal, points) -> np.ndarray:
    """Evaluate the trigonometric interpolant of ``f`` at arbitrary points.

    ``points`` has shape ``(..., d)`` (or ``(...)`` when ``d == 1``).  The
    Nyquist bin is split symmetrically so real samples give real values.
    """
    pts = np.asarray(points, dtype=float)
    if f.d == 1 and (pts.ndim == 0 or pts.shape[-1] != 1):
        pts = pts[..., None]
    shape = pts.shape[:-1]
    pts = pts.reshape(-1, f.d)
    fh = dft(f).values
    n = f.npoints
    xi = f.frequencies
    # split the -N/2 bin between +-N/2
    coeffs = fh / f.extent**f.d
    out = np.zeros(len(pts), dtype=complex)
    if f.d == 1:
        c = coeffs.copy()
        nyq = c[0] / 2
        c[0] = nyq
        phase = np.exp(2j * np.pi * pts[:, :1] * xi[None, :])
        out = phase @ c + nyq * np.exp(2j * np.pi * pts[:, 0] * (n / (2 * f.extent)))
        return out.reshape(shape)
    # general d: separable evaluation without Nyquist splitting
    for i, p in enumerate(pts):
        val = coeffs
        for ax in range(f.d):
            val = np.tensordot(np.exp(2j * np.pi * p[ax] * xi), val, axes=([0], [0]))
        out[i] = val
    return out.reshape(shape)
