"""Short-time Fourier transform, modulation norms and Gabor frame operators.

The frame operator ``S f = sum (f, g_hk) g_hk`` of the system
``g_hk = M_{beta k} T_{alpha h} g`` coincides with ``Op_0(a)`` for a symbol
``a`` that is periodic in both variables (see :func:`periodic_psido.symbol.gabor_symbol`).
This module computes ``S`` directly, through that symbol, and inverts it
with the Neumann series when the coefficient criterion allows.  Everything
here is one-dimensional.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .analysis import invertibility_check, neumann_inverse_apply, InvertibilityReport
from .catalog import Gaussian
from .exceptions import NotInvertibleError
from .operator import OperatorSpec, apply_series, dense_matrix
from .signal import GridSignal, _alternating, _centered_phase, _shift_values, dft, translate
from .symbol import PeriodicSymbol, fourier_coefficients, gabor_symbol
from .weights import PolynomialWeight

__all__ = [
    "GaborSystem",
    "StftGrid",
    "stft",
    "modulation_norm",
    "frame_coefficients",
    "frame_synthesis",
    "frame_operator_direct",
    "gabor_operator_symbol",
    "gabor_spec",
    "dual_window",
    "ScanRow",
    "scan",
    "SYMBOL_K",
    "SYMBOL_M",
]

SYMBOL_K = 12
SYMBOL_M = 32
# Gaussian windows are below 1e-14 of their peak beyond this radius
SUPPORT_RADIUS = 3.2


@dataclass(frozen=True, eq=False)
class GaborSystem:
    """Window ``g`` on a grid, lattice ``alpha Z x beta Z`` and truncation ``H``.

    ``g_fn`` and ``ghat_fn`` are optional analytic evaluators of the window
    and its transform.  Without them the symbol is built from the
    trigonometric interpolant of ``g`` and of ``dft(g)``.
    """

    g: GridSignal
    alpha: float
    beta: float
    H: int
    g_fn: Callable | None = field(default=None, repr=False)
    ghat_fn: Callable | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.g.d != 1:
            raise ValueError("Gabor systems are implemented for d = 1")
        if not (self.alpha > 0 and self.beta > 0):
            raise ValueError("lattice parameters must be positive")
        if self.H < 0:
            raise ValueError("truncation H must be non-negative")
        if not self.g.norm() > 0:
            raise ValueError("window must be nonzero")
        if self.alpha * self.H > self.g.extent / 2:
            raise ValueError(f"alpha*H = {self.alpha * self.H:g} leaves the torus of length {self.g.extent:g}")
        if self.beta * self.H > self.g.nyquist:
            raise ValueError(f"beta*H = {self.beta * self.H:g} exceeds the Nyquist frequency {self.g.nyquist:g}")

    @classmethod
    def gaussian(cls, alpha: float, beta: float, H: int = 8, extent: float = 16.0, npoints: int = 512, sigma=1.0):
        """``g(t) = (2/sigma^2)^{1/4} exp(-pi t^2 / sigma^2)`` with its analytic transform."""
        w = Gaussian(sigma)
        return cls(w.sample(extent, npoints), alpha, beta, H, w, w.fourier)

    def scaled(self, c: complex) -> "GaborSystem":
        """The system generated by ``c g``."""
        g_fn = None if self.g_fn is None else (lambda t, f=self.g_fn: c * f(t))
        ghat_fn = None if self.ghat_fn is None else (lambda w, f=self.ghat_fn: c * f(w))
        return GaborSystem(self.g * c, self.alpha, self.beta, self.H, g_fn, ghat_fn)

    def shifts(self):
        return range(-self.H, self.H + 1)


@dataclass(frozen=True, eq=False)
class StftGrid:
    """Translation points ``x`` and frequencies ``omega`` at which ``V_g f`` is tabulated.

    The native grid of a signal uses all of its nodes and all of its DFT
    frequencies, so that the quadrature cell is ``(T/N) * (1/T)``.
    """

    x: np.ndarray
    omega: np.ndarray
    dx: float
    domega: float

    @classmethod
    def native(cls, f: GridSignal, x_stride: int = 1, omega_stride: int = 1) -> "StftGrid":
        return cls(
            f.nodes[::x_stride],
            f.frequencies[::omega_stride],
            f.spacing * x_stride,
            omega_stride / f.extent,
        )

    @classmethod
    def uniform(cls, x0: float, x1: float, nx: int, w0: float, w1: float, nw: int) -> "StftGrid":
        x = np.linspace(x0, x1, nx)
        w = np.linspace(w0, w1, nw)
        return cls(x, w, (x1 - x0) / max(nx - 1, 1), (w1 - w0) / max(nw - 1, 1))

    @property
    def cell(self) -> float:
        return self.dx * self.domega


def _row_dft(rows: np.ndarray, extent: float) -> np.ndarray:
    # same centring conventions as signal.dft, applied along the last axis
    n = rows.shape[-1]
    alt = _alternating(n)
    return np.fft.fft(rows * alt, axis=-1) * alt * _centered_phase(n) * (extent / n)


def stft(f: GridSignal, g: GridSignal, grid: StftGrid | None = None) -> np.ndarray:
    """``V_g f(x, w) = (f, M_w T_x g)`` as an array of shape ``(len(x), len(w))``.

    Each translation ``x`` contributes one row: the transform of
    ``f * conj(T_x g)``.  Frequencies on the native grid use the FFT; other
    frequencies are summed directly.

    Raises
    ------
    ValueError
        If ``g`` vanishes or the grids differ.
    """
    if f.d != 1 or g.d != 1:
        raise ValueError("the STFT is implemented for d = 1")
    if not f.same_grid(g):
        raise ValueError("signal and window must share a grid")
    if not g.norm() > 0:
        raise ValueError("window must be nonzero")
    grid = StftGrid.native(f) if grid is None else grid
    n = f.npoints
    gv = g.values
    rows = np.empty((len(grid.x), n), dtype=complex)
    for i, x in enumerate(grid.x):
        rows[i] = f.values * np.conj(_shift_values(gv, np.array([x]), f.extent, 1))
    freqs = f.frequencies
    idx = np.round((grid.omega - freqs[0]) * f.extent).astype(int)
    native = np.all((idx >= 0) & (idx < n)) and np.allclose(freqs[np.clip(idx, 0, n - 1)], grid.omega, atol=1e-12)
    if native:
        return _row_dft(rows, f.extent)[:, idx]
    kernel = np.exp(-2j * np.pi * np.outer(f.nodes, grid.omega)) * f.spacing
    return rows @ kernel


def modulation_norm(f: GridSignal, g: GridSignal, p=2, q=2, m=None, grid: StftGrid | None = None) -> float:
    """Mixed norm ``|| || V_g f(x, w) m(x, w) ||_{L^p_x} ||_{L^q_w}`` by Riemann sums.

    ``m`` is a weight on ``R^2`` or ``None``; infinite exponents are grid maxima.
    """
    if not (p >= 1 and q >= 1):
        raise ValueError("exponents must be >= 1")
    grid = StftGrid.native(f) if grid is None else grid
    V = np.abs(stft(f, g, grid))
    if m is not None:
        X, W = np.meshgrid(grid.x, grid.omega, indexing="ij")
        V = V * m(np.stack([X, W], axis=-1))
    if math.isinf(p):
        inner = V.max(axis=0)
    else:
        inner = (np.sum(V**p, axis=0) * grid.dx) ** (1.0 / p)
    if math.isinf(q):
        return float(inner.max())
    return float((np.sum(inner**q) * grid.domega) ** (1.0 / q))


def _windows(sys: GaborSystem, g: GridSignal | None = None):
    """``T_{alpha h} g`` for ``|h| <= H`` (grid shifts of the sampled window)."""
    g = sys.g if g is None else g
    return {h: translate(g, sys.alpha * h).values for h in sys.shifts()}


def _mod_matrix(sys: GaborSystem, f: GridSignal) -> np.ndarray:
    k = np.arange(-sys.H, sys.H + 1)
    return np.exp(2j * np.pi * sys.beta * np.outer(k, f.nodes))


def frame_coefficients(sys: GaborSystem, f: GridSignal) -> np.ndarray:
    """``(f, g_hk)`` for ``|h|, |k| <= H`` as a ``(2H+1, 2H+1)`` array indexed ``[h, k]``."""
    if not f.same_grid(sys.g):
        raise ValueError("signal and window must share a grid")
    E = _mod_matrix(sys, f)
    wins = _windows(sys)
    return np.array([(np.conj(E) @ (f.values * np.conj(wins[h]))) * f.spacing for h in sys.shifts()])


def frame_synthesis(sys: GaborSystem, coeffs: np.ndarray, window: GridSignal | None = None) -> GridSignal:
    """``sum c_hk M_{beta k} T_{alpha h} window`` (the system's own window by default)."""
    E = _mod_matrix(sys, sys.g)
    wins = _windows(sys, window)
    out = np.zeros(sys.g.npoints, dtype=complex)
    for i, h in enumerate(sys.shifts()):
        out += wins[h] * (coeffs[i] @ E)
    return GridSignal(out, sys.g.extent)


def frame_operator_direct(sys: GaborSystem, f: GridSignal) -> GridSignal:
    """``S f = sum_{|h|,|k| <= H} (f, g_hk) g_hk`` by direct summation."""
    return frame_synthesis(sys, frame_coefficients(sys, f))


def gabor_operator_symbol(sys: GaborSystem, K: int = SYMBOL_K, M: int = SYMBOL_M, H: int | None = None) -> PeriodicSymbol:
    """Coefficients ``|kappa| <= K`` of the frame-operator symbol on ``diag(alpha, beta)``.

    The double sum is truncated at ``H`` (default: enough shifts to cover
    ``SUPPORT_RADIUS`` in both variables, and at least ``sys.H``).
    """
    if H is None:
        H = max(sys.H, math.ceil(SUPPORT_RADIUS / sys.alpha), math.ceil(SUPPORT_RADIUS / sys.beta))
    g = sys.g if sys.g_fn is None else (lambda x: sys.g_fn(x[..., 0]))
    ghat = dft(sys.g) if sys.ghat_fn is None else (lambda w: sys.ghat_fn(w[..., 0]))
    samples = gabor_symbol(g, ghat, sys.alpha, sys.beta, H, M)
    return fourier_coefficients(samples, K)


def gabor_spec(sys: GaborSystem, K: int = SYMBOL_K, M: int = SYMBOL_M) -> OperatorSpec:
    """``Op_0`` of the frame-operator symbol, ready for :func:`apply_series`."""
    return OperatorSpec(gabor_operator_symbol(sys, K, M), 0.0)


def dual_window(sys: GaborSystem, terms: int | None = None, tol: float = 1e-6) -> GridSignal:
    """Canonical dual window ``gamma = S^{-1} g`` by the Neumann series.

    Parameters
    ----------
    sys : GaborSystem
    terms : int, optional
        Number of Neumann terms; by default enough for ``rho^terms < tol / 100``.
    tol : float
        Residual target for ``||S gamma - g|| / ||g||``.

    Raises
    ------
    NotInvertibleError
        When the coefficient criterion fails.  This is inconclusive: the
        certified region is smaller than the set of frames.
    """
    spec = gabor_spec(sys)
    report = invertibility_check(spec.symbol, PolynomialWeight(0.0), 1.0)
    if not report.invertible:
        raise NotInvertibleError(
            f"criterion inconclusive at alpha={sys.alpha:g}, beta={sys.beta:g} (not a proof that no frame exists)",
            report,
        )
    if terms is None:
        rho = report.rho
        terms = 1 if rho == 0 else max(1, math.ceil(math.log(tol / 100) / math.log(rho)) + 1)
    return neumann_inverse_apply(spec, sys.g, terms, tol=tol).signal


@dataclass(frozen=True)
class ScanRow:
    alpha: float
    beta: float
    c0: float
    tail: float
    certified: bool
    lower_bound: float
    zone: str

    HEADER = ("alpha", "beta", "abs_c0", "tail", "certified", "lower_frame_bound_est", "zone")

    def as_tuple(self):
        return (self.alpha, self.beta, self.c0, self.tail, self.certified, self.lower_bound, self.zone)


def _scan_point(alpha, beta, window, extent, npoints, rel_threshold) -> ScanRow:
    sys = GaborSystem(window.sample(extent, npoints), alpha, beta, 0, window, window.fourier)
    spec = gabor_spec(sys)
    rep: InvertibilityReport = invertibility_check(spec.symbol, PolynomialWeight(0.0), 1.0)
    A = dense_matrix(spec, sys.g)
    lower = float(np.linalg.eigvalsh((A + A.conj().T) / 2)[0])
    c0 = abs(rep.c0)
    if rep.invertible:
        zone = "certified"
    elif lower >= rel_threshold * c0:
        zone = "numerically_invertible"
    else:
        zone = "unresolved"
    return ScanRow(float(alpha), float(beta), c0, rep.tail, rep.invertible, lower, zone)


def scan(
    alphas,
    betas,
    sigma: float = 1.0,
    extent: float = 16.0,
    npoints: int = 256,
    rel_threshold: float = 1e-3,
    threads: int = 1,
) -> list[ScanRow]:
    """Zone map over ``alphas x betas`` for the Gaussian window.

    Each point reports ``|c0|``, the coefficient tail, whether the criterion
    certifies invertibility, and the smallest eigenvalue of the Hermitian
    part of the discretised ``Op_0(a)`` as an estimate of the lower frame
    bound.  Points the criterion cannot certify are labelled
    ``numerically_invertible`` when that estimate is at least
    ``rel_threshold * |c0|`` and ``unresolved`` otherwise.  Rows come back in
    ``alpha``-major order whatever the number of threads.
    """
    window = Gaussian(sigma)
    pairs = [(float(a), float(b)) for a in alphas for b in betas]
    work = lambda ab: _scan_point(ab[0], ab[1], window, extent, npoints, rel_threshold)  # noqa: E731
    if threads <= 1:
        return [work(ab) for ab in pairs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(work, pairs))
