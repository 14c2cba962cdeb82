"""Continuity bounds, the invertibility criterion and the Neumann inverse.

Also hosts the Fourier-multiplier apparatus: the necessity witness for
``L^1_v`` boundedness and the ``nu(x) sigma(w)`` counterexample showing that
the coefficient condition is not necessary for ``x``-dependent symbols.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import quad

from .exceptions import ConvergenceWarning, NotInvertibleError
from .lattice import PeriodMatrix, dual_points, enumerate_truncation, symplectic_apply
from .operator import OperatorSpec, apply_multiplier, apply_series, compile_operator
from .signal import GridSignal, lp_m_norm
from .symbol import PeriodCellSamples, PeriodicSymbol, bump, fourier_coefficients
from .weights import PolynomialWeight

__all__ = [
    "BoundReport",
    "InvertibilityReport",
    "NeumannResult",
    "ell1_v_norm",
    "ell1_v_norm_lattice",
    "continuity_bound",
    "power_iteration",
    "operator_norm_estimate",
    "invertibility_check",
    "neumann_inverse_apply",
    "neumann_partial_sum",
    "WitnessReport",
    "multiplier_necessity_witness",
    "unit_bump",
    "CounterexampleReport",
    "half_indicator_coefficients",
    "counterexample_demo",
    "WEIGHT_READING",
]

WEIGHT_READING = "tail weight evaluated at v(J L^-T k), J(x, w) = (-w, x)"
DENOMINATOR_FLOOR = 1e-12


def _weight_values(p: PeriodicSymbol, v) -> np.ndarray:
    if not len(p):
        return np.zeros(0)
    return np.asarray(v(symplectic_apply(p.dual())), dtype=float)


def ell1_v_norm(p: PeriodicSymbol, v) -> float:
    """``sum_kappa v(J L^{-T} kappa) |c_kappa|``."""
    if not len(p):
        return 0.0
    return float(np.sum(_weight_values(p, v) * np.abs(p.values())))


def ell1_v_norm_lattice(p: PeriodicSymbol, v) -> float:
    """The same norm summed over dual lattice points ``mu`` (cross-check)."""
    total = 0.0
    for mu, c in p.lattice_coefficients().items():
        total += abs(c) * float(v(symplectic_apply(np.array(mu))))
    return total


@dataclass(frozen=True)
class BoundReport:
    ell1_v: float
    C: float
    bound: float
    measured_norm: float | None = None
    passed: bool | None = None

    def as_dict(self) -> dict:
        return {
            "ell1_v": self.ell1_v,
            "C": self.C,
            "bound": self.bound,
            "measured_norm": self.measured_norm,
            "pass": self.passed,
        }


def continuity_bound(p: PeriodicSymbol, v, C: float, measured_norm: float | None = None) -> BoundReport:
    """Bound ``C * ||c(p)||_{l^1_{L,v}}`` on the operator norm, for every ``tau``.

    When ``measured_norm`` is given the report records whether it respects
    the bound (with relative slack ``1e-9``).
    """
    if not C > 0:
        raise ValueError("the tfs constant C must be positive")
    ell = ell1_v_norm(p, v)
    bound = C * ell
    passed = None if measured_norm is None else bool(measured_norm <= bound * (1 + 1e-9))
    return BoundReport(ell, float(C), bound, measured_norm, passed)


def power_iteration(
    apply: Callable[[np.ndarray], np.ndarray],
    adjoint: Callable[[np.ndarray], np.ndarray],
    shape: tuple,
    iters: int = 500,
    seed: int = 0,
    rtol: float = 1e-6,
) -> tuple[float, bool]:
    """Largest singular value of ``apply`` by power iteration on ``A* A``.

    Returns the estimate and whether the Rayleigh quotient settled to
    ``rtol``.  The estimate never exceeds the true norm.
    """
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    x /= np.linalg.norm(x)
    prev = None
    lam = 0.0
    for _ in range(iters):
        y = adjoint(apply(x))
        lam = float(np.real(np.vdot(x, y)))
        ny = np.linalg.norm(y)
        if ny == 0:
            return 0.0, True
        if prev is not None and abs(lam - prev) <= rtol * abs(lam):
            return math.sqrt(max(lam, 0.0)), True
        prev = lam
        x = y / ny
    return math.sqrt(max(lam, 0.0)), False


def operator_norm_estimate(
    spec: OperatorSpec,
    template: GridSignal,
    iters: int = 500,
    weight=None,
    seed: int = 0,
    rtol: float = 1e-6,
) -> float:
    """Power-iteration estimate of the discretised operator norm.

    Parameters
    ----------
    spec : OperatorSpec
    template : GridSignal
        Supplies the grid; its values are ignored.
    iters : int
        Iteration cap (at least 10).
    weight : callable, optional
        Weight ``m`` on phase space; the norm is then taken on ``L^2_m``,
        i.e. of ``W A W^{-1}`` with ``W = m(t, 0)``.
    seed : int
        Seed of the random starting vector.
    rtol : float
        Relative tolerance on successive Rayleigh quotients.

    Warns
    -----
    ConvergenceWarning
        If the tolerance is not met within ``iters``; the last estimate is
        returned.
    """
    if iters < 10:
        raise ValueError("power iteration needs at least 10 iterations")
    op = compile_operator(spec, template)
    if weight is None:
        w = np.ones(template.values.shape)
    else:
        pts = template.points.reshape(-1, template.d)
        w = np.asarray(weight(np.concatenate([pts, np.zeros_like(pts)], axis=-1)), dtype=float)
        w = w.reshape(template.values.shape)

    def fwd(x):
        return w * op.apply(x / w)

    def adj(y):
        return op.adjoint(y / w) * w

    est, ok = power_iteration(fwd, adj, template.values.shape, iters, seed, rtol)
    if not ok:
        warnings.warn(
            f"power iteration did not settle in {iters} steps (last estimate {est:.12g})",
            ConvergenceWarning,
            stacklevel=2,
        )
    return est


@dataclass(frozen=True)
class InvertibilityReport:
    c0: complex
    tail: float
    threshold: float
    invertible: bool
    inverse_norm_bound: float | None
    C: float = 1.0
    ell1_v: float = 0.0
    convention: str = WEIGHT_READING

    @property
    def rho(self) -> float:
        """Contraction ratio ``C tail / |c0|`` of the Neumann series."""
        return math.inf if self.c0 == 0 else self.C * self.tail / abs(self.c0)

    def as_dict(self) -> dict:
        return {
            "c0": [self.c0.real, self.c0.imag],
            "tail": self.tail,
            "threshold": self.threshold,
            "invertible": self.invertible,
            "inverse_norm_bound": self.inverse_norm_bound,
            "C": self.C,
            "ell1_v": self.ell1_v,
            "rho": None if math.isinf(self.rho) else self.rho,
            "convention": self.convention,
        }


def invertibility_check(p: PeriodicSymbol, v, C: float = 1.0) -> InvertibilityReport:
    """Sufficient criterion ``c0 != 0`` and ``sum_{kappa != 0} |c_kappa| v(J L^{-T} kappa) < |c0| / C``.

    When it holds, ``inverse_norm_bound = 1 / ((1 + C v(0)) |c0| - C ||c||_{l^1_v})``;
    denominators below ``1e-12`` are refused (left as ``None``).
    """
    if not C > 0:
        raise ValueError("the tfs constant C must be positive")
    zero = (0,) * p.n
    c0 = p.coefficient(zero)
    rest = PeriodicSymbol(p.L, {k: c for k, c in p.coeffs.items() if k != zero})
    tail = ell1_v_norm(rest, v)
    threshold = abs(c0) / C
    invertible = bool(c0 != 0 and tail < threshold)
    ell = ell1_v_norm(p, v)
    bound = None
    if invertible:
        v0 = float(v(np.zeros(p.n)))
        denom = (1 + C * v0) * abs(c0) - C * ell
        if denom >= DENOMINATOR_FLOOR:
            bound = 1.0 / denom
    return InvertibilityReport(complex(c0), tail, threshold, invertible, bound, float(C), ell)


def neumann_partial_sum(apply: Callable, f: np.ndarray, c0: complex, terms: int) -> tuple[np.ndarray, list]:
    """``(1/c0) sum_{n<terms} (I - A/c0)^n f`` by Horner's rule.

    Returns the partial sum and the relative residuals ``||A u_n - f|| / ||f||``
    for ``n = 1 .. terms``.  Each term costs one application of ``A``.
    """
    if terms < 1:
        raise ValueError("need at least one Neumann term")
    nf = np.linalg.norm(f)
    s = f.copy()
    history = []
    for n in range(1, terms + 1):
        r = apply(s) / c0 - f
        history.append(float(np.linalg.norm(r) / nf) if nf else 0.0)
        if n == terms:
            break
        s = s - r
    return s / c0, history


@dataclass(frozen=True)
class NeumannResult:
    signal: GridSignal
    residual: float
    history: list = field(repr=False)
    rho: float
    rho_observed: float | None
    report: InvertibilityReport = field(repr=False)


def neumann_inverse_apply(
    spec: OperatorSpec,
    f: GridSignal,
    terms: int,
    v=None,
    C: float = 1.0,
    tol: float = 1e-6,
) -> NeumannResult:
    """Apply the truncated Neumann inverse of ``Op_tau(p)`` to ``f``.

    Raises
    ------
    NotInvertibleError
        If the sufficient criterion fails; the report is attached.

    Warns
    -----
    ConvergenceWarning
        If the final residual exceeds ``tol``.
    """
    v = PolynomialWeight(0.0) if v is None else v
    report = invertibility_check(spec.symbol, v, C)
    if not report.invertible:
        raise NotInvertibleError("invertibility criterion fails (inconclusive)", report)
    c0 = report.c0
    ext = f.extent
    out, history = neumann_partial_sum(lambda x: apply_series(spec, GridSignal(x, ext)).values, f.values, c0, terms)
    observed = None
    tail = [h for h in history[2:] if h > 0]
    if len(tail) >= 2:
        observed = (tail[-1] / tail[0]) ** (1.0 / (len(tail) - 1))
    if history[-1] > tol:
        warnings.warn(
            f"Neumann residual {history[-1]:.3g} above {tol:g} after {terms} terms "
            f"(rho = {report.rho:.3g}, observed {observed})",
            ConvergenceWarning,
            stacklevel=2,
        )
    return NeumannResult(GridSignal(out, ext), history[-1], history, report.rho, observed, report)


def unit_bump(d: int = 1) -> Callable:
    """Non-negative smooth ``psi`` supported in ``[0,1]^d`` with unit integral."""
    mass, _ = quad(lambda t: float(bump(2 * t - 1)), 0.0, 1.0, epsabs=0.0, epsrel=1e-12)

    def psi(z):
        z = np.asarray(z, dtype=float)
        return np.prod(bump(2 * z - 1) / mass, axis=-1)

    return psi


@dataclass(frozen=True)
class WitnessReport:
    norm_witness: float
    norm_image: float
    lower_bound: float
    K: float
    K_moderation_bound: float
    weighted_sum: float
    passed: bool

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def _spatial(v, d):
    """Lift a weight on ``R^d`` to ``m(t, w) = v(t)`` for :func:`lp_m_norm`."""
    return lambda z: v(np.asarray(z)[..., :d])


def multiplier_necessity_witness(
    P: PeriodMatrix,
    v: PolynomialWeight,
    sigma: PeriodicSymbol | None = None,
    extent: float = 16.0,
    npoints: int = 4096,
    kbox: int = 8,
) -> tuple[GridSignal, WitnessReport]:
    """Witness ``u = |det P| psi(P^T x) / v(x)`` for the necessity argument.

    ``u`` lives on ``P^{-T}[0,1]^d`` with ``||u||_{L^1_v} = 1``.  If ``sigma``
    is given, the report compares ``||sigma(D) u||_{L^1_v}`` with
    ``(1/K) sum_k |c_k| v(P^{-T} k)``, where

        K = sup_{y in P0, |k| <= kbox} v(P^{-T} k) v(y) / v(y - P^{-T} k)

    is computed on the grid and reported next to its moderation bound
    ``C max_{P0} v^2``.
    """
    d = P.n
    psi = unit_bump(d)
    proto = GridSignal.zeros(extent, npoints, d)
    pts = proto.points.reshape(-1, d)
    u = abs(P.det) * psi(pts @ P.entries) / v(pts)
    u = GridSignal(u.reshape(proto.values.shape), extent)
    m = _spatial(v, d)
    norm_u = lp_m_norm(u, 1, m)
    if sigma is None:
        return u, WitnessReport(norm_u, math.nan, math.nan, math.nan, math.nan, math.nan, True)
    if sigma.L != P:
        raise ValueError("the multiplier must be P-periodic")
    image = apply_multiplier(sigma, u)
    norm_image = lp_m_norm(image, 1, m)
    shifts = dual_points(P, np.array(enumerate_truncation(max(kbox, sigma.radius), d)))
    cell = PeriodCellSamples.unit_grid(64, d).reshape(-1, d)
    cell = np.concatenate([cell, np.ones((1, d))])  # include the far corner
    y = cell @ P.linv_t.T
    vy = v(y)
    ratio = v(shifts)[:, None] * vy[None, :] / v(y[None, :, :] - shifts[:, None, :])
    K = float(ratio.max())
    weighted = float(np.sum(np.abs(sigma.values()) * v(sigma.dual())))
    lower = weighted / K
    Kmod = v.submultiplicative_constant * float(vy.max()) ** 2
    return u, WitnessReport(norm_u, norm_image, lower, K, Kmod, weighted, bool(norm_image >= lower - 1e-6))


def half_indicator_coefficients(H: int) -> dict:
    """Fourier coefficients of the 1-periodic indicator of ``[0, 1/2)``, ``|h| <= H``."""
    out = {}
    for h in range(-H, H + 1):
        if h == 0:
            out[(h,)] = 0.5
        elif h % 2:
            out[(h,)] = -1j / (math.pi * h)
    return out


@dataclass(frozen=True)
class CounterexampleReport:
    H: tuple
    partial_sums: tuple
    norms: tuple
    sup_nu: tuple
    sigma_ell1: float
    bounds: tuple
    variation: float
    coefficient_error: float

    def as_dict(self) -> dict:
        return {k: list(v) if isinstance(v, tuple) else v for k, v in self.__dict__.items()}


DEFAULT_SIGMA = {(-1,): 0.25, (0,): 1.0, (1,): 0.5}


def counterexample_demo(
    H_values=(4, 16, 64, 256),
    sigma_coeffs: dict | None = None,
    extent: float = 4.0,
    npoints: int = 4096,
    iters: int = 20000,
) -> CounterexampleReport:
    """``p(x, w) = nu(x) sigma(w)`` with ``nu`` the indicator of ``[0, 1/2)`` mod 1.

    The coefficient sums ``sum_{|h|<=H} |c_h(nu)|`` diverge logarithmically,
    while ``Op_0(p_H) = nu_H(x) sigma(D)`` stays bounded by
    ``||nu_H||_inf sum_k |c_k(sigma)|`` (the partial sums ``nu_H`` overshoot by
    the Gibbs constant, not by the coefficient sum).
    """
    sigma_coeffs = DEFAULT_SIGMA if sigma_coeffs is None else sigma_coeffs
    sigma = PeriodicSymbol(PeriodMatrix.identity(1), sigma_coeffs)
    sig_l1 = float(np.sum(np.abs(sigma.values())))

    # analytic coefficients against the FFT of midpoint-corrected samples
    M = 4096
    y = np.arange(M) / M
    nu_samples = np.where(y < 0.5, 1.0, 0.0)
    nu_samples[0] = nu_samples[M // 2] = 0.5
    extracted = fourier_coefficients(PeriodCellSamples(PeriodMatrix.identity(1), nu_samples), 16)
    exact = half_indicator_coefficients(16)
    coef_err = max(abs(extracted.coefficient(k) - exact.get(k, 0)) for k in enumerate_truncation(16, 1))

    L = PeriodMatrix.identity(2)
    template = GridSignal.zeros(extent, npoints)
    sums, norms, sups, bounds = [], [], [], []
    for H in H_values:
        nu = half_indicator_coefficients(H)
        sums.append(float(sum(abs(c) for c in nu.values())))
        p = PeriodicSymbol(L, {h + k: a * b for h, a in nu.items() for k, b in sigma_coeffs.items()})
        norms.append(operator_norm_estimate(OperatorSpec(p, 0.0), template, iters=iters, rtol=1e-10))
        nu_sym = PeriodicSymbol(PeriodMatrix.identity(1), nu)
        sup = float(np.max(np.abs(nu_sym(template.nodes[:, None]))))
        sups.append(sup)
        bounds.append(sup * sig_l1)
    variation = (max(norms) - min(norms)) / min(norms)
    return CounterexampleReport(
        tuple(H_values), tuple(sums), tuple(norms), tuple(sups), sig_l1, tuple(bounds), variation, coef_err
    )
