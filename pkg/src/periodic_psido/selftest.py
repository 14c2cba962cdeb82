"""Quick invariant suite behind ``periodic-psido selftest``.

Every check is deterministic and runs on small grids; the summary lists
each check with its measured error and the tolerance it was held to.
"""

from __future__ import annotations

import time
import warnings

import numpy as np

from .analysis import continuity_bound, invertibility_check, neumann_inverse_apply, operator_norm_estimate
from .catalog import Gaussian, HermiteGaussian
from .gabor import GaborSystem, frame_operator_direct, gabor_spec, stft
from .lattice import PeriodMatrix, enumerate_truncation
from .operator import OperatorSpec, apply_oracle, apply_series
from .signal import GridSignal, dft, modulate, tfs_apply, translate
from .symbol import PeriodCellSamples, PeriodicSymbol, fourier_coefficients, partition_of_unity, periodize
from .weights import ModerateWeight, PolynomialWeight, moderation_check

__all__ = ["CHECKS", "run_selftest"]


def _random_symbol(rng, L, terms=4, K=2):
    box = enumerate_truncation(K, L.n)
    idx = rng.choice(len(box), terms, replace=False)
    return PeriodicSymbol(L, {box[i]: complex(rng.normal(), rng.normal()) for i in idx})


def check_identity():
    f = HermiteGaussian(1, 0.8).sample(16, 256)
    p = PeriodicSymbol.constant(PeriodMatrix.identity(2))
    return max((apply_series(OperatorSpec(p, t), f) - f).norm() / f.norm() for t in (0, 0.5, 1)), 1e-12


def check_oracle():
    rng = np.random.default_rng(1)
    s = Gaussian(0.6)
    f = s.sample(16, 512)
    err = 0.0
    for L in (PeriodMatrix.identity(2), PeriodMatrix.diagonal([2, 0.5])):
        p = _random_symbol(rng, L)
        for t in (0, 0.5, 1):
            err = max(err, (apply_series(OperatorSpec(p, t), f) - apply_oracle(p, t, s, f)).norm() / f.norm())
    return err, 1e-7


def check_commutation():
    rng = np.random.default_rng(2)
    f = Gaussian(0.9).sample(16, 256)
    err = 0.0
    for _ in range(5):
        x, w = rng.uniform(-2, 2, 2)
        lhs = translate(modulate(f, w), x).values
        rhs = np.exp(-2j * np.pi * x * w) * tfs_apply(f, [x, w]).values
        err = max(err, np.abs(lhs - rhs).max())
    return err, 1e-9


def check_dft_roundtrip():
    f = HermiteGaussian(3, 1.1).sample(12, 256)
    return float(np.abs(dft(dft(f), "inverse").values - f.values).max()), 1e-12


def check_periodization():
    L = PeriodMatrix.identity(1)
    phi = periodize(lambda x: np.exp(-np.pi * x[..., 0] ** 2), L, 8)
    c = fourier_coefficients(PeriodCellSamples.from_function(phi, L, 32), 4)
    err = max(abs(c.coefficient((k,)) - np.exp(-np.pi * k**2)) for k in range(-4, 5))
    pou = periodize(partition_of_unity, L, 3)(np.linspace(-1, 1, 101)[:, None])
    return max(err, float(np.abs(pou - 1).max())), 1e-10


def check_continuity():
    rng = np.random.default_rng(3)
    p = _random_symbol(rng, PeriodMatrix.identity(2), terms=6)
    template = GridSignal.zeros(16, 256)
    worst = 0.0
    for t in (0, 0.5, 1):
        norm = operator_norm_estimate(OperatorSpec(p, t), template, iters=2000)
        rep = continuity_bound(p, PolynomialWeight(0), 1.0, norm)
        worst = max(worst, norm - rep.bound)
    return max(worst, 0.0), 1e-9


def check_neumann():
    L = PeriodMatrix.identity(2)
    p = PeriodicSymbol(L, {(0, 0): 1.0, (1, 0): 0.2, (0, -1): 0.1j, (1, 1): -0.1})
    f = Gaussian(0.8).sample(16, 256)
    err = 0.0
    for t in (0, 0.5, 1):
        spec = OperatorSpec(p, t)
        u = neumann_inverse_apply(spec, f, 20).signal
        err = max(err, (apply_series(spec, u) - f).norm() / f.norm())
    assert invertibility_check(p, PolynomialWeight(0)).invertible
    return err, 1e-6


def check_moderation():
    rep = moderation_check(ModerateWeight.from_polynomial(PolynomialWeight(2.0), 2))
    return max(rep.max_ratio - rep.constant, 0.0), 0.0


def check_stft():
    g = Gaussian(1.0).sample(16, 256)
    V = stft(g, g)
    X, W = np.meshgrid(g.nodes, g.frequencies, indexing="ij")
    return float(np.abs(np.abs(V) - np.exp(-np.pi * (X**2 + W**2) / 2)).max()), 1e-8


def check_gabor():
    sys = GaborSystem.gaussian(0.5, 0.5, 8, 16, 256)
    f = modulate(Gaussian(0.8).sample(16, 256), 0.4)
    err = (frame_operator_direct(sys, f) - apply_series(gabor_spec(sys), f)).norm() / f.norm()
    return err, 1e-4


CHECKS = {
    "identity_symbol": check_identity,
    "series_vs_oracle": check_oracle,
    "tfs_commutation": check_commutation,
    "dft_roundtrip": check_dft_roundtrip,
    "periodization": check_periodization,
    "continuity_bound": check_continuity,
    "neumann_inverse": check_neumann,
    "moderation": check_moderation,
    "stft_gaussian": check_stft,
    "gabor_identification": check_gabor,
}


def run_selftest(timing: bool = False) -> dict:
    """Run every check; a check that raises is recorded as failed."""
    results = []
    for name, fn in CHECKS.items():
        t0 = time.perf_counter()
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                err, tol = fn()
            rec = {"name": name, "pass": bool(err <= tol), "error": float(err), "tolerance": tol}
        except Exception as exc:  # reported, not raised
            rec = {"name": name, "pass": False, "error": None, "tolerance": None, "exception": repr(exc)}
        if timing:
            rec["runtime_s"] = time.perf_counter() - t0
        results.append(rec)
    return {"passed": all(r["pass"] for r in results), "checks": results}
