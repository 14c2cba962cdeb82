"""
Applying Op_tau(p) and bounding its norm
========================================

Each coefficient of a periodic symbol contributes one time-frequency shift,
so the operator is applied matrix-free.  An independent quadrature of the
integral definition confirms the result, and power iteration shows the norm
sitting below the weighted coefficient sum.
"""

# %%
import numpy as np

from periodic_psido.analysis import continuity_bound, operator_norm_estimate
from periodic_psido.catalog import HermiteGaussian
from periodic_psido.lattice import PeriodMatrix
from periodic_psido.operator import OperatorSpec, apply_oracle, apply_series
from periodic_psido.signal import GridSignal
from periodic_psido.symbol import PeriodicSymbol
from periodic_psido.weights import ModerateWeight, PolynomialWeight, moderation_check

L = PeriodMatrix.diagonal([2.0, 0.5])
p = PeriodicSymbol(L, {(0, 0): 1.0, (1, 0): 0.3j, (-2, 1): 0.25, (1, -1): -0.2})
s = HermiteGaussian(1, 0.8)
f = s.sample(16, 512)

# %%
# The series and the quadrature oracle agree for every quantisation.
for tau in (0.0, 0.5, 1.0):
    a = apply_series(OperatorSpec(p, tau), f)
    b = apply_oracle(p, tau, s, f)
    print(f"tau = {tau:.1f}: relative difference {(a - b).norm() / b.norm():.1e}")

# %%
# On L^2 the bound is the plain l^1 norm of the coefficients.  It does not
# depend on tau, while the measured norm may.
template = GridSignal.zeros(16, 256)
for tau in (0.0, 0.5, 1.0):
    est = operator_norm_estimate(OperatorSpec(p, tau), template, iters=3000)
    rep = continuity_bound(p, PolynomialWeight(0), 1.0, est)
    print(f"tau = {tau:.1f}: norm {est:.6f} <= bound {rep.bound:.6f}: {rep.passed}")

# %%
# On the weighted space L^2_m with m = (1 + |z|^2) the constant comes from
# the moderation check and the coefficients are weighted at J L^-T kappa.
m = ModerateWeight.from_polynomial(PolynomialWeight(2), 2)
mod = moderation_check(m)
est = operator_norm_estimate(OperatorSpec(p, 0.5), template, iters=3000, weight=m)
rep = continuity_bound(p, m.reference, mod.constant, est)
print(f"moderation ratio {mod.max_ratio:.3f} <= C = {mod.constant:g}")
print(f"weighted norm {est:.4f} <= bound {rep.bound:.4f}: {rep.passed}")
