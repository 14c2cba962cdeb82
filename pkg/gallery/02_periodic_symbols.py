"""
Periodic symbols and their lattice coefficients
===============================================

A symbol that repeats along a lattice ``L Z^n`` is a Fourier series over the
dual lattice.  Sampling one period cell and taking an FFT recovers the
coefficients exactly for trigonometric polynomials.
"""

# %%
import numpy as np

from periodic_psido.lattice import PeriodMatrix
from periodic_psido.symbol import PeriodCellSamples, fourier_coefficients, partition_of_unity, periodize

L = PeriodMatrix.identity(1)
cosine = PeriodCellSamples.from_function(lambda x: np.cos(2 * np.pi * x[..., 0]), L, 8)
p = fourier_coefficients(cosine, 3)
for kappa, c in p.coeffs.items():
    print(f"c{kappa} = {c.real:+.3f}")

# %%
# Periodizing a Gaussian samples its transform on the dual lattice.  With a
# period ``a`` the coefficients are ``exp(-pi (k/a)^2) / a``.
for a in (1.0, 2.0):
    La = PeriodMatrix.diagonal([a])
    phi = periodize(lambda x: np.exp(-np.pi * x[..., 0] ** 2), La, 12)
    q = fourier_coefficients(PeriodCellSamples.from_function(phi, La, 64), 4, prune=0)
    worst = max(abs(q.coefficient((k,)) - np.exp(-np.pi * (k / a) ** 2) / a) for k in range(-4, 5))
    print(f"a = {a:g}: max coefficient error {worst:.1e}")

# %%
# A compactly supported partition of unity: its integer translates add up
# to one everywhere.
x = np.linspace(-2, 2, 9)[:, None]
total = periodize(partition_of_unity, L, 4)(x)
print("sum of translates:", np.round(total, 15))

# %%
# Two-dimensional lattices work the same way.  Here is a shear.
S = PeriodMatrix([[1.0, 1.0], [0.0, 1.0]])
phi = periodize(lambda x: np.exp(-np.pi * np.sum(x**2, -1)), S, 8)
q = fourier_coefficients(PeriodCellSamples.from_function(phi, S, 32), 2, prune=1e-12)
mu = S.linv_t @ np.array([1, 0])
print(f"c(1,0) = {q.coefficient((1, 0)).real:.12f}, exp(-pi |mu|^2) = {np.exp(-np.pi * mu @ mu):.12f}")
