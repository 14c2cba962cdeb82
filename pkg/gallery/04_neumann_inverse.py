"""
Inverting through the Neumann series
====================================

When the constant coefficient dominates the rest, ``Op_tau(p)`` is
invertible and its inverse is a geometric series in ``I - Op/c0``.  The
residual shrinks at least as fast as the coefficient ratio.
"""

# %%
from periodic_psido.analysis import invertibility_check, neumann_inverse_apply
from periodic_psido.catalog import Gaussian
from periodic_psido.exceptions import NotInvertibleError
from periodic_psido.lattice import PeriodMatrix
from periodic_psido.operator import OperatorSpec, apply_series
from periodic_psido.symbol import PeriodicSymbol
from periodic_psido.weights import PolynomialWeight

L = PeriodMatrix.identity(2)
p = PeriodicSymbol(L, {(0, 0): 1.0, (1, 0): 0.2, (0, 1): 0.1j, (-1, 1): -0.1})
rep = invertibility_check(p, PolynomialWeight(0))
print(f"c0 = {rep.c0.real:g}, tail = {rep.tail:g}, invertible: {rep.invertible}")
print(f"inverse norm bound: {rep.inverse_norm_bound:.4f}, ratio rho = {rep.rho:.2f}")

# %%
f = Gaussian(0.8).sample(16, 256)
res = neumann_inverse_apply(OperatorSpec(p, 0.5), f, 20)
for n in (1, 5, 10, 15, 20):
    print(f"{n:2d} terms: residual {res.history[n - 1]:.2e}  (rho^n = {rep.rho**n:.2e})")
check = (apply_series(OperatorSpec(p, 0.5), res.signal) - f).norm() / f.norm()
print(f"direct composition residual: {check:.2e}")

# %%
# The criterion is sufficient only.  When it fails the code refuses and
# says so; it does not claim the operator is singular.
q = PeriodicSymbol(L, {(0, 0): 1.0, (1, 0): 0.7, (0, 1): 0.5})
try:
    neumann_inverse_apply(OperatorSpec(q), f, 10)
except NotInvertibleError as exc:
    print("refused:", exc)
