"""
Fourier multipliers: necessity and its failure for x-dependent symbols
======================================================================

For a periodic multiplier ``sigma(D)`` the weighted l^1 condition on its
coefficients is also necessary for boundedness on ``L^1_v``: a bump placed in
one period cell is copied to disjoint cells, one per coefficient.  Once the
symbol depends on ``x`` this breaks down.  The indicator of a half period has
coefficients with a divergent sum, yet the operator stays bounded.
"""

# %%
import warnings

from periodic_psido.analysis import counterexample_demo, multiplier_necessity_witness
from periodic_psido.exceptions import ConvergenceWarning
from periodic_psido.lattice import PeriodMatrix
from periodic_psido.symbol import PeriodicSymbol
from periodic_psido.weights import PolynomialWeight

P = PeriodMatrix.identity(1)
sigma = PeriodicSymbol(P, {(-1,): 0.25, (0,): 1.0, (2,): 0.5j})
for s in (0, 2):
    u, rep = multiplier_necessity_witness(P, PolynomialWeight(s), sigma)
    print(
        f"s = {s}: |u| = {rep.norm_witness:.8f}, |sigma(D) u| = {rep.norm_image:.4f} "
        f">= {rep.lower_bound:.4f} (K = {rep.K:.3f})"
    )

# %%
# The counterexample.  Coefficient sums grow like log H; the operator norm
# settles at sup|nu_H| times the l^1 norm of sigma.
with warnings.catch_warnings():
    warnings.simplefilter("ignore", ConvergenceWarning)
    rep = counterexample_demo()
print(" H    sum|c_h|   norm     sup|nu_H|*|sigma|_1")
for H, a, n, b in zip(rep.H, rep.partial_sums, rep.norms, rep.bounds):
    print(f"{H:3d}  {a:8.4f}  {n:8.5f}  {b:8.5f}")
print(f"relative spread of the norms: {100 * rep.variation:.2f}%")
