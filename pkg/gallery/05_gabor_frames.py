"""
Gabor frame operators and dual windows
======================================

The frame operator of a Gaussian Gabor system is ``Op_0`` of a symbol that
repeats along ``alpha Z x beta Z``.  Its coefficients are known in closed
form, so the invertibility criterion can be evaluated directly, and the dual
window follows from the Neumann series.
"""

# %%
import warnings

import numpy as np

from periodic_psido.catalog import Gaussian
from periodic_psido.gabor import (
    GaborSystem,
    dual_window,
    frame_coefficients,
    frame_operator_direct,
    frame_synthesis,
    gabor_spec,
    scan,
    stft,
)
from periodic_psido.operator import apply_series
from periodic_psido.signal import WrapAroundWarning, tfs_apply

sys = GaborSystem.gaussian(0.5, 0.5, 8, 16, 256)
spec = gabor_spec(sys)
c0 = spec.symbol.coefficient((0, 0))
print(f"symbol terms: {len(spec.symbol)}, c0 = {c0.real:.6f} (1/(alpha beta) = {1 / 0.25:g})")

# %%
# Frame operator by direct summation against the symbol form.
f = tfs_apply(Gaussian(0.9).sample(16, 256), [1.0, 0.5]) + 0.5j * Gaussian(1.1).sample(16, 256)
direct = frame_operator_direct(sys, f)
via_symbol = apply_series(spec, f)
print(f"|S f - Op_0(a) f| / |f| = {(direct - via_symbol).norm() / f.norm():.1e}")

# %%
# The canonical dual window reconstructs f from its frame coefficients.
# The synthesis runs over more shifts than S did, so that it covers f.  The
# outermost windows brush the seam of the torus and trigger wrap-around
# warnings; their coefficients are negligible, so they are silenced here.
gamma = dual_window(sys)
wide = GaborSystem.gaussian(0.5, 0.5, 12, 16, 256)
with warnings.catch_warnings():
    warnings.simplefilter("ignore", WrapAroundWarning)
    rec = frame_synthesis(wide, frame_coefficients(wide, f), window=gamma)
print(f"reconstruction error: {(rec - f).norm() / f.norm():.1e}")

# %%
# The STFT of the Gaussian against itself has modulus exp(-pi (x^2 + w^2)/2).
g = Gaussian(1.0).sample(16, 256)
V = stft(g, g)
X, W = np.meshgrid(g.nodes, g.frequencies, indexing="ij")
print(f"closed-form STFT error: {np.abs(np.abs(V) - np.exp(-np.pi * (X**2 + W**2) / 2)).max():.1e}")

# %%
# Zone map over (alpha, beta).  C: certified by the coefficient criterion,
# n: not certified but the smallest eigenvalue of S stays away from zero,
# ?: unresolved.
vals = np.round(np.linspace(0.3, 1.2, 10), 2)
rows = scan(vals, vals, threads=4)
mark = {"certified": "C", "numerically_invertible": "n", "unresolved": "?"}
grid = {(r.alpha, r.beta): mark[r.zone] for r in rows}
print("beta \\ alpha " + " ".join(f"{a:4.1f}" for a in vals))
for b in vals[::-1]:
    print(f"{b:12.1f} " + " ".join(f"{grid[(float(a), float(b))]:>4}" for a in vals))
