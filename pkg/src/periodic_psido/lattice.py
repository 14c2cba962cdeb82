"""Period matrices, dual lattice points and the symplectic map.

A period matrix ``L`` in GL(n) defines the lattice ``L Z^n`` of periods and
the dual lattice ``L^{-T} Z^n`` on which the Fourier series of an
``L``-periodic function lives.  For symbols on phase space ``n = 2d`` and
vectors are split as ``z = (x, omega)``.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

__all__ = [
    "PeriodMatrix",
    "dual_point",
    "dual_points",
    "split_components",
    "symplectic_apply",
    "symplectic_form",
    "enumerate_truncation",
    "index_order_key",
]

MAX_CONDITION = 1e12


@dataclass(frozen=True, eq=False)
class PeriodMatrix:
    """Invertible ``n x n`` real matrix with its inverse transpose cached.

    Parameters
    ----------
    entries : array_like
        Square real matrix ``L``.  Rejected when singular or when its
        condition number exceeds ``1e12``.

    Examples
    --------
    >>> L = PeriodMatrix.diagonal([2.0, 4.0])
    >>> L.linv_t
    array([[0.5 , 0.  ],
           [0.  , 0.25]])
    """

    entries: np.ndarray
    det: float = field(init=False)
    linv_t: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        a = np.array(self.entries, dtype=float)
        if a.ndim == 0:
            a = a.reshape(1, 1)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"period matrix must be square, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise ValueError("period matrix has non-finite entries")
        with warnings.catch_warnings():
            # singular input is reported below
            warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
            lu, piv = scipy.linalg.lu_factor(a, check_finite=False)
        det = float(np.prod(np.diag(lu)) * (-1) ** np.count_nonzero(piv != np.arange(len(piv))))
        if det == 0.0 or not np.isfinite(det):
            raise ValueError("period matrix is singular")
        cond = np.linalg.cond(a)
        if not np.isfinite(cond) or cond > MAX_CONDITION:
            raise ValueError(f"period matrix is ill-conditioned (cond = {cond:.3g})")
        # L^{-T} solves L^T X = I
        linv_t = scipy.linalg.lu_solve((lu, piv), np.eye(len(a)), trans=1, check_finite=False)
        a.setflags(write=False)
        linv_t.setflags(write=False)
        object.__setattr__(self, "entries", a)
        object.__setattr__(self, "det", det)
        object.__setattr__(self, "linv_t", linv_t)

    @classmethod
    def identity(cls, n: int) -> "PeriodMatrix":
        return cls(np.eye(n))

    @classmethod
    def diagonal(cls, diag) -> "PeriodMatrix":
        return cls(np.diag(np.asarray(diag, dtype=float)))

    @classmethod
    def block_diagonal(cls, alpha, beta) -> "PeriodMatrix":
        """``diag(alpha_1..alpha_d, beta_1..beta_d)`` for ``ab``-periodic symbols."""
        alpha = np.atleast_1d(np.asarray(alpha, dtype=float))
        beta = np.atleast_1d(np.asarray(beta, dtype=float))
        return cls.diagonal(np.concatenate([alpha, beta]))

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @property
    def volume(self) -> float:
        """Lattice volume ``|det L|``."""
        return abs(self.det)

    def to_list(self) -> list[list[float]]:
        return self.entries.tolist()

    def __eq__(self, other):
        if not isinstance(other, PeriodMatrix):
            return NotImplemented
        return np.array_equal(self.entries, other.entries)

    def __hash__(self):
        return hash(self.entries.tobytes())

    def __repr__(self):
        return f"PeriodMatrix({self.entries.tolist()!r})"


def dual_point(L: PeriodMatrix, kappa) -> np.ndarray:
    """Return ``mu = L^{-T} kappa``, a point of the dual lattice."""
    kappa = np.asarray(kappa)
    if kappa.shape != (L.n,):
        raise ValueError(f"index has shape {kappa.shape}, expected ({L.n},)")
    return L.linv_t @ kappa.astype(float)


def dual_points(L: PeriodMatrix, kappas) -> np.ndarray:
    """Vectorised :func:`dual_point` for an ``(m, n)`` array of indices."""
    kappas = np.asarray(kappas, dtype=float).reshape(-1, L.n)
    return kappas @ L.linv_t.T


def split_components(mu):
    """Split a phase-space vector ``(x, omega)`` into its two halves."""
    mu = np.asarray(mu)
    if mu.shape[-1] % 2:
        raise ValueError("phase-space vector must have even length")
    d = mu.shape[-1] // 2
    return mu[..., :d], mu[..., d:]


def symplectic_apply(z):
    """``J z = (-omega, x)`` for ``z = (x, omega)``."""
    x, omega = split_components(z)
    return np.concatenate([-omega, x], axis=-1)


def symplectic_form(z1, z2) -> float:
    """``<z1, J z2> = x2 . omega1 - x1 . omega2``."""
    x1, w1 = split_components(np.asarray(z1, dtype=float))
    x2, w2 = split_components(np.asarray(z2, dtype=float))
    # written as a difference of equal products so that (z, z) gives exactly 0
    return float(np.dot(x2, w1) - np.dot(x1, w2))


def index_order_key(kappa) -> tuple:
    """Sort key for multi-indices: sup-norm ring first, then lexicographic."""
    kappa = tuple(int(k) for k in kappa)
    return (max((abs(k) for k in kappa), default=0), kappa)


def enumerate_truncation(K: int, n: int) -> list[tuple[int, ...]]:
    """All ``kappa`` in ``Z^n`` with ``|kappa|_inf <= K`` in canonical order.

    The order (sup-norm ring, then lexicographic) fixes the summation order of
    every truncated series in the package.
    """
    if K < 0:
        raise ValueError("truncation radius must be non-negative")
    box = itertools.product(range(-K, K + 1), repeat=n)
    return sorted(box, key=index_order_key)
