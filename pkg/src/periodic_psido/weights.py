"""Polynomial and polynomially moderate weight functions.

Weights are vectorised: they accept arrays of shape ``(..., n)`` and return
arrays of shape ``(...)``.  User-supplied evaluators passed to
:class:`ModerateWeight` must be reentrant if shared between threads.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "PolynomialWeight",
    "ModerateWeight",
    "ModerationReport",
    "eval_weight",
    "moderation_check",
    "default_moderation_samples",
    "parse_weight",
]


def _as_points(z) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    if not np.all(np.isfinite(z)):
        raise ValueError("weight argument must be finite")
    return z


@dataclass(frozen=True)
class PolynomialWeight:
    """``v(z) = (1 + |z|^2)^(s/2)`` with ``s >= 0``."""

    s: float = 0.0

    def __post_init__(self):
        if not (self.s >= 0 and np.isfinite(self.s)):
            raise ValueError(f"weight exponent must be finite and >= 0, got {self.s}")

    def __call__(self, z):
        z = _as_points(z)
        if self.s == 0:
            return np.ones(z.shape[:-1]) if z.ndim else np.float64(1.0)
        r2 = np.sum(z * z, axis=-1) if z.ndim else z * z
        return (1.0 + r2) ** (self.s / 2)

    @property
    def submultiplicative_constant(self) -> float:
        """``C`` in ``v(z1 + z2) <= C v(z1) v(z2)``."""
        return 2.0 ** (self.s / 2)


@dataclass(frozen=True)
class ModerateWeight:
    """A weight ``m`` claimed to satisfy ``m(z1+z2) <= C v(z1) m(z2)``.

    Parameters
    ----------
    evaluator : callable
        Vectorised ``z -> m(z) > 0`` on arrays of shape ``(..., dim)``.
    reference : PolynomialWeight
        The polynomial weight ``v`` the moderation is measured against.
    constant : float
        The moderation constant ``C``.
    dim : int
        Dimension of the space the weight lives on.
    name : str
        Label used in reports.
    """

    evaluator: Callable[[np.ndarray], np.ndarray]
    reference: PolynomialWeight
    constant: float
    dim: int
    name: str = "custom"

    def __post_init__(self):
        if not self.constant > 0:
            raise ValueError("moderation constant must be positive")

    def __call__(self, z):
        return np.asarray(self.evaluator(_as_points(z)), dtype=float)

    @classmethod
    def from_polynomial(cls, v: PolynomialWeight, dim: int) -> "ModerateWeight":
        """``m = v`` itself, moderate with ``C = 2^(s/2)``."""
        return cls(v, v, v.submultiplicative_constant, dim, name=f"polynomial({v.s:g})")

    @classmethod
    def constant_one(cls, dim: int) -> "ModerateWeight":
        return cls(lambda z: np.ones(np.shape(z)[:-1]), PolynomialWeight(0.0), 1.0, dim, name="constant")


def eval_weight(w, z):
    """Evaluate a :class:`PolynomialWeight` or :class:`ModerateWeight` at ``z``."""
    return w(z)


@dataclass(frozen=True)
class ModerationReport:
    max_ratio: float
    constant: float
    passed: bool
    worst_pair: tuple


def default_moderation_samples(dim: int, radius: int = 8):
    """Integer points of ``[-radius, radius]^dim``, used for all ordered pairs."""
    return np.array(list(itertools.product(range(-radius, radius + 1), repeat=dim)), dtype=float)


def moderation_check(m: ModerateWeight, samples=None) -> ModerationReport:
    """Empirical check of ``m(z1+z2) <= C v(z1) m(z2)``.

    Parameters
    ----------
    m : ModerateWeight
    samples : array_like, optional
        Either an ``(k, 2, dim)`` array of explicit pairs or an ``(k, dim)``
        array of points, in which case all ``k^2`` ordered pairs are used.
        Defaults to the integer grid ``[-8, 8]^dim``.
    """
    if samples is None:
        samples = default_moderation_samples(m.dim)
    samples = np.asarray(samples, dtype=float)
    if samples.size == 0:
        raise ValueError("moderation check needs at least one sample")
    if samples.ndim == 3:
        z1, z2 = samples[:, 0, :], samples[:, 1, :]
    else:
        z1 = samples[:, None, :]
        z2 = samples[None, :, :]
        z1, z2 = np.broadcast_arrays(z1, z2)
        z1 = z1.reshape(-1, m.dim)
        z2 = z2.reshape(-1, m.dim)
    m2 = m(z2)
    if np.any(~(m2 > 0)) or np.any(~(m(z1 + z2) > 0)):
        raise ValueError("weight takes zero, negative or non-finite values")
    with np.errstate(over="ignore", invalid="ignore"):
        ratio = m(z1 + z2) / (m.reference(z1) * m2)
    ratio = np.where(np.isfinite(ratio), ratio, np.inf)
    i = int(np.argmax(ratio))
    max_ratio = float(ratio[i])
    return ModerationReport(
        max_ratio=max_ratio,
        constant=float(m.constant),
        passed=bool(max_ratio <= m.constant),
        worst_pair=(tuple(z1[i]), tuple(z2[i])),
    )


_POLY = re.compile(r"^\s*polynomial\s*\(\s*([0-9.eE+-]+)\s*\)\s*$")


def parse_weight(text: str, dim: int) -> ModerateWeight:
    """Build a weight from a configuration string.

    Accepted forms are ``polynomial(s)``, ``constant`` and the presets
    ``peetre`` (``s = 2``) and ``exponential`` (``e^{|z|}``, not moderate; kept
    as a negative control for :func:`moderation_check`).
    """
    key = text.strip().lower()
    if key in ("constant", "one", "1"):
        return ModerateWeight.constant_one(dim)
    if key == "peetre":
        return ModerateWeight.from_polynomial(PolynomialWeight(2.0), dim)
    if key == "exponential":
        return ModerateWeight(
            lambda z: np.exp(np.linalg.norm(z, axis=-1)), PolynomialWeight(2.0), 2.0, dim, name="exponential"
        )
    match = _POLY.match(key)
    if match:
        return ModerateWeight.from_polynomial(PolynomialWeight(float(match.group(1))), dim)
    raise ValueError(f"unknown weight specification {text!r}")
