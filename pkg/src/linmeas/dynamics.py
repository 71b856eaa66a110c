"""Interaction generator and closed-form Heisenberg transfer matrices.

The interaction ``alpha Q1 P2 + beta P1 Q2 + gamma (Q1 P1 - Q2 P2)`` (coupling
fixed to 1, free dynamics ignored) evolves positions by ``exp(t S)`` and
momenta by ``exp(-t S^T)`` with ``S = [[gamma, beta], [alpha, -gamma]]``.
Since ``S`` is traceless, ``S @ S = -D I`` with ``D = det S``, which gives a
closed form in terms of cos/sin, polynomial, or cosh/sinh.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# closed forms are used when |D| tau^2 exceeds this; below it a joint series
SERIES_THRESHOLD = 1e-6
_SERIES_TERMS = 8


@dataclass(frozen=True)
class InteractionParams:
    alpha: float
    beta: float
    gamma: float

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")

    def discriminant(self):
        """``det S = -(gamma^2 + alpha beta)``."""
        return 0.0 - (self.gamma * self.gamma + self.alpha * self.beta)


VON_NEUMANN = InteractionParams(1.0, 0.0, 0.0)
ERROR_FREE = InteractionParams(2 / (3 * math.sqrt(3)), -2 / (3 * math.sqrt(3)), 1 / (3 * math.sqrt(3)))


@dataclass(frozen=True)
class TransferMatrix:
    """Entries of ``exp(tau S)``: positions map as ``(Q1, Q2) -> [[a, b], [c, d]] (Q1, Q2)``."""

    a: float
    b: float
    c: float
    d: float

    def as_array(self):
        return np.array([[self.a, self.b], [self.c, self.d]])

    def det(self):
        return self.a * self.d - self.b * self.c

    @classmethod
    def from_array(cls, m):
        m = np.asarray(m, dtype=float)
        return cls(float(m[0, 0]), float(m[0, 1]), float(m[1, 0]), float(m[1, 1]))


def interaction_matrix(p):
    return np.array([[p.gamma, p.beta], [p.alpha, -p.gamma]], dtype=float)


def _cos_sinc(x, tau):
    """Return ``cos(tau sqrt(D))`` and ``sin(tau sqrt(D)) / sqrt(D)`` for ``x = D tau^2``.

    Both are entire in ``D``; the series in ``x`` covers either sign.
    """
    c, s = 0.0, 0.0
    term_c, term_s = 1.0, 1.0
    for k in range(_SERIES_TERMS):
        c += term_c
        s += term_s
        term_c *= -x / ((2 * k + 1) * (2 * k + 2))
        term_s *= -x / ((2 * k + 2) * (2 * k + 3))
    return c, tau * s


def evolution_coefficients(D, tau):
    """Scalars ``(f, g)`` with ``exp(tau S) = f I + g S`` for a traceless ``S`` of determinant ``D``."""
    x = D * tau * tau
    if abs(x) <= SERIES_THRESHOLD:
        return _cos_sinc(x, tau)
    if D > 0:
        r = math.sqrt(D)
        return math.cos(tau * r), math.sin(tau * r) / r
    r = math.sqrt(-D)
    return math.cosh(tau * r), math.sinh(tau * r) / r


def transfer_matrix(p, tau):
    """Closed-form ``exp(tau S)`` for the interaction ``p`` acting for time ``tau``."""
    if not math.isfinite(tau):
        raise ValueError("tau must be finite")
    D = p.discriminant()
    if D < 0 and -D * tau * tau > SERIES_THRESHOLD:
        # cosh(x) -/+ k sinh(x) in exponential form avoids cancellation for k near 1
        r = math.sqrt(-D)
        k = p.gamma / r
        e = math.exp(tau * r)
        g = math.sinh(tau * r) / r
        return TransferMatrix(
            a=0.5 * ((1 + k) * e + (1 - k) / e),
            b=g * p.beta,
            c=g * p.alpha,
            d=0.5 * ((1 - k) * e + (1 + k) / e),
        )
    f, g = evolution_coefficients(D, tau)
    return TransferMatrix(
        a=f + g * p.gamma,
        b=g * p.beta,
        c=g * p.alpha,
        d=f - g * p.gamma,
    )


def momentum_transfer(t):
    """``exp(-tau S^T)`` written in terms of the position transfer entries."""
    return np.array([[t.d, -t.c], [-t.b, t.a]])


def expm_series(S, tau=1.0):
    """Matrix exponential ``exp(tau S)`` by scaling and squaring a Taylor series.

    Generic in the matrix entries; it does not use the traceless structure,
    which keeps it independent of :func:`transfer_matrix`.
    """
    A = tau * np.asarray(S, dtype=float)
    norm = np.abs(A).sum(axis=0).max()
    squarings = max(0, math.ceil(math.log2(norm / 0.25))) if norm > 0.25 else 0
    A = A / 2.0**squarings
    n = A.shape[0]
    result = np.eye(n)
    term = np.eye(n)
    for k in range(1, 30):
        term = term @ A / k
        result = result + term
        if np.abs(term).max() <= 1e-18 * np.abs(result).max():
            break
    for _ in range(squarings):
        result = result @ result
    return result
