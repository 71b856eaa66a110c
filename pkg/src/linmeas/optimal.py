"""Measurements that saturate the error-disturbance bound in a minimum uncertainty state.

A linear position measurement with transfer entries ``(c, d)`` saturates
``eps^2 sigma_p^2 + sigma_q^2 eta^2 = hbar^2 / 4`` exactly when ``c, d > 0``,
``c + d = 1`` and the probe is the wave packet returned by :func:`probe_xi_c`.
This module checks those conditions, builds the three named families and
solves for interaction parameters with a prescribed ``c``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from scipy import optimize

from .dynamics import InteractionParams, transfer_matrix
from .gaussian import GaussianState
from .measurement import LinearPositionMeasurement

DEFAULT_TOL = 1e-9


class InfeasibleError(ValueError):
    """No interaction with ``alpha > 0`` meets the requested constraints."""


class Family(str, Enum):
    A = "A"
    B = "B"
    C = "C"


class Regime(str, Enum):
    POSITIVE = "positive"
    ZERO = "zero"
    NEGATIVE = "negative"


def _check_unit_interval(name, value):
    if not (0.0 < value < 1.0):
        raise ValueError(f"{name} must lie in (0, 1), got {value}")


def probe_xi_c(c, psi):
    """Probe wave packet that makes a ``(c, 1 - c)`` measurement optimal for ``psi``.

    Centered at ``psi.mean_q`` with opposite momentum ``-psi.mean_p`` and
    position spread ``sqrt(c / (1 - c)) * psi.sigma_q``.
    """
    _check_unit_interval("c", c)
    if not psi.is_minimum_uncertainty():
        raise ValueError("psi must be a minimum uncertainty state")
    return GaussianState.minimum_uncertainty(
        psi.mean_q, 0.0 - psi.mean_p, math.sqrt(c / (1.0 - c)) * psi.sigma_q, psi.hbar
    )


def theorem_conditions(m, psi, tol=DEFAULT_TOL):
    """Positivity and sum rule for ``(c, d)`` plus the probe-state identity, as a dict of booleans."""
    t = m.transfer()
    c, d = t.c, t.d
    x = m.probe
    out = {"positive": c > 0 and d > 0, "sum_rule": abs(c + d - 1.0) <= tol}
    if not (out["positive"] and c < 1):
        out["probe"] = False
        return out
    target = math.sqrt(c / (1.0 - c)) * psi.sigma_q
    out["probe"] = (
        x.is_minimum_uncertainty(tol)
        and abs(x.mean_q - psi.mean_q) <= tol * (psi.sigma_q + abs(psi.mean_q))
        and abs(x.mean_p + psi.mean_p) <= tol * (psi.sigma_p + abs(psi.mean_p))
        and abs(x.sigma_q - target) <= tol * target
    )
    return out


def saturation_conditions(m, psi, tol=DEFAULT_TOL):
    """The four moment conditions equivalent to saturation, as a dict of booleans.

    These are stated on the raw moments and do not single out a probe state,
    so they serve as an independent check of :func:`theorem_conditions`.
    """
    t = m.transfer()
    c, d = t.c, t.d
    x = m.probe
    hbar = psi.hbar
    scale_q = psi.sigma_q + abs(psi.mean_q) + abs(x.mean_q)
    scale_p = psi.sigma_p + abs(psi.mean_p) + abs(x.mean_p)
    return {
        "centered": abs((c - 1) * psi.mean_q + d * x.mean_q) <= tol * scale_q
        and abs((d - 1) * psi.mean_p - c * x.mean_p) <= tol * scale_p,
        "balanced": abs(abs(c) * psi.sigma_q * x.sigma_p - abs(d) * x.sigma_q * psi.sigma_p)
        <= tol * hbar * (abs(c) + abs(d)),
        "probe_minimal": abs(x.sigma_q * x.sigma_p - 0.5 * hbar) <= tol * 0.5 * hbar,
        "convex": c >= -tol and d >= -tol and abs(c + d - 1.0) <= tol,
    }


def is_minimum_error_disturbance(m, psi, tol=DEFAULT_TOL):
    """True when the measurement saturates the bound in ``psi``.

    Requires both the theorem form and the moment form to hold.
    """
    if not psi.is_minimum_uncertainty(max(tol, 1e-12)):
        raise ValueError("psi must be a minimum uncertainty state")
    return all(theorem_conditions(m, psi, tol).values()) and all(
        saturation_conditions(m, psi, tol).values()
    )


def family_params(kind, mu):
    """Interaction parameters and duration of family member ``kind`` at ``mu``."""
    _check_unit_interval("mu", mu)
    kind = Family(kind)
    if kind is Family.A:
        return InteractionParams(math.sqrt(mu / (2 - mu)), -math.sqrt((2 - mu) / mu), 0.0), math.acos(1 - mu)
    if kind is Family.B:
        return InteractionParams(1.0, -1.0, 1.0), mu
    return InteractionParams(2 * (1 - mu) / (2 - mu), 0.0, 1.0), -math.log1p(-mu)


def family(kind, mu, psi):
    """Family member at ``mu``, with the matching optimal probe."""
    params, tau = family_params(kind, mu)
    return LinearPositionMeasurement(params, tau, probe_xi_c(mu, psi))


@dataclass(frozen=True)
class SolverInput:
    mu: float
    gamma: float
    discriminant: float

    def __post_init__(self):
        _check_unit_interval("mu", self.mu)
        if not (math.isfinite(self.gamma) and math.isfinite(self.discriminant)):
            raise ValueError("gamma and discriminant must be finite")


@dataclass(frozen=True)
class SolverOutput:
    alpha: float
    beta: float
    tau: float
    regime: Regime

    def params(self, gamma):
        return InteractionParams(self.alpha, self.beta, gamma)


def classify(D, gamma):
    if abs(D) <= 1e-12 * (1 + gamma * gamma):
        return Regime.ZERO
    return Regime.POSITIVE if D > 0 else Regime.NEGATIVE


def optimal_alpha(mu, gamma, D):
    """Positive root of ``(2 - mu) a^2 - 2 (1 - mu) gamma a - mu (gamma^2 + D) = 0``.

    The discriminant of this quadratic simplifies to ``gamma^2 + mu (2 - mu) D``.
    """
    disc = gamma * gamma + mu * (2 - mu) * D
    if disc < 0:
        raise InfeasibleError("no real root for alpha")
    alpha = ((1 - mu) * gamma + math.sqrt(disc)) / (2 - mu)
    if not alpha > 0:
        raise InfeasibleError("no positive root for alpha")
    return alpha


def solve_params(inp):
    """Interaction ``(alpha, beta, tau)`` with ``alpha > 0`` giving ``c = mu`` and ``d = 1 - mu``.

    Raises
    ------
    InfeasibleError
        If ``D < 0`` and ``gamma < sqrt(-D)``.
    ValueError
        If ``gamma`` is negative (``D > 0``) or not positive (``D = 0``).
    """
    mu, gamma, D = inp.mu, inp.gamma, inp.discriminant
    regime = classify(D, gamma)
    if regime is Regime.POSITIVE and gamma < 0:
        raise ValueError("gamma must be nonnegative when D > 0")
    if regime is Regime.ZERO:
        if not gamma > 0:
            raise ValueError("gamma must be positive when D = 0")
        gamma = float(gamma)
        return SolverOutput(gamma, -gamma, mu / gamma, regime)
    if regime is Regime.NEGATIVE and gamma < math.sqrt(-D):
        raise InfeasibleError(f"infeasible: gamma < sqrt(-D) ({gamma} < {math.sqrt(-D)})")

    alpha = optimal_alpha(mu, gamma, D)
    beta = (0.0 - (gamma * gamma + D)) / alpha + 0.0
    r = math.sqrt(abs(D))
    if regime is Regime.POSITIVE:
        tau = math.atan2(r * mu / alpha, gamma * mu / alpha + 1 - mu) / r
    else:
        # arccosh(x) = log(x + sinh), with cosh + sinh - 1 = (gamma + r) mu / alpha - mu
        tau = math.log1p((gamma + r) * mu / alpha - mu) / r
    return SolverOutput(alpha, beta, tau, regime)


def solver_residuals(inp, out):
    """Residuals of the defining equations for a solver result.

    Keys: ``discriminant`` (``-(gamma^2 + alpha beta) - D``), ``c`` and ``d``
    (transfer entries minus ``mu`` and ``1 - mu``), and ``cos``/``sin`` (or
    ``cosh``/``sinh``) for the trigonometric system at the solved ``tau``.
    """
    mu, gamma, D = inp.mu, inp.gamma, inp.discriminant
    params = out.params(gamma)
    t = transfer_matrix(params, out.tau)
    res = {
        "discriminant": params.discriminant() - D,
        "c": t.c - mu,
        "d": t.d - (1 - mu),
    }
    r = math.sqrt(abs(D))
    rhs_even = gamma * mu / out.alpha + 1 - mu
    rhs_odd = r * mu / out.alpha
    if out.regime is Regime.POSITIVE:
        res["cos"] = math.cos(out.tau * r) - rhs_even
        res["sin"] = math.sin(out.tau * r) - rhs_odd
    elif out.regime is Regime.NEGATIVE:
        res["cosh"] = math.cosh(out.tau * r) - rhs_even
        res["sinh"] = math.sinh(out.tau * r) - rhs_odd
    else:
        res["alpha"] = out.alpha - mu / out.tau
        res["beta"] = out.beta + mu / out.tau
    return res


def u_plus(alpha, mu, gamma, D):
    """``cos^2 + sin^2`` implied by a trial ``alpha`` when ``D > 0``; decreasing in ``alpha``."""
    return (gamma * mu / alpha + 1 - mu) ** 2 + (math.sqrt(D) * mu / alpha) ** 2


def bisect_alpha(mu, gamma, D, xtol=1e-15):
    """Root of ``u_plus(alpha) = 1`` by bisection; a cross-check for :func:`optimal_alpha`."""
    if not (D > 0 and gamma >= 0):
        raise ValueError("bisection applies to D > 0 and gamma >= 0")
    hi = 1.0
    while u_plus(hi, mu, gamma, D) > 1:
        hi *= 2
    lo = hi
    while u_plus(lo, mu, gamma, D) <= 1:
        lo /= 2
    return optimize.bisect(lambda a: u_plus(a, mu, gamma, D) - 1, lo, hi, xtol=xtol, rtol=1e-15, maxiter=2000)
