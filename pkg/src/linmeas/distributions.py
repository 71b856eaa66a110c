"""Output distributions and post-measurement states of linear position measurements.

Every pair of commuting linear observables used here has a bivariate Gaussian
law obtained by pushing the product state ``psi (x) probe`` forward through the
transfer matrix. For measurements that saturate the error-disturbance bound
the joint densities factorize, and the post-measurement states conditioned on
a meter reading ``y`` form a family of minimum uncertainty wave packets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .gaussian import Gaussian1D, Gaussian2D, centered_pdf
from .optimal import is_minimum_error_disturbance

QUAD_ABS_TOL = 1e-10
NULL_EVENT_WEIGHT = 1e-300


class NullEventError(ValueError):
    """Conditioning on an interval of (numerically) zero probability."""


@dataclass(frozen=True)
class Interval:
    lower: float = -math.inf
    upper: float = math.inf

    def __post_init__(self):
        if math.isnan(self.lower) or math.isnan(self.upper) or not self.lower < self.upper:
            raise ValueError(f"invalid interval [{self.lower}, {self.upper}]")


def _require_optimal(m, psi):
    if not is_minimum_error_disturbance(m, psi):
        raise ValueError("measurement does not saturate the error-disturbance bound in psi")


def joint_q(m, psi):
    """Law of ``(Q1(0), Q2(tau))`` with ``Q2(tau) = c Q1 + d Q2``."""
    t = m.transfer()
    x = m.probe
    v1 = psi.sigma_q**2
    mean = (psi.mean_q, t.c * psi.mean_q + t.d * x.mean_q)
    cov = [[v1, t.c * v1], [t.c * v1, t.c**2 * v1 + t.d**2 * x.sigma_q**2]]
    return Gaussian2D(mean, cov)


def joint_p(m, psi):
    """Law of ``(P1(0), P1(tau))`` with ``P1(tau) = d P1 - c P2``."""
    t = m.transfer()
    x = m.probe
    v1 = psi.sigma_p**2
    mean = (psi.mean_p, t.d * psi.mean_p - t.c * x.mean_p)
    cov = [[v1, t.d * v1], [t.d * v1, t.d**2 * v1 + t.c**2 * x.sigma_p**2]]
    return Gaussian2D(mean, cov)


def joint_q_after(m, psi):
    """Law of ``(Q1(tau), Q2(tau))``."""
    t = m.transfer()
    x = m.probe
    v1, v2 = psi.sigma_q**2, x.sigma_q**2
    mean = (t.a * psi.mean_q + t.b * x.mean_q, t.c * psi.mean_q + t.d * x.mean_q)
    cov_12 = t.a * t.c * v1 + t.b * t.d * v2
    cov = [[t.a**2 * v1 + t.b**2 * v2, cov_12], [cov_12, t.c**2 * v1 + t.d**2 * v2]]
    return Gaussian2D(mean, cov)


def joint_p_meter(m, psi):
    """Law of ``(P1(tau), Q2(tau))``; the two are uncorrelated for uncorrelated inputs."""
    t = m.transfer()
    x = m.probe
    mean = (t.d * psi.mean_p - t.c * x.mean_p, t.c * psi.mean_q + t.d * x.mean_q)
    cov = [
        [t.d**2 * psi.sigma_p**2 + t.c**2 * x.sigma_p**2, 0.0],
        [0.0, t.c**2 * psi.sigma_q**2 + t.d**2 * x.sigma_q**2],
    ]
    return Gaussian2D(mean, cov)


def meter_marginal(m, psi):
    return joint_q(m, psi).marginal(1)


def factorized_joint_q_pdf(c, psi, x, y):
    """Density of ``(Q1(0), Q2(tau))`` for an optimal measurement, in product form."""
    v1 = psi.sigma_q**2
    return centered_pdf((1 - c) * v1, np.subtract(x, y)) * centered_pdf(c * v1, np.subtract(y, psi.mean_q))


def factorized_joint_p_pdf(c, psi, z, w):
    """Density of ``(P1(0), P1(tau))`` for an optimal measurement, in product form."""
    v1 = psi.sigma_p**2
    return centered_pdf(c * v1, np.subtract(z, w)) * centered_pdf((1 - c) * v1, np.subtract(w, psi.mean_p))


def conditional_q0_given_meter(m, psi, y):
    """Law of ``Q1(0)`` given the meter reads ``y``: centered on ``y`` with variance ``eps^2``."""
    _require_optimal(m, psi)
    c = m.transfer().c
    return Gaussian1D(float(y), (1 - c) * psi.sigma_q**2)


@dataclass(frozen=True)
class PosteriorFamily:
    """Post-measurement system states indexed by the meter reading ``y``.

    Member ``y`` is the minimum uncertainty wave packet with position mean
    ``slope * y``, momentum mean ``mean_p`` and position spread ``sigma_q``.
    ``weight`` is the law of the meter reading.
    """

    slope: float
    mean_p: float
    sigma_q: float
    weight: Gaussian1D
    hbar: float

    @property
    def sigma_p(self):
        return self.hbar / (2 * self.sigma_q)

    def state(self, y):
        from .gaussian import GaussianState

        return GaussianState.minimum_uncertainty(self.slope * y, self.mean_p, self.sigma_q, self.hbar)

    def position_given(self, y):
        """Law of ``Q1(tau)`` given meter value ``y``."""
        return Gaussian1D(self.slope * float(y), self.sigma_q**2)

    def momentum_given(self, y):
        """Law of ``P1(tau)`` given meter value ``y``; independent of ``y``."""
        return Gaussian1D(self.mean_p, self.sigma_p**2)


def posterior_family(m, psi):
    _require_optimal(m, psi)
    t = m.transfer()
    c = t.c
    return PosteriorFamily(
        slope=t.a + t.b,
        mean_p=psi.mean_p,
        sigma_q=psi.sigma_q / math.sqrt(1 - c),
        weight=Gaussian1D(psi.mean_q, c * psi.sigma_q**2),
        hbar=psi.hbar,
    )


@dataclass(frozen=True)
class MixtureMoments:
    mean_q: float
    var_q: float
    mean_p: float
    var_p: float
    weight: float


def _quad(f, lo, hi):
    val, _ = integrate.quad(f, lo, hi, epsabs=QUAD_ABS_TOL, epsrel=1e-12, limit=200)
    return val


def mixture_moments(m, psi, J):
    """First and second moments of ``Q1`` and ``P1`` in the state conditioned on ``y in J``.

    Integrates posterior-state moments against the meter density over ``J``,
    clipped to ten meter standard deviations around the point of ``J``
    nearest the meter mean.

    Raises
    ------
    NullEventError
        If the meter law gives ``J`` negligible probability.
    """
    fam = posterior_family(m, psi)
    w = fam.weight
    weight = w.mass(J.lower, J.upper)
    if not weight > NULL_EVENT_WEIGHT:
        raise NullEventError(f"interval {J} has probability {weight}")
    s = w.std
    # work in z = (y - ref) / s, with ref the point of J nearest the meter mean;
    # the density decays away from ref at least as fast as exp(-z^2 / 2)
    ref = min(max(w.mean, J.lower), J.upper)
    z_lo = max((J.lower - ref) / s, -10.0)
    z_hi = min((J.upper - ref) / s, 10.0)
    offset = (ref - w.mean) / s

    def density(z):
        return math.exp(-0.5 * (z + offset) ** 2 + 0.5 * offset * offset)

    norm = _quad(density, z_lo, z_hi)
    mean_z = _quad(lambda z: z * density(z), z_lo, z_hi) / norm
    var_z = _quad(lambda z: (z - mean_z) ** 2 * density(z), z_lo, z_hi) / norm
    mean_y = ref + s * mean_z
    var_y = s * s * var_z
    k = fam.slope
    return MixtureMoments(
        mean_q=k * mean_y,
        var_q=fam.sigma_q**2 + k * k * var_y,
        mean_p=fam.mean_p,
        var_p=fam.sigma_p**2,
        weight=weight,
    )
