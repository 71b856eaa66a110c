"""Gaussian states of a single particle and Gaussian measures in one and two dimensions."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

DEFAULT_HBAR = 1.0

# relative tolerance for is_minimum_uncertainty()
MIN_UNCERTAINTY_RTOL = 1e-9

# eigenvalues >= -PSD_RTOL * trace are accepted as zero
PSD_RTOL = 1e-12


@dataclass(frozen=True)
class Constants:
    hbar: float = DEFAULT_HBAR

    def __post_init__(self):
        if not (math.isfinite(self.hbar) and self.hbar > 0):
            raise ValueError(f"hbar must be positive and finite, got {self.hbar}")


@dataclass(frozen=True)
class GaussianState:
    """Uncorrelated Gaussian state of one particle.

    Parameters
    ----------
    mean_q, mean_p : float
        Position and momentum expectation values.
    sigma_q, sigma_p : float
        Position and momentum standard deviations. Their product must be at
        least ``hbar / 2``.
    hbar : float
        Reduced Planck constant in the chosen units.
    """

    mean_q: float
    mean_p: float
    sigma_q: float
    sigma_p: float
    hbar: float = DEFAULT_HBAR

    def __post_init__(self):
        for name in ("mean_q", "mean_p", "sigma_q", "sigma_p", "hbar"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.sigma_q <= 0 or self.sigma_p <= 0:
            raise ValueError("standard deviations must be positive")
        if self.hbar <= 0:
            raise ValueError("hbar must be positive")
        bound = 0.5 * self.hbar
        if self.sigma_q * self.sigma_p < bound * (1 - MIN_UNCERTAINTY_RTOL):
            raise ValueError(
                f"sigma_q * sigma_p = {self.sigma_q * self.sigma_p} violates the "
                f"uncertainty bound hbar/2 = {bound}"
            )

    @classmethod
    def minimum_uncertainty(cls, mean_q, mean_p, sigma_q, hbar=DEFAULT_HBAR):
        """Gaussian wave packet with ``sigma_p = hbar / (2 sigma_q)``."""
        if not sigma_q > 0:
            raise ValueError("sigma_q must be positive")
        return cls(float(mean_q), float(mean_p), float(sigma_q), hbar / (2.0 * sigma_q), float(hbar))

    def is_minimum_uncertainty(self, rtol=MIN_UNCERTAINTY_RTOL):
        bound = 0.5 * self.hbar
        return abs(self.sigma_q * self.sigma_p - bound) <= rtol * bound


@dataclass(frozen=True)
class Gaussian1D:
    mean: float
    variance: float

    def __post_init__(self):
        if not (math.isfinite(self.mean) and math.isfinite(self.variance)):
            raise ValueError("mean and variance must be finite")
        if self.variance < 0:
            raise ValueError(f"variance must be nonnegative, got {self.variance}")

    @property
    def std(self):
        return math.sqrt(self.variance)

    def mass(self, lower=-math.inf, upper=math.inf):
        """Probability of the interval ``[lower, upper]``, via erfc to keep tail accuracy."""
        if self.variance == 0:
            return float(lower <= self.mean <= upper)
        s = math.sqrt(2.0 * self.variance)
        zl = (lower - self.mean) / s
        zu = (upper - self.mean) / s
        if zl >= 0:
            return 0.5 * (math.erfc(zl) - math.erfc(zu))
        if zu <= 0:
            return 0.5 * (math.erfc(-zu) - math.erfc(-zl))
        return 1.0 - 0.5 * (math.erfc(-zl) + math.erfc(zu))


@dataclass(frozen=True)
class Gaussian2D:
    """Bivariate normal law with mean vector and covariance matrix.

    The covariance is symmetrized on construction and checked for positive
    semidefiniteness; slightly negative eigenvalues (round-off) are clamped.
    """

    mean: np.ndarray
    cov: np.ndarray = field(repr=True)

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=float).reshape(2)
        cov = np.asarray(self.cov, dtype=float).reshape(2, 2)
        if not (np.all(np.isfinite(mean)) and np.all(np.isfinite(cov))):
            raise ValueError("mean and covariance must be finite")
        if abs(cov[0, 1] - cov[1, 0]) > 1e-12 * max(1.0, np.abs(cov).max()):
            raise ValueError("covariance must be symmetric")
        cov = 0.5 * (cov + cov.T)
        w, v = np.linalg.eigh(cov)
        tol = PSD_RTOL * max(np.trace(cov), 0.0)
        if w.min() < -tol:
            raise ValueError(f"covariance is not positive semidefinite (eigenvalues {w})")
        if w.min() < 0:
            cov = (v * np.clip(w, 0.0, None)) @ v.T
        mean.setflags(write=False)
        cov.setflags(write=False)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    def marginal(self, index):
        return Gaussian1D(float(self.mean[index]), float(self.cov[index, index]))

    def conditional(self, index, value):
        """Law of coordinate ``index`` given the other coordinate equals ``value``."""
        other = 1 - index
        var_o = self.cov[other, other]
        if var_o <= 0:
            raise ValueError("cannot condition on a degenerate coordinate")
        gain = self.cov[index, other] / var_o
        mean = self.mean[index] + gain * (value - self.mean[other])
        var = self.cov[index, index] - gain * self.cov[index, other]
        return Gaussian1D(float(mean), max(float(var), 0.0))

    def pdf(self, x, y):
        """Density on the plane; requires a nonsingular covariance."""
        det = float(np.linalg.det(self.cov))
        if det <= 0:
            raise ValueError("singular covariance has no density")
        inv = np.linalg.inv(self.cov)
        dx = np.asarray(x, dtype=float) - self.mean[0]
        dy = np.asarray(y, dtype=float) - self.mean[1]
        quad = inv[0, 0] * dx * dx + 2 * inv[0, 1] * dx * dy + inv[1, 1] * dy * dy
        return np.exp(-0.5 * quad) / (2 * math.pi * math.sqrt(det))


def pdf1(g, x):
    """Density of a one-dimensional Gaussian at ``x`` (scalar or array)."""
    if not g.variance > 0:
        raise ValueError("degenerate Gaussian (variance 0) has no density")
    z = np.asarray(x, dtype=float) - g.mean
    out = np.exp(-0.5 * z * z / g.variance) / math.sqrt(2 * math.pi * g.variance)
    return float(out) if out.ndim == 0 else out


def centered_pdf(variance, x):
    """Zero-mean Gaussian density with the given variance."""
    return pdf1(Gaussian1D(0.0, variance), x)


def char2(g, k):
    """Characteristic function ``E[exp(i <k, X>)]`` of a bivariate Gaussian."""
    k = np.asarray(k, dtype=float)
    phase = k @ g.mean
    quad = np.einsum("...i,ij,...j->...", k, g.cov, k)
    out = np.exp(1j * phase - 0.5 * quad)
    return complex(out) if out.ndim == 0 else out


def _sqrt_psd(cov):
    w, v = np.linalg.eigh(cov)
    return v * np.sqrt(np.clip(w, 0.0, None))


def sample2(g, n, seed):
    """Draw ``n`` points from a bivariate Gaussian.

    Uses numpy's PCG64 generator (``np.random.default_rng(seed)``) and the
    symmetric square root of the covariance, so singular covariances are
    allowed. Output for a given seed is fixed.

    Returns
    -------
    ndarray, shape (n, 2)
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((n, 2))
    return g.mean + z @ _sqrt_psd(g.cov).T


def gauss_rms(g):
    """Root-mean-square of ``x - y`` under the bivariate law."""
    dm = g.mean[0] - g.mean[1]
    v = g.cov[0, 0] + g.cov[1, 1] - 2 * g.cov[0, 1]
    return math.sqrt(max(dm * dm + v, 0.0))
