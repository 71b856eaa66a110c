"""Phase-space Monte Carlo oracle for the closed forms.

The system and probe states are Gaussian, so their Wigner functions are
nonnegative product Gaussians and can be sampled as classical phase-space
points. Linear Heisenberg evolution maps samples linearly. Any quantity
fixed by first and second moments of linear observables, or by the joint law
of a commuting linear pair, is then reproduced exactly in distribution. This
covers every closed form in the package; nothing else is checked this way.

The propagator comes from :func:`linmeas.dynamics.expm_series`, not from the
closed-form transfer matrix, so the two routes share no code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import TransferMatrix, expm_series, interaction_matrix

DEFAULT_N = 1_000_000
SE_BAND = 5.0
# absolute floor on the band, relative to the quantity's natural scale; keeps
# comparisons meaningful when the true value and its sampling error are both zero
ROUNDOFF_FLOOR = 1e-9

Q1, Q2, P1, P2 = range(4)


@dataclass(frozen=True)
class PhaseSampleBatch:
    """Phase-space samples; columns are ``q1, q2, p1, p2``."""

    samples: np.ndarray
    seed: int

    @property
    def n(self):
        return self.samples.shape[0]


def _shard_sizes(n, shards):
    base, extra = divmod(n, shards)
    return [base + (i < extra) for i in range(shards)]


def draw_initial(psi, probe, n=DEFAULT_N, seed=0, shards=1, stream=0):
    """Sample the product Gaussian phase-space law of ``psi (x) probe``.

    Shard ``i`` draws from ``np.random.default_rng([seed, stream, i])``
    (PCG64), so a sharded draw is reproducible and independent of how shards
    are scheduled. Distinct ``stream`` values give independent batches.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    mean = np.array([psi.mean_q, probe.mean_q, psi.mean_p, probe.mean_p])
    std = np.array([psi.sigma_q, probe.sigma_q, psi.sigma_p, probe.sigma_p])
    parts = [
        np.random.default_rng([seed, stream, i]).standard_normal((4, size))
        for i, size in enumerate(_shard_sizes(n, shards))
    ]
    z = np.concatenate(parts, axis=1) if len(parts) > 1 else parts[0]
    # column-major storage keeps each canonical variable contiguous
    z *= std[:, None]
    z += mean[:, None]
    return PhaseSampleBatch(z.T, seed)


def series_transfer(params, tau):
    return TransferMatrix.from_array(expm_series(interaction_matrix(params), tau))


def propagate(batch, t):
    """Apply ``exp(tau S)`` to positions and ``exp(-tau S^T)`` to momenta."""
    pos = t.as_array()
    mom = np.linalg.inv(pos).T
    x = batch.samples
    out = np.empty((4, batch.n))
    for (i, j), mat in (((Q1, Q2), pos), ((P1, P2), mom)):
        out[i] = mat[0, 0] * x[:, i] + mat[0, 1] * x[:, j]
        out[j] = mat[1, 0] * x[:, i] + mat[1, 1] * x[:, j]
    return PhaseSampleBatch(out.T, batch.seed)


@dataclass(frozen=True)
class Estimate:
    value: float
    se: float

    def agrees(self, expected, scale=1.0, band=SE_BAND):
        return abs(self.value - expected) <= band * self.se + ROUNDOFF_FLOOR * scale


def rms_estimate(x):
    """Root-mean-square of ``x`` with its jackknife standard error."""
    x = np.asarray(x, dtype=float)
    n = x.size
    sq = x * x
    total = sq.sum()
    value = math.sqrt(total / n)
    loo = total - sq
    np.clip(loo, 0.0, None, out=loo)
    loo /= n - 1
    np.sqrt(loo, out=loo)
    loo -= loo.mean()
    se = math.sqrt((n - 1) / n * np.dot(loo, loo))
    return Estimate(value, se)


def mean_estimate(x):
    x = np.asarray(x, dtype=float)
    return Estimate(float(x.mean()), float(x.std(ddof=1) / math.sqrt(x.size)))


def cov_estimate(x, y):
    """Sample covariance with the standard error of the centred product mean."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = x.size
    f = (x - x.mean()) * (y - y.mean())
    value = float(f.sum() / (n - 1))
    spread = float(np.dot(f, f) / n - (f.sum() / n) ** 2)
    return Estimate(value, math.sqrt(max(spread, 0.0) * n / (n - 1) / n))


@dataclass(frozen=True)
class EmpiricalReport:
    epsilon_q: Estimate
    eta_p: Estimate
    eta_q: Estimate
    meter_mean: Estimate
    meter_var: Estimate
    joint_q_cov: tuple
    joint_p_cov: tuple


def empirical_report(initial, propagated):
    """Monte Carlo estimates of the error, both disturbances and the meter law.

    ``joint_q_cov`` and ``joint_p_cov`` hold the ``(v11, v12, v22)`` covariance
    estimates of ``(q1, q2')`` and ``(p1, p1')``.
    """
    if initial.n != propagated.n or initial.seed != propagated.seed:
        raise ValueError("batches are not aligned")
    x0 = initial.samples
    x1 = propagated.samples
    q1, p1 = x0[:, Q1], x0[:, P1]
    meter, q1t, p1t = x1[:, Q2], x1[:, Q1], x1[:, P1]
    meter_var = cov_estimate(meter, meter)
    return EmpiricalReport(
        epsilon_q=rms_estimate(meter - q1),
        eta_p=rms_estimate(p1t - p1),
        eta_q=rms_estimate(q1t - q1),
        meter_mean=mean_estimate(meter),
        meter_var=meter_var,
        joint_q_cov=(cov_estimate(q1, q1), cov_estimate(q1, meter), meter_var),
        joint_p_cov=(cov_estimate(p1, p1), cov_estimate(p1, p1t), cov_estimate(p1t, p1t)),
    )


def simulate(m, psi, n=DEFAULT_N, seed=0, shards=1, stream=0):
    """Draw, propagate with the series propagator, and summarize one measurement."""
    initial = draw_initial(psi, m.probe, n, seed, shards, stream)
    return empirical_report(initial, propagate(initial, series_transfer(m.params, m.tau)))
