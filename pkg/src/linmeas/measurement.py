"""Linear position measurements: q-rms error, disturbances and the error-disturbance relation."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .dynamics import InteractionParams, TransferMatrix, transfer_matrix
from .gaussian import GaussianState

SATURATION_RTOL = 1e-9


@dataclass(frozen=True)
class LinearPositionMeasurement:
    """Probe coupled to the system for time ``tau``; the probe position is the meter.

    Parameters
    ----------
    params : InteractionParams
    tau : float
        Interaction time, positive.
    probe : GaussianState
        Initial probe state.
    """

    params: InteractionParams
    tau: float
    probe: GaussianState

    def __post_init__(self):
        if not (math.isfinite(self.tau) and self.tau > 0):
            raise ValueError(f"tau must be positive, got {self.tau}")

    def transfer(self):
        return transfer_matrix(self.params, self.tau)


@dataclass(frozen=True)
class ErrorDisturbanceReport:
    epsilon_q: float
    eta_p: float
    eta_q: float
    sigma_q1: float
    sigma_p1: float
    edr_lhs: float
    edr_bound: float
    heisenberg_product: float
    saturated: bool


def _check_hbar(m, psi):
    if m.probe.hbar != psi.hbar:
        raise ValueError("system and probe states use different hbar")


def _rms(coef_sys, coef_probe, sys_mean, sys_std, probe_mean, probe_std):
    mean = coef_sys * sys_mean + coef_probe * probe_mean
    return math.sqrt((coef_sys * sys_std) ** 2 + (coef_probe * probe_std) ** 2 + mean * mean)


def error_q(m, psi, t=None):
    """q-rms error of the meter ``Q2(tau)`` as a readout of ``Q1(0)``."""
    if t is None:
        t = m.transfer()
    x = m.probe
    return _rms(t.c - 1, t.d, psi.mean_q, psi.sigma_q, x.mean_q, x.sigma_q)


def disturbance_p(m, psi, t=None):
    """q-rms disturbance ``P1(tau) - P1(0)``; uses ``P1(tau) = d P1 - c P2``."""
    if t is None:
        t = m.transfer()
    x = m.probe
    return _rms(t.d - 1, -t.c, psi.mean_p, psi.sigma_p, x.mean_p, x.sigma_p)


def disturbance_q(m, psi, t=None):
    """q-rms disturbance ``Q1(tau) - Q1(0)``; uses ``Q1(tau) = a Q1 + b Q2``."""
    if t is None:
        t = m.transfer()
    x = m.probe
    return _rms(t.a - 1, t.b, psi.mean_q, psi.sigma_q, x.mean_q, x.sigma_q)


def edr_report(m, psi):
    _check_hbar(m, psi)
    t = m.transfer()
    eps = error_q(m, psi, t)
    eta_p = disturbance_p(m, psi, t)
    eta_q = disturbance_q(m, psi, t)
    lhs = (eps * psi.sigma_p) ** 2 + (psi.sigma_q * eta_p) ** 2
    bound = 0.25 * psi.hbar**2
    return ErrorDisturbanceReport(
        epsilon_q=eps,
        eta_p=eta_p,
        eta_q=eta_q,
        sigma_q1=psi.sigma_q,
        sigma_p1=psi.sigma_p,
        edr_lhs=lhs,
        edr_bound=bound,
        heisenberg_product=eps * eta_p,
        saturated=abs(lhs - bound) <= SATURATION_RTOL * bound,
    )


def gauss_error_q(m, psi):
    """Gauss rms error of the joint law of ``(Q1(0), Q2(tau))``."""
    from .distributions import joint_q
    from .gaussian import gauss_rms

    return gauss_rms(joint_q(m, psi))


def gauss_disturbance_p(m, psi):
    """Gauss rms deviation of the joint law of ``(P1(0), P1(tau))``."""
    from .distributions import joint_p
    from .gaussian import gauss_rms

    return gauss_rms(joint_p(m, psi))


__all__ = [
    "ErrorDisturbanceReport",
    "InteractionParams",
    "LinearPositionMeasurement",
    "TransferMatrix",
    "disturbance_p",
    "disturbance_q",
    "edr_report",
    "error_q",
    "gauss_disturbance_p",
    "gauss_error_q",
]
