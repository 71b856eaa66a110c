"""Oracle suite: closed forms against phase-space Monte Carlo for a fixed set of measurements."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distributions import joint_p, joint_q, meter_marginal
from .dynamics import InteractionParams
from .gaussian import GaussianState
from .measurement import LinearPositionMeasurement, edr_report
from .optimal import family
from .oracle import DEFAULT_N, SE_BAND, simulate

FAMILY_MUS = (0.1, 0.3, 0.5, 0.7, 0.9)


@dataclass(frozen=True)
class Check:
    case: str
    quantity: str
    expected: float
    estimate: float
    se: float
    passed: bool

    @property
    def z(self):
        return (self.estimate - self.expected) / self.se if self.se > 0 else 0.0


def random_state(rng, hbar=1.0):
    return GaussianState.minimum_uncertainty(rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(0.3, 3), hbar)


def random_measurement(rng, hbar=1.0):
    """Random interaction in ``[-3, 3]^3``, time in ``(0, 3]``, probe at or above the uncertainty bound."""
    params = InteractionParams(*rng.uniform(-3, 3, size=3))
    tau = 3.0 * (1.0 - rng.uniform())
    sq = rng.uniform(0.3, 3)
    sp = hbar / (2 * sq) * rng.uniform(1, 3)
    probe = GaussianState(rng.uniform(-2, 2), rng.uniform(-2, 2), sq, sp, hbar)
    return LinearPositionMeasurement(params, tau, probe)


def cases(seed=0, n_random=100, hbar=1.0):
    """The measurement/state pairs covered by the suite, in a fixed order."""
    rng = np.random.default_rng([seed, 0xC0FFEE])
    out = []
    psi = random_state(rng, hbar)
    for kind in "ABC":
        for mu in FAMILY_MUS:
            out.append((f"{kind}_{mu}", family(kind, mu, psi), psi))
    for i in range(n_random):
        out.append((f"random_{i}", random_measurement(rng, hbar), random_state(rng, hbar)))
    return out


def check_case(name, m, psi, n=DEFAULT_N, seed=0, tamper=1.0, stream=0):
    """Compare every closed form for one measurement against its Monte Carlo estimate."""
    rep = edr_report(m, psi)
    emp = simulate(m, psi, n, seed, stream=stream)
    jq = joint_q(m, psi)
    jp = joint_p(m, psi)
    meter = meter_marginal(m, psi)
    q_scale = psi.sigma_q + abs(psi.mean_q) + m.probe.sigma_q + abs(m.probe.mean_q)
    p_scale = psi.sigma_p + abs(psi.mean_p) + m.probe.sigma_p + abs(m.probe.mean_p)
    rows = [
        ("epsilon_q", rep.epsilon_q * tamper, emp.epsilon_q, q_scale),
        ("eta_p", rep.eta_p, emp.eta_p, p_scale),
        ("eta_q", rep.eta_q, emp.eta_q, q_scale),
        ("meter_mean", meter.mean, emp.meter_mean, q_scale),
        ("meter_var", meter.variance, emp.meter_var, q_scale**2),
    ]
    for label, joint, est, scale in (("joint_q", jq, emp.joint_q_cov, q_scale), ("joint_p", jp, emp.joint_p_cov, p_scale)):
        for (i, j), e in zip(((0, 0), (0, 1), (1, 1)), est):
            rows.append((f"{label}_cov{i + 1}{j + 1}", float(joint.cov[i, j]), e, scale**2))
    return [
        Check(name, q, expected, e.value, e.se, e.agrees(expected, scale, SE_BAND))
        for q, expected, e, scale in rows
    ]


def run_suite(seed=0, n=DEFAULT_N, n_random=100, hbar=1.0, tamper=1.0):
    checks = []
    for i, (name, m, psi) in enumerate(cases(seed, n_random, hbar)):
        checks.extend(check_case(name, m, psi, n, seed, tamper, stream=i))
    return checks


def summarize(checks):
    """Per-quantity pass counts and worst |z|."""
    out = {}
    for c in checks:
        row = out.setdefault(c.quantity, {"checks": 0, "passed": 0, "max_abs_z": 0.0})
        row["checks"] += 1
        row["passed"] += c.passed
        if math.isfinite(c.z):
            row["max_abs_z"] = max(row["max_abs_z"], abs(c.z))
    return out
