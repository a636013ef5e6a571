"""Decay rates and envelopes of the closed loop.

For the saturated law with initial norm at most r the energy obeys
sqrt(E(t)) <= sqrt(E(0)) exp(-mu t) with mu = min(a, u_s / r). Globally the
proof hands over at T_r = ln(a r / u_s) / mu, after which the control is
unsaturated and the rate is a; this gives the class-K gain
alpha(r) = r exp(a T_r) and the global bound alpha(r) exp(-a t).
"""
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.kdv.control.feedback import FeedbackLaw, LinearFeedback, SaturatedFeedback
from src.kdv.errors import ConfigurationError, DomainError

# sqrt(E(0)) may differ from the l2 norm it was computed from in the last bit
RADIUS_TOLERANCE = 1e-12


@dataclass(frozen=True)
class DecayEnvelope:
    radius: float
    gain: float
    level: float
    mu: float
    switch_time: float
    amplification: float

    @property
    def alpha(self) -> float:
        return self.radius * self.amplification

    def two_phase_bound(self, t):
        t = np.asarray(t, dtype=float)
        before = self.radius * np.exp(-self.mu * t)
        if self.switch_time == 0.0:
            return before
        handover = self.level / self.gain
        after = handover * np.exp(-self.gain * (t - self.switch_time))
        return np.where(t <= self.switch_time, before, after)

    def global_bound(self, t):
        return self.alpha * np.exp(-self.gain * np.asarray(t))


def decay_envelope(law: FeedbackLaw, r: float) -> DecayEnvelope:
    if not r > 0:
        raise DomainError(f"Envelope radius must be positive, got {r}")
    if isinstance(law, LinearFeedback):
        return DecayEnvelope(radius=r, gain=law.gain, level=math.inf, mu=law.gain,
                             switch_time=0.0, amplification=1.0)
    if not isinstance(law, SaturatedFeedback):
        raise ConfigurationError(f"No decay certificate for feedback law '{law.name}'")

    a, u_s = law.gain, law.level
    mu = min(a, u_s / r)
    if a * r > u_s:
        switch_time = math.log(a * r / u_s) / mu
    else:
        switch_time = 0.0
    return DecayEnvelope(radius=r, gain=a, level=u_s, mu=mu, switch_time=switch_time,
                         amplification=math.exp(a * switch_time))


def class_k_gain(law: SaturatedFeedback, r: float) -> float:
    """alpha(r) = r exp(a T_r); the identity for r <= u_s / a."""
    return decay_envelope(law, r).alpha


@dataclass(frozen=True)
class EnvelopeReport:
    status: str
    rate: float
    slack: float
    worst_margin: float
    first_violation_time: Optional[float] = None
    first_violation_index: Optional[int] = None

    @property
    def passed(self) -> bool:
        return self.status == "pass"


def envelope_check(trace, env: DecayEnvelope, slack: float, rate: float = None) -> EnvelopeReport:
    """
    Compare a trace against sqrt(E(0)) exp(-rate t) (1 + slack) sample by sample.

    Args:
        trace: EnergyTrace (anything exposing ``times`` and ``energy`` arrays)
        env: envelope supplying the radius and, by default, the rate mu
        slack: relative allowance for discretization error
        rate: override for the exponential rate

    Returns:
        EnvelopeReport with status "pass", "fail" or "inapplicable".
        Margins are relative: 1 - sqrt(E) / bound.
    """
    rate = env.mu if rate is None else rate
    times = np.asarray(trace.times, dtype=float)
    if times.size == 0:
        raise ConfigurationError("Envelope check needs a nonempty trace")
    root_e = np.sqrt(np.asarray(trace.energy, dtype=float))
    initial = root_e[0]

    if initial > env.radius * (1.0 + RADIUS_TOLERANCE):
        return EnvelopeReport(status="inapplicable", rate=rate, slack=slack, worst_margin=math.nan)

    bound = initial * np.exp(-rate * times) * (1.0 + slack)
    with np.errstate(divide="ignore", invalid="ignore"):
        margins = np.where(bound > 0, 1.0 - root_e / bound, np.where(root_e > 0, -math.inf, math.inf))

    violations = np.flatnonzero(margins < 0)
    worst = float(np.min(margins))
    if violations.size:
        k = int(violations[0])
        return EnvelopeReport(status="fail", rate=rate, slack=slack, worst_margin=worst,
                              first_violation_time=float(times[k]), first_violation_index=k)
    return EnvelopeReport(status="pass", rate=rate, slack=slack, worst_margin=worst)
