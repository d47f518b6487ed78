"""Closed-form large-spin results usable far beyond the exact-sum range.

Inputs ``s`` and ``j`` are real spins (not twice-values) and may be as large
as ~1e12.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

#: log-domain results below this exponent underflow to exactly zero
LOG_UNDERFLOW = -700.0
#: "s << s_upper" is decided as s <= s_upper / MUCH_LESS
MUCH_LESS = 10.0
#: |cos theta| or |sin theta| below this counts as vanishing
_DEGENERATE = 1e-12


def log_clt_fidelity_squared(s: float, j: float, theta: float, g: float) -> float:
    a = 2.0 * g * g * s * j * math.sin(theta) ** 2
    return -0.5 * math.log1p(a) - 2.0 * g * g * s * j * j * math.cos(theta) ** 2 / (1.0 + a)


def clt_fidelity_squared(s: float, j: float, theta: float, g: float) -> float:
    """Gaussian (central-limit) estimate of F'^2 after the environment.

    F'^2 ~ exp(-2 g^2 s j^2 cos^2 / (1 + 2 g^2 s j sin^2)) / sqrt(1 + 2 g^2 s j sin^2)
    """
    log_value = log_clt_fidelity_squared(s, j, theta, g)
    if log_value < LOG_UNDERFLOW:
        return 0.0
    return math.exp(log_value)


@dataclass(frozen=True)
class RegimeReport:
    s: float
    s_lower: float
    s_upper: float
    classification: str

    @property
    def in_window(self) -> bool:
        return self.classification == "in-window"


def regime_check(s: float, j: float, theta: float, g: float) -> RegimeReport:
    """Classify s against the fidelity-decay and purity-smallness thresholds.

    s_lower = pi^2 / (4 g^2 j^2 cos^2 theta), s_upper = 1 / (g^2 j sin^2 theta).
    A vanishing cos or sin (or g = 0) makes a threshold infinite and the
    point ``degenerate``; the finite threshold is still reported.
    """
    c = math.cos(theta)
    sn = math.sin(theta)
    g2 = g * g
    lower_den = 4.0 * g2 * j * j * c * c
    upper_den = g2 * j * sn * sn
    s_lower = math.pi ** 2 / lower_den if abs(c) > _DEGENERATE and lower_den > 0 else math.inf
    s_upper = 1.0 / upper_den if abs(sn) > _DEGENERATE and upper_den > 0 else math.inf
    if math.isinf(s_lower) or math.isinf(s_upper):
        label = "degenerate"
    elif s < s_lower:
        label = "below-decay"
    elif s > s_upper / MUCH_LESS:
        label = "above-purity-limit"
    else:
        label = "in-window"
    return RegimeReport(float(s), s_lower, s_upper, label)


@dataclass(frozen=True)
class ScalingLaws:
    p_loss_2nd: float
    f0_sq_2nd: float
    mean_fsq_2nd: float
    dp_4th: float
    rp_2nd: float


def scaling_laws(s: float, j: float, theta: float, g: float) -> ScalingLaws:
    x = g * g * s * j * math.sin(theta) ** 2
    return ScalingLaws(
        p_loss_2nd=2.0 * x,
        f0_sq_2nd=1.0 - x,
        mean_fsq_2nd=1.0 - 2.0 * x,
        dp_4th=8.0 * x * x,
        rp_2nd=4.0 * x,
    )
