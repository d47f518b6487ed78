"""Environment parameters (theta, j, g) from thermal data and decay observations."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import constants
from scipy.optimize import brentq

from .errors import DomainError
from .model import apply_environment, cat_coefficients, dephasing_kernel
from .observables import fidelity_to_cat, purity

#: F' level that marks the fidelity-collapse time t0; the value F' takes
#: under the Gaussian estimate exactly at the decay threshold s = pi^2/(4 g^2 j^2 cos^2)
DEFAULT_F_THRESHOLD = math.exp(-math.pi ** 2 / 4)

_DEGENERATE = 1e-12


def theta_from_energy_ratio(delta_e_over_kt: float) -> float:
    """theta with tan^2(theta/2) = exp(-dE / kT)."""
    if delta_e_over_kt <= 0:
        warnings.warn("non-positive dE/kT gives theta >= pi/2 (population inversion or none)", stacklevel=2)
    return 2.0 * math.atan(math.exp(-0.5 * delta_e_over_kt))


def theta_from_thermal(delta_e: float, temperature: float, boltzmann: float = constants.k) -> float:
    """Environment angle of a two-level bath in equilibrium at ``temperature``.

    ``delta_e`` is in joules unless ``boltzmann`` is given in other units.
    """
    if not temperature > 0:
        raise DomainError(f"temperature must be positive, got {temperature!r}")
    return theta_from_energy_ratio(delta_e / (boltzmann * temperature))


@dataclass(frozen=True)
class EnvEstimate:
    theta: float
    j: float
    g0: float
    t0: float
    ill_conditioned: bool = False

    @property
    def two_j(self) -> int:
        """Nearest twice-integer spin, for feeding the exact model."""
        return max(1, int(round(2.0 * self.j)))

    def g_of_t(self, t_e):
        """Coupling g = g0 t_e / t0 at interaction time t_e."""
        return self.g0 * np.asarray(t_e, dtype=float) / self.t0


def env_from_decay(t0: float, p0_prime: float, s: float, theta: float,
                   ill_conditioned_below: float = 1e-9) -> EnvEstimate:
    """Invert g0^2 j^2 = pi^2/(4 s cos^2) and g0^2 j = (1 - P'0)/(2 s sin^2).

    ``ill_conditioned`` is set when 1 - P'0 is below ``ill_conditioned_below``:
    with no purity loss the estimate of j diverges.
    """
    if not 0.0 < p0_prime < 1.0:
        raise DomainError(f"P'0 must lie in (0, 1), got {p0_prime!r}")
    if not s > 0:
        raise DomainError(f"s must be positive, got {s!r}")
    if not t0 > 0:
        raise DomainError(f"t0 must be positive, got {t0!r}")
    c = math.cos(theta)
    sn = math.sin(theta)
    if abs(c) < _DEGENERATE:
        raise DomainError("cos(theta) vanishes: the fidelity-decay relation carries no information")
    if abs(sn) < _DEGENERATE:
        raise DomainError("sin(theta) vanishes: the purity-loss relation carries no information")
    g2j2 = math.pi ** 2 / (4.0 * s * c * c)
    g2j = (1.0 - p0_prime) / (2.0 * s * sn * sn)
    j = g2j2 / g2j
    g0 = math.sqrt(g2j / j)
    return EnvEstimate(theta, j, g0, float(t0), (1.0 - p0_prime) < ill_conditioned_below)


@dataclass(frozen=True)
class DecayObservation:
    t0: float
    g0: float
    p0_prime: float
    f_threshold: float


def decay_observation(two_s: int, two_j: int, theta: float, g_rate: float = 1.0,
                      f_threshold: float = DEFAULT_F_THRESHOLD, cat=None,
                      max_steps: int = 20000) -> DecayObservation:
    """Synthesize (t0, P'0) from the exact model with g = g_rate * t.

    t0 is the first time F' drops below ``f_threshold``, located by a linear
    scan followed by root bracketing.
    """
    cat = cat if cat is not None else cat_coefficients(two_s)
    s, j = two_s / 2, two_j / 2

    def fid(g):
        return fidelity_to_cat(apply_environment(cat, dephasing_kernel(two_j, theta, g, two_s)))

    g_step = 1.0 / (200.0 * j * math.sqrt(max(s, 1.0)))
    prev = 0.0
    for n in range(1, max_steps + 1):
        g = n * g_step
        if fid(g) < f_threshold:
            g0 = brentq(lambda x: fid(x) - f_threshold, prev, g, xtol=1e-15, rtol=1e-13)
            break
        prev = g
    else:
        raise DomainError(f"F' never fell below {f_threshold} up to g={max_steps * g_step}")
    p0 = purity(apply_environment(cat, dephasing_kernel(two_j, theta, g0, two_s)))
    return DecayObservation(g0 / g_rate, g0, p0, f_threshold)
