"""Cat state, environment dephasing kernel, probe model and the state maps.

All spin projections are carried as *twice-value* integers (``two_sigma``,
``two_m``) so that half-integer spins stay exact; ``sigma = two_sigma / 2``.
Arrays over sigma are ordered by ascending projection, index ``i`` holding
``two_sigma = -two_s + 2 i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.special import gammaln

from . import _core
from .errors import (
    DimensionMismatchError,
    DomainError,
    OutcomeImpossibleError,
    ValidationError,
)

#: probabilities below this are treated as impossible outcomes
P_MIN = 1e-300


def spin_labels(two_s: int) -> np.ndarray:
    """Twice-value labels ``-two_s, -two_s + 2, ..., two_s``."""
    return np.arange(-two_s, two_s + 1, 2, dtype=np.int64)


def log_binomial_root(two_n: int, two_labels: np.ndarray) -> np.ndarray:
    """log( sqrt(binom(2n, n + k)) / 2**n ) for twice-labels ``two_labels`` of k."""
    two_labels = np.asarray(two_labels, dtype=np.int64)
    up = (two_n + two_labels) // 2
    down = (two_n - two_labels) // 2
    return 0.5 * (gammaln(two_n + 1.0) - gammaln(up + 1.0) - gammaln(down + 1.0)) - 0.5 * two_n * np.log(2.0)


def _check_spin(name: str, two_value: int) -> int:
    if int(two_value) != two_value or two_value < 1:
        raise DomainError(f"{name} must be a positive integer (twice the spin), got {two_value!r}")
    return int(two_value)


def _check_theta(theta: float) -> float:
    theta = float(theta)
    if not (0.0 <= theta <= np.pi) or not np.isfinite(theta):
        raise DomainError(f"theta must lie in [0, pi], got {theta!r}")
    return theta


class EnvParams(NamedTuple):
    two_j: int
    theta: float
    g: float


@dataclass(frozen=True)
class CatState:
    """Dicke-basis amplitudes ``coeffs[i] = c_sigma`` of ``c+|up_x...> + c-|down_x...>``."""

    two_s: int
    amp_plus: complex
    amp_minus: complex
    coeffs: np.ndarray = field(repr=False)

    @property
    def s(self) -> float:
        return self.two_s / 2

    @property
    def two_sigma(self) -> np.ndarray:
        return spin_labels(self.two_s)

    @property
    def weights(self) -> np.ndarray:
        """|c_sigma|**2."""
        return self.coeffs.real ** 2 + self.coeffs.imag ** 2


@dataclass(frozen=True)
class DephasingKernel:
    """Environment kernel N[sigma, sigma'] together with its difference profile.

    ``diff_values[d + two_s]`` is the kernel value for sigma - sigma' = d.
    """

    two_s: int
    two_j: int
    theta: float
    g: float
    entries: np.ndarray = field(repr=False)
    diff_values: np.ndarray = field(repr=False)
    exact: bool = True


@dataclass(frozen=True)
class ProbeModel:
    """Probe amplitudes ``amplitudes[im, i] = A_{m sigma}``, rows in ascending m."""

    two_s: int
    two_j: int
    theta: float
    g: float
    amplitudes: np.ndarray = field(repr=False)

    @property
    def two_m(self) -> np.ndarray:
        return spin_labels(self.two_j)

    def row(self, two_m: int) -> np.ndarray:
        if (two_m - self.two_j) % 2 or abs(two_m) > self.two_j:
            raise DomainError(f"two_m={two_m} is not a valid outcome for two_j={self.two_j}")
        return self.amplitudes[(two_m + self.two_j) // 2]


@dataclass(frozen=True)
class StructuredDensity:
    """Factored density operator rho[s, s'] = c_s conj(c_s') K[s, s'] / norm.

    ``toeplitz`` holds K as a function of sigma - sigma' when K depends on the
    difference only (environment output), enabling the fused outcome sums.
    """

    cat: CatState
    kernel: np.ndarray = field(repr=False)
    norm: float = 1.0
    toeplitz: np.ndarray | None = field(default=None, repr=False)
    env: EnvParams | None = None

    def dense(self) -> np.ndarray:
        c = self.cat.coeffs
        return np.outer(c, c.conj()) * self.kernel / self.norm

    def trace(self) -> float:
        return float(np.sum(self.cat.weights * self.kernel.diagonal().real) / self.norm)


def cat_coefficients(two_s: int, amp_plus: complex = 2 ** -0.5, amp_minus: complex = 2 ** -0.5) -> CatState:
    """Dicke coefficients of the two-component spin-x cat state.

    ``c_sigma = 2**-s sqrt(binom(2s, s + sigma)) [c+ + (-1)**(s - sigma) c-]``,
    with the binomial root taken in log-gamma form.
    """
    two_s = _check_spin("two_s", two_s)
    amp_plus = complex(amp_plus)
    amp_minus = complex(amp_minus)
    total = abs(amp_plus) ** 2 + abs(amp_minus) ** 2
    if abs(total - 1.0) > 1e-9:
        raise ValidationError(f"|c+|^2 + |c-|^2 = {total!r}, expected 1")
    scale = 1.0 / np.sqrt(total)
    amp_plus *= scale
    amp_minus *= scale

    labels = spin_labels(two_s)
    parity = np.where(((two_s - labels) // 2) % 2 == 0, 1.0, -1.0)
    coeffs = np.exp(log_binomial_root(two_s, labels)) * (amp_plus + parity * amp_minus)
    # the binomial identity makes this exact; rescale removes log-gamma roundoff only
    coeffs = coeffs / np.sqrt(np.sum(coeffs.real ** 2 + coeffs.imag ** 2))
    coeffs.setflags(write=False)
    return CatState(two_s, amp_plus, amp_minus, coeffs)


def _toeplitz_matrix(diff_values: np.ndarray, two_s: int) -> np.ndarray:
    idx = np.arange(two_s + 1)
    return diff_values[idx[:, None] - idx[None, :] + two_s]


def dephasing_kernel(two_j: int, theta: float, g: float, two_s: int) -> DephasingKernel:
    """Exact environment kernel ``(e^{-ig d} cos^2(theta/2) + e^{ig d} sin^2(theta/2))^{2j}``."""
    two_j = _check_spin("two_j", two_j)
    two_s = _check_spin("two_s", two_s)
    theta = _check_theta(theta)
    diff = _core.kernel_diff_values(two_s, two_j, theta, float(g))
    diff[two_s] = 1.0
    return DephasingKernel(two_s, two_j, theta, float(g), _toeplitz_matrix(diff, two_s), diff, exact=True)


def dephasing_kernel_approx(two_j: int, theta: float, g: float, two_s: int) -> DephasingKernel:
    """Second-order kernel ``exp(-g^2 j sin^2(theta) d^2 - 2i g j cos(theta) d)``."""
    two_j = _check_spin("two_j", two_j)
    two_s = _check_spin("two_s", two_s)
    theta = _check_theta(theta)
    j = two_j / 2
    d = np.arange(-two_s, two_s + 1, dtype=np.float64)
    diff = np.exp(-(g * g) * j * np.sin(theta) ** 2 * d * d - 2j * g * j * np.cos(theta) * d)
    diff[two_s] = 1.0
    return DephasingKernel(two_s, two_j, theta, float(g), _toeplitz_matrix(diff, two_s), diff, exact=False)


def apply_environment(cat: CatState, kernel: DephasingKernel) -> StructuredDensity:
    """State after the environment interaction: K = N, norm = 1."""
    if kernel.two_s != cat.two_s:
        raise DimensionMismatchError(f"kernel built for two_s={kernel.two_s}, cat has two_s={cat.two_s}")
    return StructuredDensity(
        cat, kernel.entries, 1.0, kernel.diff_values, EnvParams(kernel.two_j, kernel.theta, kernel.g)
    )


def probe_model(two_j: int, theta: float, g: float, two_s: int) -> ProbeModel:
    """Amplitudes of the coherent-spin-state probe measurement.

    ``A_{m sigma} = e^{-i j pi/2} 2^{-j} sqrt(binom(2j, j+m))
    (e^{-ig sigma} sin(theta/2) + i e^{ig sigma} cos(theta/2))^{j-m}
    (e^{-ig sigma} sin(theta/2) - i e^{ig sigma} cos(theta/2))^{j+m}``
    """
    two_j = _check_spin("two_j", two_j)
    two_s = _check_spin("two_s", two_s)
    theta = _check_theta(theta)
    prefactor = log_binomial_root(two_j, spin_labels(two_j))
    amps = _core.probe_amplitudes(two_s, two_j, theta, float(g), prefactor)
    return ProbeModel(two_s, two_j, theta, float(g), amps)


def outcome_probability(rho: StructuredDensity, probe: ProbeModel, two_m: int) -> float:
    a = probe.row(two_m)
    return float(np.sum(rho.cat.weights * rho.kernel.diagonal().real * (a.real ** 2 + a.imag ** 2)) / rho.norm)


def apply_probe_measurement(rho_prime: StructuredDensity, probe: ProbeModel, two_m: int):
    """Condition ``rho_prime`` on probe outcome ``two_m``.

    Returns ``(p_m, post_state)`` where the post-state kernel is K * (A_m A_m^*)
    and its norm absorbs p_m.
    """
    if probe.two_s != rho_prime.cat.two_s:
        raise DimensionMismatchError(f"probe built for two_s={probe.two_s}, state has two_s={rho_prime.cat.two_s}")
    p_m = outcome_probability(rho_prime, probe, two_m)
    if not p_m > P_MIN:
        raise OutcomeImpossibleError(two_m, p_m)
    a = probe.row(two_m)
    kernel = rho_prime.kernel * np.outer(a, a.conj())
    post = StructuredDensity(rho_prime.cat, kernel, rho_prime.norm * p_m, None, rho_prime.env)
    return p_m, post


def average_unitary_phase(two_s: int, two_j: int, theta: float, g: float) -> np.ndarray:
    """Diagonal of e^{i 2 g j cos(theta) S_z}."""
    sigma = spin_labels(two_s) / 2
    return np.exp(1j * g * two_j * np.cos(theta) * sigma)


def apply_average_unitary(rho_prime: StructuredDensity, env: EnvParams | None = None) -> StructuredDensity:
    """Undo the mean phase drift: K -> K * e^{i 2 g j cos(theta) (sigma - sigma')}."""
    env = env or rho_prime.env
    if env is None:
        raise ValidationError("environment parameters unknown; pass env=")
    two_s = rho_prime.cat.two_s
    phase = average_unitary_phase(two_s, env.two_j, env.theta, env.g)
    kernel = rho_prime.kernel * np.outer(phase, phase.conj())
    toeplitz = None
    if rho_prime.toeplitz is not None:
        d = np.arange(-two_s, two_s + 1, dtype=np.float64)
        toeplitz = rho_prime.toeplitz * np.exp(1j * env.g * env.two_j * np.cos(env.theta) * d)
    return StructuredDensity(rho_prime.cat, kernel, rho_prime.norm, toeplitz, env)
