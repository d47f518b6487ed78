"""Explicit Kraus family of the Ising environment and its perturbative predictions.

Every Kraus operator is diagonal in the Dicke basis, so operators are stored
as arrays ``[k, sigma]`` of their diagonals (rows in ascending k, columns in
ascending sigma).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import asymptotics
from .errors import DimensionMismatchError
from .model import (
    CatState,
    EnvParams,
    StructuredDensity,
    _check_spin,
    _check_theta,
    log_binomial_root,
    spin_labels,
)

#: coefficient of the non-unitary part of the m = 0 probe operator
ZETA = 2.0


@dataclass(frozen=True)
class KrausFamily:
    """{a_k, U_k, eps1_k, eps2_k, delta2_k} for k = -j..j, all diagonal over sigma."""

    two_s: int
    two_j: int
    theta: float
    g: float
    two_k: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    gamma: np.ndarray = field(repr=False)

    @property
    def k(self) -> np.ndarray:
        return self.two_k / 2

    @property
    def j(self) -> float:
        return self.two_j / 2

    @property
    def sigma(self) -> np.ndarray:
        return spin_labels(self.two_s) / 2

    def _grid(self):
        return self.k[:, None], self.sigma[None, :]

    def unitary(self) -> np.ndarray:
        """Diagonals of U_k = exp(-2i g j cos(theta) S_z - i g^2 k sin(2 theta) S_z^2)."""
        k, s = self._grid()
        return np.exp(-2j * self.g * self.j * np.cos(self.theta) * s
                      - 1j * self.g ** 2 * k * np.sin(2 * self.theta) * s * s)

    def eps1(self) -> np.ndarray:
        k, s = self._grid()
        return -2.0 * k * np.sin(self.theta) * s

    def eps2(self) -> np.ndarray:
        k, s = self._grid()
        return 2.0 * (k * k - self.j) * np.sin(self.theta) ** 2 * s * s

    def delta2(self) -> np.ndarray:
        k, s = self._grid()
        return -k * np.sin(2 * self.theta) * s * s

    def truncated(self) -> np.ndarray:
        """E_k = a_k U_k (1 + g eps1_k + g^2 eps2_k), the weak-coupling form."""
        w = (self.weights * np.exp(1j * self.gamma))[:, None]
        return w * self.unitary() * (1.0 + self.g * self.eps1() + self.g ** 2 * self.eps2())

    def exact(self) -> np.ndarray:
        """Resummed family whose weak-coupling expansion is :meth:`truncated`.

        e_k(sigma) = a_k [e^{-i theta/2} u]^{j+k} [e^{i theta/2} v]^{j-k} with
        u, v = cos(theta/2) e^{-i g sigma} +/- i sin(theta/2) e^{i g sigma}.
        Summing e_k(sigma) conj(e_k(sigma')) over k gives the environment kernel.
        """
        th = self.theta
        s = self.sigma
        u = np.exp(-0.5j * th) * (np.cos(th / 2) * np.exp(-1j * self.g * s) + 1j * np.sin(th / 2) * np.exp(1j * self.g * s))
        v = np.exp(0.5j * th) * (np.cos(th / 2) * np.exp(-1j * self.g * s) - 1j * np.sin(th / 2) * np.exp(1j * self.g * s))
        up = ((self.two_j + self.two_k) // 2)[:, None]
        down = ((self.two_j - self.two_k) // 2)[:, None]
        return (self.weights * np.exp(1j * self.gamma))[:, None] * _int_power(u, up) * _int_power(v, down)


def _int_power(z: np.ndarray, n: np.ndarray) -> np.ndarray:
    """z[None, :] ** n[:, None] in log-magnitude/phase form (0**0 == 1)."""
    with np.errstate(divide="ignore"):
        log_abs = np.log(np.abs(z))[None, :]
    arg = np.angle(z)[None, :]
    with np.errstate(invalid="ignore"):
        log_mag = np.where(n == 0, 0.0, n * log_abs)
    return np.exp(log_mag + 1j * (n * arg))


def configuration_diagonals(two_s: int, two_j: int, theta: float, g: float) -> np.ndarray:
    """Kraus diagonals labelled by environment magnetization K (z-basis configurations).

    sqrt(binom(2j, j+K)) (cos(theta/2) e^{-ig sigma})^{j+K} (sin(theta/2) e^{ig sigma})^{j-K}
    """
    two_k = spin_labels(two_j)
    sigma = spin_labels(two_s) / 2
    up = ((two_j + two_k) // 2)[:, None]
    down = ((two_j - two_k) // 2)[:, None]
    root = np.exp(log_binomial_root(two_j, two_k) + 0.5 * two_j * np.log(2.0))[:, None]
    return root * _int_power(np.cos(theta / 2) * np.exp(-1j * g * sigma), up) * _int_power(
        np.sin(theta / 2) * np.exp(1j * g * sigma), down
    )


def ising_kraus_family(two_s: int, two_j: int, theta: float, g: float) -> KrausFamily:
    two_s = _check_spin("two_s", two_s)
    two_j = _check_spin("two_j", two_j)
    theta = _check_theta(theta)
    two_k = spin_labels(two_j)
    weights = np.exp(log_binomial_root(two_j, two_k))
    return KrausFamily(two_s, two_j, theta, float(g), two_k, weights, np.zeros(two_k.shape))


def kernel_from_diagonals(diagonals: np.ndarray) -> np.ndarray:
    """K[s, s'] = sum_k e_k(s) conj(e_k(s'))."""
    return diagonals.T @ diagonals.conj()


def channel_apply(family: KrausFamily, cat: CatState, form: str = "exact") -> StructuredDensity:
    """Apply sum_k E_k rho E_k^dagger to the cat state.

    ``form="exact"`` uses the resummed family, ``form="truncated"`` the
    second-order one; the latter is not trace preserving beyond O(g^2), so its
    norm is set to the resulting trace.
    """
    if family.two_s != cat.two_s:
        raise DimensionMismatchError(f"family two_s={family.two_s} vs cat two_s={cat.two_s}")
    if form == "exact":
        diag = family.exact()
    elif form == "truncated":
        diag = family.truncated()
    else:
        raise ValueError(f"unknown form {form!r}")
    kernel = kernel_from_diagonals(diag)
    norm = float(np.sum(cat.weights * kernel.diagonal().real))
    return StructuredDensity(cat, kernel, norm, None, EnvParams(family.two_j, family.theta, family.g))


def completeness_residual(family: KrausFamily, form: str = "exact") -> float:
    """max_sigma |sum_k |e_k(sigma)|^2 - 1|."""
    diag = family.exact() if form == "exact" else family.truncated()
    return float(np.max(np.abs(np.sum(np.abs(diag) ** 2, axis=0) - 1.0)))


def moment_conditions(family: KrausFamily) -> tuple[float, float, float]:
    """(sum a_k^2, sum a_k^2 k, sum a_k^2 k^2); the last should equal j/2."""
    a2 = family.weights ** 2
    k = family.k
    return float(a2.sum()), float(a2 @ k), float(a2 @ (k * k))


def operator_moment_conditions(family: KrausFamily) -> tuple[np.ndarray, np.ndarray]:
    """Diagonals of sum a_k^2 eps1_k and sum a_k^2 [eps1_k^2 + 2 eps2_k]; both vanish."""
    a2 = (family.weights ** 2)[:, None]
    e1 = family.eps1()
    return np.sum(a2 * e1, axis=0), np.sum(a2 * (e1 * e1 + 2.0 * family.eps2()), axis=0)


def average_unitary_dagger(family: KrausFamily) -> np.ndarray:
    """Diagonal of sum_k a_k^2 U_k^dagger."""
    return (family.weights ** 2) @ family.unitary().conj()


def mean_eps2(family: KrausFamily) -> np.ndarray:
    """Diagonal of sum_k a_k^2 eps2_k (= -j sin^2(theta) S_z^2)."""
    return (family.weights ** 2) @ family.eps2()


def approximate_left_inverse(family: KrausFamily, two_k: int) -> np.ndarray:
    """Diagonal of a_k^{-1} e^{-i gamma_k} (1 - g eps1_k) U_k^dagger, accurate to O(g)."""
    i = _k_index(family, two_k)
    return (np.exp(-1j * family.gamma[i]) / family.weights[i]) * (1.0 - family.g * family.eps1()[i]) * family.unitary()[i].conj()


def left_inverse_deviation(family: KrausFamily, two_k: int, form: str = "truncated") -> float:
    """max_sigma |E_k^{-1} E_k - 1|."""
    i = _k_index(family, two_k)
    e = (family.truncated() if form == "truncated" else family.exact())[i]
    return float(np.max(np.abs(approximate_left_inverse(family, two_k) * e - 1.0)))


def _k_index(family: KrausFamily, two_k: int) -> int:
    if (two_k - family.two_j) % 2 or abs(two_k) > family.two_j:
        raise ValueError(f"two_k={two_k} not in family with two_j={family.two_j}")
    return (two_k + family.two_j) // 2


@dataclass(frozen=True)
class CatMoments:
    """<S_z^n> for n = 1..4 under the cat state."""

    m1: float
    m2: float
    m3: float
    m4: float

    @property
    def variance(self) -> float:
        return self.m2 - self.m1 ** 2


def cat_moments(cat: CatState) -> CatMoments:
    sigma = cat.two_sigma / 2
    w = cat.weights
    return CatMoments(*(float(np.sum(w * sigma ** n)) for n in (1, 2, 3, 4)))


@dataclass(frozen=True)
class PerturbativePrediction:
    """Weak-coupling predictions; ``regime`` flags validity rather than failing."""

    fidelity_prime_sq: float
    purity_prime: float
    fidelity_u_sq: float
    fidelity_0_sq: float
    p_m0: float
    b_abs_sq: float
    delta_f_sq: float
    delta_p: float
    delta_p_moments: float
    r_p: float
    regime: str


def perturbative_predictions(two_s: int, two_j: int, theta: float, g: float,
                             moments: CatMoments, zeta: float = ZETA) -> PerturbativePrediction:
    """Second- and fourth-order predictions from the cat moments.

    The fourth-order fidelity and purity differences use the general
    formulas with diagonal (hence commuting) operators, for which
    <A B A> = <A^2 B>.
    """
    s, j = two_s / 2, two_j / 2
    st2 = np.sin(theta) ** 2
    g2 = g * g
    m1, m2, m3, m4 = moments.m1, moments.m2, moments.m3, moments.m4
    var = m2 - m1 * m1
    # sum_k a_k^2 <(d eps1_k)^2> = 4 sin^2 (sum a_k^2 k^2) Var(S_z) = 2 j sin^2 Var(S_z)
    loss = 2.0 * j * st2 * var
    fu_sq = 1.0 - g2 * loss
    p_prime = 1.0 - 2.0 * g2 * loss
    # mean eps2 = -j sin^2 S_z^2
    mean_e2 = -j * st2 * m2
    var_e2 = (j * st2) ** 2 * (m4 - m2 * m2)
    # <(S_z - m1)^2 (S_z^2 - m2)>
    cross_sz = m4 - 2.0 * m1 * m3 + 2.0 * m1 * m1 * m2 - m2 * m2
    # sum_k a_k^2 <(d eps1_k)^2 d mean_eps2> = 2 j sin^2 * (-j sin^2) * cross_sz
    cross = -2.0 * j * j * st2 * st2 * cross_sz
    delta_f = -zeta ** 2 * g2 * g2 * var_e2 - 0.5 * zeta * g2 * g2 * (4.0 * cross - 2.0 * cross)
    delta_p_moments = -4.0 * zeta * g2 * g2 * cross
    b_abs_sq = float(np.exp(2.0 * log_binomial_root(two_j, np.array([0]))[0])) if two_j % 2 == 0 else float("nan")
    regime = asymptotics.regime_check(s, j, theta, g).classification
    if regime != "in-window":
        warnings.warn(f"parameters outside the perturbative window ({regime})", stacklevel=2)
    return PerturbativePrediction(
        fidelity_prime_sq=asymptotics.clt_fidelity_squared(s, j, theta, g),
        purity_prime=p_prime,
        fidelity_u_sq=fu_sq,
        fidelity_0_sq=1.0 - g2 * s * j * st2,
        p_m0=b_abs_sq * (1.0 + 2.0 * zeta * g2 * mean_e2),
        b_abs_sq=b_abs_sq,
        delta_f_sq=delta_f,
        delta_p=8.0 * g2 * g2 * s * s * j * j * st2 * st2,
        delta_p_moments=delta_p_moments,
        r_p=4.0 * g2 * s * j * st2,
        regime=regime,
    )
