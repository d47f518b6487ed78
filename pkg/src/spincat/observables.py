"""Fidelity, purity, outcome statistics and recovery ratios."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _core
from .errors import DimensionMismatchError, NumericalConsistencyError
from .model import P_MIN, CatState, ProbeModel, StructuredDensity, spin_labels

#: roundoff band outside [0, 1] that is clamped rather than rejected
CLAMP_TOL = 1e-12


def _clamp(value: float, name: str, lower: float = 0.0) -> float:
    if value < lower - CLAMP_TOL or value > 1.0 + CLAMP_TOL:
        raise NumericalConsistencyError(f"{name}={value!r} outside [{lower}, 1]")
    return float(min(max(value, 0.0), 1.0))


def _overlap_vector(rho: StructuredDensity, cat: CatState | None) -> np.ndarray:
    # u_sigma = conj(phi_sigma) c_sigma, so <phi|rho|phi> = u K u^dagger / norm
    if cat is None or cat is rho.cat:
        return rho.cat.weights.astype(np.complex128)
    if cat.two_s != rho.cat.two_s:
        raise DimensionMismatchError(f"reference two_s={cat.two_s} vs state two_s={rho.cat.two_s}")
    return cat.coeffs.conj() * rho.cat.coeffs


def fidelity_squared(rho: StructuredDensity, cat: CatState | None = None) -> float:
    """<psi|rho|psi> for the reference cat (defaults to the state's own cat)."""
    u = _overlap_vector(rho, cat)
    value = float(np.real(u @ rho.kernel @ u.conj())) / rho.norm
    return _clamp(value, "fidelity squared")


def fidelity_to_cat(rho: StructuredDensity, cat: CatState | None = None) -> float:
    """F = sqrt(<psi|rho|psi>)."""
    return float(np.sqrt(fidelity_squared(rho, cat)))


def purity(rho: StructuredDensity) -> float:
    """Tr rho^2 = sum |c_s|^2 |c_s'|^2 |K|^2 / norm^2."""
    w = rho.cat.weights
    kabs = rho.kernel.real ** 2 + rho.kernel.imag ** 2
    value = float(w @ kabs @ w) / rho.norm ** 2
    return _clamp(value, "purity", lower=1.0 / (rho.cat.two_s + 1))


@dataclass(frozen=True)
class OutcomeTable:
    """Exact statistics of every probe outcome.

    Entries with ``valid == False`` had p_m <= 1e-300; their fidelity and
    purity are NaN and they carry zero weight in the means.
    """

    two_m: np.ndarray
    p: np.ndarray
    fidelity: np.ndarray
    purity: np.ndarray
    fidelity_squared: np.ndarray = field(repr=False)
    valid: np.ndarray = field(repr=False)

    @property
    def m(self) -> np.ndarray:
        return self.two_m / 2

    @property
    def total_probability(self) -> float:
        return float(np.sum(self.p))

    @property
    def mean_outcome(self) -> float:
        return float(np.sum(self.m * self.p))

    @property
    def mean_fidelity(self) -> float:
        return float(np.sum(self.p[self.valid] * self.fidelity[self.valid]))

    @property
    def mean_fidelity_squared(self) -> float:
        return float(np.sum(self.p[self.valid] * self.fidelity_squared[self.valid]))

    @property
    def mean_purity(self) -> float:
        return float(np.sum(self.p[self.valid] * self.purity[self.valid]))

    def at(self, two_m: int) -> tuple[float, float, float]:
        """(p_m, F''_m, P''_m) for one outcome."""
        i = int(np.flatnonzero(self.two_m == two_m)[0])
        return float(self.p[i]), float(self.fidelity[i]), float(self.purity[i])


def outcome_table(rho_prime: StructuredDensity, probe: ProbeModel, cat_reference: CatState | None = None) -> OutcomeTable:
    """p_m, F''_m and P''_m for every outcome m = -j..j without sampling."""
    if probe.two_s != rho_prime.cat.two_s:
        raise DimensionMismatchError(f"probe two_s={probe.two_s} vs state two_s={rho_prime.cat.two_s}")
    u = _overlap_vector(rho_prime, cat_reference)
    w = rho_prime.cat.weights
    amps = probe.amplitudes
    if rho_prime.toeplitz is not None:
        psum, fsum, qsum = _core.outcome_sums(u, w, rho_prime.toeplitz, amps)
    else:
        k = rho_prime.kernel
        v = u[None, :] * amps
        q = w[None, :] * (amps.real ** 2 + amps.imag ** 2)
        psum = q @ k.diagonal().real
        fsum = ((v @ k) * v.conj()).real.sum(axis=1)
        qsum = ((q @ (k.real ** 2 + k.imag ** 2)) * q).sum(axis=1)

    norm = rho_prime.norm
    p = psum / norm
    valid = p > P_MIN
    fsq = np.full(p.shape, np.nan)
    pur = np.full(p.shape, np.nan)
    fsq[valid] = fsum[valid] / (norm * p[valid])
    pur[valid] = qsum[valid] / (norm * p[valid]) ** 2
    lower = 1.0 / (rho_prime.cat.two_s + 1)
    for i in np.flatnonzero(valid):
        fsq[i] = _clamp(fsq[i], f"fidelity squared (two_m={probe.two_m[i]})")
        pur[i] = _clamp(pur[i], f"purity (two_m={probe.two_m[i]})", lower=lower)
    return OutcomeTable(spin_labels(probe.two_j), p, np.sqrt(fsq), pur, fsq, valid)


@dataclass(frozen=True)
class RecoveryReport:
    """Fractions of lost fidelity and purity regained by a recovery operation.

    Ratios are NaN (not applicable) when nothing was lost.
    """

    f_before: float
    f_after: float
    p_before: float
    p_after: float
    r_f: float
    r_p: float

    @property
    def decoherence_gain(self) -> float:
        """Factor 1/(1 - R_p) by which the decoherence time is stretched."""
        return 1.0 / (1.0 - self.r_p)


def _ratio(before: float, after: float) -> float:
    if before >= 1.0 - CLAMP_TOL:
        return float("nan")
    return (after - before) / (1.0 - before)


def recovery_report(before: StructuredDensity, after: StructuredDensity, cat_reference: CatState | None = None) -> RecoveryReport:
    f0 = fidelity_to_cat(before, cat_reference)
    f1 = fidelity_to_cat(after, cat_reference)
    p0 = purity(before)
    p1 = purity(after)
    return RecoveryReport(f0, f1, p0, p1, _ratio(f0, f1), _ratio(p0, p1))
