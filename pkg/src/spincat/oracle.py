"""Brute-force ground truth by explicit unitary dilation on small systems.

Nothing here uses the analytic kernels or probe amplitudes: the environment
is enumerated configuration by configuration in the full 2^(2j) product
space, and the probe is evolved as a dense joint system-probe state.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CostGuardError, ValidationError
from .model import P_MIN, CatState, ProbeModel, StructuredDensity

MAX_ENV_TWO_J = 10
MAX_PROBE_TWO_J = 20


@dataclass(frozen=True)
class DenseOperator:
    entries: np.ndarray = field(repr=False)

    @property
    def dimension(self) -> int:
        return self.entries.shape[0]


def spin_operators(two_j: int):
    """(J_z, J_+, J_y) for spin two_j/2 in the ascending-m basis."""
    m = np.arange(-two_j, two_j + 1, 2) / 2
    j = two_j / 2
    jz = np.diag(m).astype(np.complex128)
    jp = np.diag(np.sqrt(j * (j + 1) - m[:-1] * (m[:-1] + 1)), k=-1).astype(np.complex128)
    jy = (jp - jp.conj().T) / 2j
    return jz, jp, jy


def wigner_rotation(two_j: int, angle: float, axis: str = "y") -> DenseOperator:
    """exp(-i angle J_axis), by eigendecomposition of J_y (or directly for J_z)."""
    jz, _, jy = spin_operators(two_j)
    if axis == "z":
        return DenseOperator(np.diag(np.exp(-1j * angle * jz.diagonal().real)))
    if axis != "y":
        raise ValueError(f"unsupported axis {axis!r}")
    evals, evecs = np.linalg.eigh(jy)
    return DenseOperator((evecs * np.exp(-1j * angle * evals)) @ evecs.conj().T)


def coherent_state(two_j: int, theta: float) -> np.ndarray:
    """|pi - theta, pi/2> = exp(-i pi/2 J_z) exp(-i (pi - theta) J_y) |j, j>."""
    top = np.zeros(two_j + 1, dtype=np.complex128)
    top[-1] = 1.0
    ry = wigner_rotation(two_j, math.pi - theta, "y").entries
    rz = wigner_rotation(two_j, math.pi / 2, "z").entries
    return rz @ (ry @ top)


def coherent_state_residual(two_j: int, theta: float) -> float:
    """|| (J_y sin(theta) - J_z cos(theta)) chi - j chi || for the probe state chi."""
    jz, _, jy = spin_operators(two_j)
    chi = coherent_state(two_j, theta)
    op = jy * math.sin(theta) - jz * math.cos(theta)
    return float(np.linalg.norm(op @ chi - (two_j / 2) * chi))


def dense_cat_state(two_s: int, amp_plus: complex, amp_minus: complex) -> np.ndarray:
    """Cat state built by rotating the extremal Dicke states onto the x axis."""
    r = wigner_rotation(two_s, math.pi / 2, "y").entries
    up = r[:, -1]
    # exp(-i pi/2 s_y) maps |down_z> to -|down_x>, one sign per particle
    down = (-1.0) ** two_s * r[:, 0]
    return amp_plus * up + amp_minus * down


def dilated_environment(cat: CatState, two_j: int, theta: float, g: float,
                        delta_e_t: float = 0.0) -> DenseOperator:
    """Reduced system state after the Ising environment, by enumeration.

    Each of the 2^(2j) z-configurations carries its Boltzmann-like weight and
    evolves the system under the joint diagonal Hamiltonian
    -dE sum j_z^(n) + alpha sum j_z^(n) S_z with alpha t = 2 g.
    """
    if two_j > MAX_ENV_TWO_J:
        raise CostGuardError(f"dilated_environment limited to two_j <= {MAX_ENV_TWO_J}, got {two_j}")
    psi = np.asarray(cat.coeffs, dtype=np.complex128)
    rho_s = np.outer(psi, psi.conj())
    sigma = cat.two_sigma / 2
    p_up = math.cos(theta / 2) ** 2
    p_down = math.sin(theta / 2) ** 2
    out = np.zeros_like(rho_s)
    for config in itertools.product((1, -1), repeat=two_j):
        n_up = config.count(1)
        weight = p_up ** n_up * p_down ** (two_j - n_up)
        if weight == 0.0:
            continue
        mag = 0.5 * sum(config)
        u = np.exp(-1j * (2.0 * g * mag * sigma - delta_e_t * mag))
        out += weight * (u[:, None] * rho_s * u.conj()[None, :])
    return DenseOperator(out)


def dilated_probe(rho_prime: DenseOperator, two_j: int, theta: float, g: float):
    """Probe measurement by dense joint evolution; one (p_m, state) per outcome.

    Outcomes are ordered by ascending m. Zero-probability outcomes yield
    ``(0.0, None)``.
    """
    if two_j > MAX_PROBE_TWO_J:
        raise CostGuardError(f"dilated_probe limited to two_j <= {MAX_PROBE_TWO_J}, got {two_j}")
    rho = rho_prime.entries
    ns = rho.shape[0]
    npr = two_j + 1
    two_s = ns - 1
    chi = coherent_state(two_j, theta)
    joint = np.kron(rho, np.outer(chi, chi.conj()))
    sigma = np.arange(-two_s, two_s + 1, 2) / 2
    m = np.arange(-two_j, two_j + 1, 2) / 2
    interaction = np.exp(-2j * g * np.kron(sigma, m))
    rotate = np.kron(np.eye(ns), wigner_rotation(two_j, math.pi / 2, "y").entries)
    w = rotate * interaction[None, :]
    joint = w @ joint @ w.conj().T
    blocks = joint.reshape(ns, npr, ns, npr)
    results = []
    for im in range(npr):
        block = blocks[:, im, :, im]
        p = float(np.trace(block).real)
        results.append((p, DenseOperator(block / p)) if p > 0 else (0.0, None))
    return results


def dense_fidelity_squared(rho: np.ndarray, psi: np.ndarray) -> float:
    return float(np.real(psi.conj() @ rho @ psi))


def dense_purity(rho: np.ndarray) -> float:
    return float(np.real(np.trace(rho @ rho)))


def dense_from_structured(rho: StructuredDensity) -> DenseOperator:
    return DenseOperator(rho.dense())


def check_density(rho: np.ndarray, tol: float = 1e-10) -> None:
    """Raise unless rho is Hermitian, trace one and positive semidefinite."""
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise ValidationError("not Hermitian")
    if abs(np.trace(rho).real - 1.0) > tol:
        raise ValidationError(f"trace {np.trace(rho).real!r}")
    if np.linalg.eigvalsh(rho).min() < -tol:
        raise ValidationError("not positive semidefinite")


def probe_reference_matrix(probe: ProbeModel) -> np.ndarray:
    """R[m, s, s'] = A_{ms} conj(A_{ms'}), the phase-free comparison object."""
    a = probe.amplitudes
    return a[:, :, None] * a.conj()[:, None, :]


DEFAULT_GRID = {
    "two_s": (1, 2, 3, 4),
    "two_j": (1, 2, 3),
    "theta": (0.1, math.pi / 6, math.pi / 2, 2.8),
    "g": (0.0, 0.05, 0.3, 1.0),
    "amps": (
        (1.0, 0.0),
        (2 ** -0.5, 2 ** -0.5),
        (2 ** -0.5, 1j * 2 ** -0.5),
    ),
}



def grid_check(grid=None) -> dict[str, float]:
    """Worst analytic-vs-dilation residual per check over the grid."""
    from .kraus import configuration_diagonals, ising_kraus_family, kernel_from_diagonals
    from .model import apply_environment, apply_probe_measurement, cat_coefficients, dephasing_kernel, probe_model
    from .observables import fidelity_squared, outcome_table, purity

    grid = grid or DEFAULT_GRID
    worst = dict.fromkeys(
        ["environment_state", "environment_fidelity", "environment_purity", "probe_probability",
         "probe_state", "probe_fidelity", "probe_purity", "kraus_resummed", "delta_e_independence",
         "joint_state_validity"], 0.0)

    def bump(name, value):
        worst[name] = max(worst[name], float(value))

    for two_s, two_j, theta, g, (cp, cm) in itertools.product(
            grid["two_s"], grid["two_j"], grid["theta"], grid["g"], grid["amps"]):
        cat = cat_coefficients(two_s, cp, cm)
        psi = np.asarray(cat.coeffs)
        kernel = dephasing_kernel(two_j, theta, g, two_s)
        rho_a = apply_environment(cat, kernel)
        rho_o = dilated_environment(cat, two_j, theta, g).entries
        bump("environment_state", np.max(np.abs(rho_a.dense() - rho_o)))
        bump("environment_fidelity", abs(fidelity_squared(rho_a) - dense_fidelity_squared(rho_o, psi)))
        bump("environment_purity", abs(purity(rho_a) - dense_purity(rho_o)))
        shifted = dilated_environment(cat, two_j, theta, g, delta_e_t=1.7).entries
        bump("delta_e_independence", np.max(np.abs(shifted - rho_o)))
        try:
            check_density(rho_o)
        except ValidationError:
            bump("joint_state_validity", 1.0)

        fam = ising_kraus_family(two_s, two_j, theta, g)
        bump("kraus_resummed", np.max(np.abs(kernel_from_diagonals(fam.exact()) - kernel.entries)))
        conf = configuration_diagonals(two_s, two_j, theta, g)
        bump("kraus_resummed", np.max(np.abs(kernel_from_diagonals(conf) - kernel.entries)))

        probe = probe_model(two_j, theta, g, two_s)
        table = outcome_table(rho_a, probe)
        for im, (p_o, state_o) in enumerate(dilated_probe(DenseOperator(rho_o), two_j, theta, g)):
            bump("probe_probability", abs(table.p[im] - p_o))
            if p_o <= P_MIN or not table.valid[im]:
                continue
            _, post = apply_probe_measurement(rho_a, probe, int(probe.two_m[im]))
            rho_m = state_o.entries
            try:
                check_density(rho_m)
            except ValidationError:
                bump("joint_state_validity", 1.0)
            bump("probe_state", np.max(np.abs(post.dense() - rho_m)))
            bump("probe_fidelity", abs(table.fidelity_squared[im] - dense_fidelity_squared(rho_m, psi)))
            bump("probe_purity", abs(table.purity[im] - dense_purity(rho_m)))
    return worst
