"""
GKSL generators and states for the three two-qubit models.

Superoperators act on row-major vectorized 4x4 matrices, vec(X) = X.reshape(-1),
so vec(A X B) = kron(A, B.T) @ vec(X).

Models
------
* common bath: both qubits share one Unruh bath; dissipative part only.
* transient: qubit A coupled to the bath, qubit B isolated.
* two baths: coupled qubits, each with its own bath, secular generator built
  on the eigenbasis transition operators.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .bath import BathSpectrum, DissipationCoeffs, VacuumKind
from .errors import DomainError, NumericalError, ValidationError
from .states import SIGMA, PauliCoeffs, check_density, density_to_pauli

I2 = np.eye(2, dtype=complex)
I4 = np.eye(4, dtype=complex)
SIGMA_PLUS = np.array([[0, 1], [0, 0]], dtype=complex)
SIGMA_MINUS = SIGMA_PLUS.T.copy()

NULL_TOL = 1e-9


# ---------------------------------------------------------------------------
# vectorization helpers
# ---------------------------------------------------------------------------

def spre(a: np.ndarray) -> np.ndarray:
    return np.kron(a, np.eye(a.shape[0]))


def spost(b: np.ndarray) -> np.ndarray:
    return np.kron(np.eye(b.shape[0]), b.T)


def sandwich(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Superoperator of X -> a X b."""
    return np.kron(a, b.T)


def commutator_super(h: np.ndarray) -> np.ndarray:
    """Superoperator of X -> -i [h, X]."""
    return -1j * (spre(h) - spost(h))


def dissipator(v: np.ndarray, rate: float = 1.0) -> np.ndarray:
    """rate * (2 V X V^dag - {V^dag V, X})."""
    vdv = v.conj().T @ v
    return rate * (2.0 * sandwich(v, v.conj().T) - spre(vdv) - spost(vdv))


def apply(L: np.ndarray, rho: np.ndarray) -> np.ndarray:
    n = rho.shape[0]
    return (L @ rho.reshape(-1)).reshape(n, n)


def trace_defect(L: np.ndarray) -> float:
    """Largest |Tr(L X)| over matrix units X; zero for trace-preserving L."""
    n = math.isqrt(L.shape[0])
    tr_row = np.eye(n).reshape(-1)
    return float(np.max(np.abs(tr_row @ L)))


def rk4_step_matrix(L: np.ndarray, h: float) -> np.ndarray:
    """One classical RK4 step of dv/dt = L v, written as a matrix.

    For a linear right-hand side the four stages collapse to the degree-4
    Taylor polynomial of exp(hL).
    """
    hl = h * L
    out = np.eye(L.shape[0], dtype=complex)
    term = out
    for k in range(1, 5):
        term = term @ hl / k
        out = out + term
    return out


def evolve_rk4(
    L: np.ndarray, rho0: np.ndarray, times: Sequence[float], step: float
) -> np.ndarray:
    """Fixed-step RK4 evolution sampled at ``times`` (ascending, from 0).

    Each interval is split into ceil(dt / step) equal substeps.
    """
    times = np.asarray(times, dtype=float)
    if times[0] != 0.0 or np.any(np.diff(times) < 0):
        raise ValueError("times must start at 0 and be non-decreasing")
    n = rho0.shape[0]
    v = np.asarray(rho0, dtype=complex).reshape(-1)
    out = np.empty((len(times), n, n), dtype=complex)
    out[0] = v.reshape(n, n)
    cache: dict[float, np.ndarray] = {}
    for k in range(1, len(times)):
        dt = times[k] - times[k - 1]
        if dt > 0:
            nsub = max(1, math.ceil(dt / step - 1e-9))
            h = dt / nsub
            P = cache.get(h)
            if P is None:
                P = cache[h] = rk4_step_matrix(L, h)
            for _ in range(nsub):
                v = P @ v
        out[k] = v.reshape(n, n)
    return out


# ---------------------------------------------------------------------------
# steady states from the null space
# ---------------------------------------------------------------------------

TAU_STAR_OBSERVABLE = sum(np.kron(SIGMA[i], SIGMA[i]) for i in (1, 2, 3))


def null_space(L: np.ndarray, tol: float = NULL_TOL) -> np.ndarray:
    """Orthonormal basis (columns) of the numerical null space of ``L``.

    Singular values below ``tol`` times the largest one count as zero.
    """
    _, s, vh = np.linalg.svd(L)
    if s[0] == 0.0:
        return vh.conj().T
    k = int(np.sum(s < tol * s[0]))
    return vh[len(s) - k:].conj().T


def steady_state_nullspace(
    L: np.ndarray, tau_star: Optional[float] = None, tol: float = NULL_TOL
) -> np.ndarray:
    """Unit-trace stationary state of ``L``.

    A one-dimensional null space fixes the state by normalization. A
    two-dimensional one (the common bath conserves tau*) needs ``tau_star``.
    """
    basis = null_space(L, tol)
    dim = basis.shape[1]
    n = math.isqrt(L.shape[0])
    if dim == 0:
        raise NumericalError(f"no null vector within relative tolerance {tol:g}")
    functionals = [np.eye(n).reshape(-1)]
    targets = [1.0]
    if tau_star is not None:
        if n != 4:
            raise ValueError("tau_star constraint only applies to two qubits")
        functionals.append(TAU_STAR_OBSERVABLE.T.reshape(-1))
        targets.append(tau_star)
    if dim > len(functionals):
        raise NumericalError(
            f"degenerate null space of dimension {dim}; "
            f"{len(functionals)} constraint(s) cannot select a unique state"
        )
    M = np.array([f @ basis for f in functionals])
    coef, *_ = np.linalg.lstsq(M, np.array(targets, dtype=complex), rcond=None)
    if np.max(np.abs(M @ coef - targets)) > 1e-8:
        raise NumericalError("null space incompatible with the requested constraints")
    rho = (basis @ coef).reshape(n, n)
    return 0.5 * (rho + rho.conj().T)


# ---------------------------------------------------------------------------
# equilibrium: common bath
# ---------------------------------------------------------------------------

def _unit(n) -> np.ndarray:
    n = np.asarray(n, dtype=float)
    norm = np.linalg.norm(n)
    if abs(norm - 1.0) > 1e-12:
        raise DomainError(f"n must be a unit vector, |n| = {norm}")
    return n


LEVI_CIVITA = np.zeros((3, 3, 3))
for _i, _j, _k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
    LEVI_CIVITA[_i, _j, _k] = 1.0
    LEVI_CIVITA[_j, _i, _k] = -1.0


def equilibrium_steady_state(R: float, tau_star: float, n=(0.0, 0.0, 1.0)) -> PauliCoeffs:
    """Asymptotic common-bath state for detailed-balance ratio ``R``.

    ``tau_star`` is the conserved sum of diagonal correlations; positivity of
    the initial state restricts it to [-3, 1].
    """
    if not -3.0 <= tau_star <= 1.0:
        raise DomainError(f"tau_star must lie in [-3, 1], got {tau_star}")
    n = _unit(n)
    d = 3.0 + R * R
    bloch = np.zeros((4, 4))
    bloch[0, 0] = 1.0
    bloch[0, 1:] = bloch[1:, 0] = -R * (tau_star + 3.0) / d * n
    bloch[1:, 1:] = ((tau_star - R * R) * np.eye(3) + R * R * (tau_star + 3.0) * np.outer(n, n)) / d
    return PauliCoeffs(bloch / 4.0)


def kossakowski_matrix(coeffs: DissipationCoeffs, n) -> np.ndarray:
    n = _unit(n)
    return (
        coeffs.A * np.eye(3)
        - 1j * coeffs.B * np.einsum("ijk,k->ij", LEVI_CIVITA, n)
        + coeffs.C * np.outer(n, n)
    )


def build_common_bath_liouvillian(coeffs: DissipationCoeffs, n=(0.0, 0.0, 1.0)) -> np.ndarray:
    """Dissipative generator for two qubits at zero separation in one bath.

    All four (alpha, beta) Kossakowski blocks coincide, so the jump operators
    are the collective spins S_i = sigma_i (x) 1 + 1 (x) sigma_i.
    """
    K = kossakowski_matrix(coeffs, n)
    S = [np.kron(SIGMA[i], I2) + np.kron(I2, SIGMA[i]) for i in (1, 2, 3)]
    L = np.zeros((16, 16), dtype=complex)
    for i in range(3):
        for j in range(3):
            if K[i, j] == 0:
                continue
            ss = S[i] @ S[j]
            L += 0.5 * K[i, j] * (2.0 * sandwich(S[j], S[i]) - spre(ss) - spost(ss))
    return L


# ---------------------------------------------------------------------------
# transient: one coupled qubit
# ---------------------------------------------------------------------------

def transient_rates(coeffs: DissipationCoeffs) -> tuple[float, float]:
    """(A, B) of the transient closed form: total rate and net emission rate.

    B is oriented so that B/A = R and the coupled qubit relaxes to its Gibbs
    state; ``literal_sign=True`` in :func:`transient_evolution` flips it.
    """
    return (
        coeffs.gamma_plus + coeffs.gamma_minus,
        coeffs.gamma_minus - coeffs.gamma_plus,
    )


def transient_evolution(
    p0: PauliCoeffs,
    A: float,
    B: float,
    Omega: float,
    tau: float,
    literal_sign: bool = False,
) -> PauliCoeffs:
    """Closed-form state of the pair when only qubit A is damped.

    Rows 1, 2 of the coefficient tensor rotate at ``Omega`` and decay at A/2;
    row 3 relaxes at rate A towards -(B/A) times row 0.
    """
    if not A > 0:
        raise DomainError(f"A must be positive, got {A}")
    if tau < 0:
        raise DomainError(f"tau must be non-negative, got {tau}")
    if literal_sign:
        B = -B
    r0 = p0.rho
    half = math.exp(-0.5 * A * tau)
    full = math.exp(-A * tau)
    c, s = math.cos(Omega * tau), math.sin(Omega * tau)
    r = np.empty((4, 4))
    r[0] = r0[0]
    r[1] = half * (c * r0[1] - s * r0[2])
    r[2] = half * (s * r0[1] + c * r0[2])
    r[3] = r0[3] * full - (B / A) * r0[0] * -math.expm1(-A * tau)
    return PauliCoeffs(r)


def single_qubit_generator(gamma_plus: float, gamma_minus: float, omega: float = 0.0) -> np.ndarray:
    """Generator on qubit A alone, tensored with the identity on qubit B."""
    La = np.kron(SIGMA_MINUS, I2)
    Lb = np.kron(SIGMA_PLUS, I2)
    L = dissipator(La, gamma_minus / 2.0) + dissipator(Lb, gamma_plus / 2.0)
    if omega:
        L = L + commutator_super(0.5 * omega * np.kron(SIGMA[3], I2))
    return L


# ---------------------------------------------------------------------------
# two baths: coupled qubits
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TwoQubitHamiltonian:
    omega1: float
    omega2: float
    K: float

    def __post_init__(self):
        if not (self.omega1 > 0 and self.omega2 > 0):
            raise DomainError("qubit gaps must be positive")

    @property
    def symmetric(self) -> bool:
        return self.omega1 == self.omega2

    def matrix(self) -> np.ndarray:
        return (
            0.5 * self.omega1 * np.kron(SIGMA[3], I2)
            + 0.5 * self.omega2 * np.kron(I2, SIGMA[3])
            + self.K
            * (np.kron(SIGMA_PLUS, SIGMA_MINUS) + np.kron(SIGMA_MINUS, SIGMA_PLUS))
        )


@dataclass(frozen=True)
class EigenStructure:
    """Eigenpairs of the coupled-qubit Hamiltonian.

    ``vectors[:, k]`` is |lambda_{k+1}> in the computational basis
    (|11>, |10>, |01>, |00>), ordered as ground, doubly excited, +kappa_mix,
    -kappa_mix.
    """

    energies: np.ndarray
    theta: float
    kappa_mix: float
    Omega1: float
    Omega2: float
    vectors: np.ndarray


def eigen_structure(H: TwoQubitHamiltonian) -> EigenStructure:
    detuning = H.omega1 - H.omega2
    if H.K == 0 and detuning == 0:
        raise DomainError("degenerate single-excitation manifold: K = 0 and omega1 = omega2")
    kappa_mix = math.hypot(H.K, detuning / 2.0)
    theta = math.atan2(2.0 * H.K, detuning)
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    e_avg = 0.5 * (H.omega1 + H.omega2)
    energies = np.array([-e_avg, e_avg, kappa_mix, -kappa_mix])
    vectors = np.zeros((4, 4), dtype=complex)
    vectors[3, 0] = 1.0
    vectors[0, 1] = 1.0
    vectors[1, 2], vectors[2, 2] = c, s
    vectors[1, 3], vectors[2, 3] = -s, c
    return EigenStructure(
        energies=energies,
        theta=theta,
        kappa_mix=kappa_mix,
        Omega1=e_avg - kappa_mix,
        Omega2=e_avg + kappa_mix,
        vectors=vectors,
    )


def _eig_op(es: EigenStructure, a: int, b: int) -> np.ndarray:
    """|lambda_a><lambda_b| in the computational basis (1-based labels)."""
    return np.outer(es.vectors[:, a - 1], es.vectors[:, b - 1].conj())


def transition_ops(es: EigenStructure) -> dict[tuple[int, int], np.ndarray]:
    """Lowering operators V[(j, mu)]: the part of qubit j's sigma_- that
    lowers the energy by Omega_mu.

    sigma_{1-} = V[(1,1)] + V[(1,2)] and sigma_{2-} = V[(2,1)] + V[(2,2)].
    """
    c, s = math.cos(es.theta / 2.0), math.sin(es.theta / 2.0)
    P = lambda a, b: _eig_op(es, a, b)  # noqa: E731
    return {
        (1, 1): s * (P(3, 2) - P(1, 4)),
        (1, 2): c * (P(4, 2) + P(1, 3)),
        (2, 1): c * (P(3, 2) + P(1, 4)),
        (2, 2): s * (P(1, 3) - P(4, 2)),
    }


def _channel_frequency(es: EigenStructure, mu: int) -> float:
    return es.Omega1 if mu == 1 else es.Omega2


def bath_dissipator(
    es: EigenStructure,
    ops: dict,
    j: int,
    spec: BathSpectrum,
    mu_coupling: float,
) -> np.ndarray:
    """Dissipator of bath ``j``: decay at G(+Omega), excitation at G(-Omega),
    each scaled by pi * mu^2."""
    if spec.kind is not VacuumKind.UNRUH:
        raise DomainError("two-bath model requires Unruh spectra")
    pref = math.pi * mu_coupling**2
    L = np.zeros((16, 16), dtype=complex)
    for mu in (1, 2):
        w = _channel_frequency(es, mu)
        v = ops[(j, mu)]
        L += dissipator(v, pref * spec(w))
        L += dissipator(v.conj().T, pref * spec(-w))
    return L


def build_two_bath_liouvillian(
    es: EigenStructure,
    ops: dict,
    spec1: BathSpectrum,
    spec2: BathSpectrum,
    mu_coupling: float,
    H: Optional[TwoQubitHamiltonian] = None,
) -> np.ndarray:
    """Full generator -i[H_sys, .] + L_1 + L_2.

    The Hamiltonian is rebuilt from ``es`` unless ``H`` is given.
    """
    h = hamiltonian_from_eigen(es) if H is None else H.matrix()
    return (
        commutator_super(h)
        + bath_dissipator(es, ops, 1, spec1, mu_coupling)
        + bath_dissipator(es, ops, 2, spec2, mu_coupling)
    )


def hamiltonian_from_eigen(es: EigenStructure) -> np.ndarray:
    U = es.vectors
    return U @ np.diag(es.energies) @ U.conj().T


def neq_populations(es: EigenStructure, spec1: BathSpectrum, spec2: BathSpectrum) -> np.ndarray:
    """Stationary populations of |lambda_1..4> for the two-bath model.

    The four levels form two independent two-state rate processes: the
    Omega_1 channel (|l2>->|l3>, |l4>->|l1>), weighted sin^2 on bath 1 and
    cos^2 on bath 2, and the Omega_2 channel (|l2>->|l4>, |l3>->|l1>) with
    the weights swapped.
    """
    for spec in (spec1, spec2):
        if spec.kind is not VacuumKind.UNRUH:
            raise DomainError("two-bath model requires Unruh spectra")
    c2 = math.cos(es.theta / 2.0) ** 2
    s2 = math.sin(es.theta / 2.0) ** 2
    w1, w2 = es.Omega1, es.Omega2
    # X: Omega_2 channel, Y: Omega_1 channel; "dn" decay, "up" excitation
    x_dn = 2 * c2 * spec1(w2) + 2 * s2 * spec2(w2)
    x_up = 2 * c2 * spec1(-w2) + 2 * s2 * spec2(-w2)
    y_dn = 2 * s2 * spec1(w1) + 2 * c2 * spec2(w1)
    y_up = 2 * s2 * spec1(-w1) + 2 * c2 * spec2(-w1)
    X, Y = x_dn + x_up, y_dn + y_up
    if X == 0 or Y == 0:
        raise DomainError("degenerate baths: both spectra vanish at the transition frequencies")
    return np.array([x_dn * y_dn, x_up * y_up, x_up * y_dn, x_dn * y_up]) / (X * Y)


def neq_steady_state_closed_form(
    es: EigenStructure, spec1: BathSpectrum, spec2: BathSpectrum, basis: str = "bare"
) -> np.ndarray:
    """Two-bath stationary state, diagonal in the eigenbasis.

    ``basis="eigen"`` returns diag(p_1..p_4); ``"bare"`` rotates it to the
    computational basis.
    """
    p = neq_populations(es, spec1, spec2)
    if basis == "eigen":
        return np.diag(p).astype(complex)
    if basis != "bare":
        raise ValueError(f"basis must be 'bare' or 'eigen', got {basis!r}")
    U = es.vectors
    rho = U @ np.diag(p) @ U.conj().T
    return 0.5 * (rho + rho.conj().T)


def gibbs_state(h: np.ndarray, temperature: float) -> np.ndarray:
    w, U = np.linalg.eigh(h)
    x = np.exp(-(w - w.min()) / temperature)
    return (U * (x / x.sum())) @ U.conj().T


@dataclass(frozen=True)
class FluxResult:
    value: float
    residual: float
    steady: bool


def flux(L_j: np.ndarray, rho_ss: np.ndarray, H: np.ndarray, L_total: Optional[np.ndarray] = None) -> FluxResult:
    """Energy current Tr[L_j(rho) H] from bath j into the system.

    With ``L_total`` the stationarity residual ||L_total rho|| is checked and a
    warning is issued above 1e-8.
    """
    if isinstance(H, TwoQubitHamiltonian):
        H = H.matrix()
    value = float(np.trace(apply(L_j, rho_ss) @ H).real)
    residual = 0.0
    if L_total is not None:
        residual = float(np.linalg.norm(apply(L_total, rho_ss)))
    steady = residual <= 1e-8
    if not steady:
        warnings.warn(f"state is not stationary: residual {residual:.3e}", RuntimeWarning)
    return FluxResult(value, residual, steady)


__all__ = [
    "EigenStructure",
    "FluxResult",
    "TwoQubitHamiltonian",
    "apply",
    "bath_dissipator",
    "build_common_bath_liouvillian",
    "build_two_bath_liouvillian",
    "check_density",
    "commutator_super",
    "density_to_pauli",
    "dissipator",
    "eigen_structure",
    "equilibrium_steady_state",
    "evolve_rk4",
    "flux",
    "gibbs_state",
    "neq_populations",
    "neq_steady_state_closed_form",
    "null_space",
    "single_qubit_generator",
    "steady_state_nullspace",
    "trace_defect",
    "transient_evolution",
    "transient_rates",
    "transition_ops",
]
