"""
Two-qubit states: Pauli-coefficient tensors and validated 4x4 density
matrices.

Pauli coefficients are normalized as rho_ij = Tr(rho sigma_i (x) sigma_j) / 4
so that rho = sum_ij rho_ij sigma_i (x) sigma_j and rho_00 = 1/4.
Qubit A is the left tensor factor. sigma_3 = diag(1, -1), so the first
computational basis vector is the excited level of H = (w/2) sigma_3.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

SIGMA = np.array(
    [
        [[1, 0], [0, 1]],
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)

# PAULI_BASIS[i, j] = sigma_i (x) sigma_j
PAULI_BASIS = np.einsum("iab,jcd->ijacbd", SIGMA, SIGMA).reshape(4, 4, 4, 4)

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10


@dataclass(frozen=True)
class PauliCoeffs:
    rho: np.ndarray

    def __post_init__(self):
        r = np.asarray(self.rho, dtype=float)
        if r.shape != (4, 4):
            raise ValidationError(f"Pauli coefficients must be 4x4, got {r.shape}")
        if abs(r[0, 0] - 0.25) > TRACE_TOL:
            raise ValidationError(f"rho_00 must be 1/4, got {r[0, 0]}")
        r = r.copy()
        r.setflags(write=False)
        object.__setattr__(self, "rho", r)

    @property
    def bloch(self) -> np.ndarray:
        """Coefficients in the 1/4-prefactored convention: 4 * rho_ij."""
        return 4.0 * self.rho

    @property
    def tau_star(self) -> float:
        """Sum of the diagonal correlation coefficients sum_i 4 rho_ii, i = 1..3."""
        return float(4.0 * np.trace(self.rho[1:, 1:]))

    def to_density(self) -> np.ndarray:
        return pauli_to_density(self)


def check_density(m, tol_psd: float = PSD_TOL) -> np.ndarray:
    """Return ``m`` as a complex array after checking it is a density matrix."""
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValidationError(f"density matrix must be square, got {m.shape}")
    herm = np.max(np.abs(m - m.conj().T))
    if herm > HERMITIAN_TOL:
        raise ValidationError(f"not Hermitian: max |m - m^dag| = {herm:.3e}")
    tr = np.trace(m).real
    if abs(tr - 1.0) > TRACE_TOL:
        raise ValidationError(f"trace is {tr!r}, expected 1")
    lo = np.linalg.eigvalsh(m).min()
    if lo < -tol_psd:
        raise ValidationError(f"not positive semidefinite: min eigenvalue {lo:.3e}")
    return m


def validity_report(m) -> dict:
    """Hermiticity defect, trace defect and smallest eigenvalue of ``m``."""
    m = np.asarray(m, dtype=complex)
    return {
        "hermitian_err": float(np.max(np.abs(m - m.conj().T))),
        "trace_err": float(abs(np.trace(m) - 1.0)),
        "min_eig": float(np.linalg.eigvalsh((m + m.conj().T) / 2).min()),
    }


def is_valid_density(m) -> bool:
    r = validity_report(m)
    return (
        r["hermitian_err"] <= HERMITIAN_TOL
        and r["trace_err"] <= TRACE_TOL
        and r["min_eig"] >= -PSD_TOL
    )


def pauli_to_density(p: PauliCoeffs) -> np.ndarray:
    return np.einsum("ij,ijab->ab", p.rho, PAULI_BASIS)


def density_to_pauli(m) -> PauliCoeffs:
    m = check_density(m, tol_psd=np.inf)
    coeffs = np.einsum("ab,ijba->ij", m, PAULI_BASIS).real / 4.0
    coeffs[0, 0] = 0.25
    return PauliCoeffs(coeffs)


def partial_trace(m, keep: int) -> np.ndarray:
    """Reduced 2x2 state of qubit ``keep`` (0 = A, 1 = B)."""
    t = np.asarray(m).reshape(2, 2, 2, 2)
    if keep == 0:
        return np.einsum("ajbj->ab", t)
    if keep == 1:
        return np.einsum("jajb->ab", t)
    raise ValueError("keep must be 0 or 1")


def ket(*amps) -> np.ndarray:
    v = np.asarray(amps, dtype=complex)
    return v / np.linalg.norm(v)


def projector(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    return np.outer(v, v.conj())


def bell_phi_plus() -> np.ndarray:
    """(|00> + |11>)/sqrt(2) as a density matrix."""
    return projector(ket(1, 0, 0, 1))


def product_state(a, b) -> np.ndarray:
    """rho_a (x) rho_b for Bloch vectors a, b of the two qubits."""
    ra = 0.5 * (SIGMA[0] + np.einsum("i,iab->ab", np.asarray(a, float), SIGMA[1:]))
    rb = 0.5 * (SIGMA[0] + np.einsum("i,iab->ab", np.asarray(b, float), SIGMA[1:]))
    return np.kron(ra, rb)


def clip_spectrum(m, tol: float = PSD_TOL) -> np.ndarray:
    """Eigenvalues of Hermitian ``m`` with [-tol, 0) clipped to 0, renormalized.

    Raises ValidationError for eigenvalues below ``-tol``.
    """
    w = np.linalg.eigvalsh(np.asarray(m))
    if w.min() < -tol:
        raise ValidationError(f"negative eigenvalue {w.min():.3e} below -{tol:g}")
    w = np.clip(w, 0.0, None)
    return w / w.sum()
