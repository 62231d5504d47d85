"""
Correlation and entropy measures for two-qubit states.

Entropies are in bits. Discord uses the closed form for X states after local
rotations bring the correlation block to diagonal form; a brute-force
measurement-grid minimizer is kept for validation.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np
from scipy.special import xlogy

from .errors import DomainError, ValidationError
from .states import PAULI_BASIS, PSD_TOL, SIGMA, check_density, clip_spectrum, partial_trace

LN2 = math.log(2.0)
SIGMA_YY = np.kron(SIGMA[2], SIGMA[2])
X_MASK = np.array(
    [[1, 0, 0, 1], [0, 1, 1, 0], [0, 1, 1, 0], [1, 0, 0, 1]], dtype=bool
)
X_TOL = 1e-12
DISCORD_CLIP = 1e-9


def _entropy_of(p) -> float:
    p = np.asarray(p, dtype=float)
    return float(-np.sum(xlogy(p, p)) / LN2)


def vn_entropy(m) -> float:
    """Von Neumann entropy in bits of a 2x2 or 4x4 density matrix."""
    return max(_entropy_of(clip_spectrum(m)), 0.0) + 0.0


def l1_coherence(m, basis=None) -> float:
    """Sum of |off-diagonal| entries, in the computational basis or in the
    orthonormal basis given by the columns of ``basis``."""
    m = np.asarray(m)
    if basis is not None:
        basis = np.asarray(basis)
        m = basis.conj().T @ m @ basis
    return float(np.sum(np.abs(m)) - np.sum(np.abs(np.diag(m))))


EIG_FLOOR = 1e-14  # eigenvalues of rho below this are rounding noise


def concurrence(m) -> float:
    """Wootters concurrence from the spectrum of rho (sy x sy) rho* (sy x sy)."""
    m = np.asarray(m, dtype=complex)
    # lambda_i are the singular values of sqrt(rho) (sy x sy) sqrt(rho)*; this
    # avoids taking square roots of eigenvalues of the non-Hermitian rho rho~
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    w = np.where(w > EIG_FLOOR * max(w.max(), 1.0), w, 0.0)
    root = (v * np.sqrt(w)) @ v.conj().T
    lam = np.linalg.svd(root @ SIGMA_YY @ root.conj(), compute_uv=False)
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def is_x_state(m, tol: float = X_TOL) -> bool:
    return bool(np.max(np.abs(np.asarray(m)[~X_MASK]), initial=0.0) <= tol)


def concurrence_xstate(m) -> float:
    """Concurrence of an X state: twice the larger of
    |rho_14| - sqrt(rho_22 rho_33) and |rho_23| - sqrt(rho_11 rho_44)."""
    m = np.asarray(m, dtype=complex)
    if not is_x_state(m):
        raise ValidationError("state is not X-shaped in the computational basis")
    p = np.clip(np.diag(m).real, 0.0, None)
    outer = abs(m[0, 3]) - math.sqrt(p[1] * p[2])
    inner = abs(m[1, 2]) - math.sqrt(p[0] * p[3])
    return float(max(0.0, 2.0 * outer, 2.0 * inner))


def mutual_information(m) -> float:
    m = np.asarray(m, dtype=complex)
    out = vn_entropy(partial_trace(m, 0)) + vn_entropy(partial_trace(m, 1)) - vn_entropy(m)
    return max(out, 0.0)


# ---------------------------------------------------------------------------
# discord
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class XStateParams:
    """Bloch-diagonal form 1/4 (1 + a sz(x)1 + b 1(x)sz + sum_i C_i si(x)si)."""

    a: float
    b: float
    c: np.ndarray

    def density(self) -> np.ndarray:
        m = np.kron(SIGMA[0], SIGMA[0]) + self.a * np.kron(SIGMA[3], SIGMA[0])
        m = m + self.b * np.kron(SIGMA[0], SIGMA[3])
        for i in range(3):
            m = m + self.c[i] * np.kron(SIGMA[i + 1], SIGMA[i + 1])
        return m / 4.0


def _so2_svd(block: np.ndarray) -> np.ndarray:
    """Signed singular values of a 2x2 block under proper rotations."""
    u, s, vh = np.linalg.svd(block)
    sign = np.sign(np.linalg.det(u) * np.linalg.det(vh)) or 1.0
    return np.array([s[0], sign * s[1]])


def xstate_params(m, tol: float = 1e-10) -> XStateParams:
    """Reduce ``m`` to Bloch-diagonal form by rotations about z on each qubit.

    Requires both local Bloch vectors along z and no z-transverse mixing in
    the correlation tensor. The larger transverse correlation goes to C_1.
    """
    m = np.asarray(m, dtype=complex)
    t = np.einsum("ab,ijba->ij", m, PAULI_BASIS).real
    off = max(
        abs(t[0, 1]), abs(t[0, 2]), abs(t[1, 0]), abs(t[2, 0]),
        abs(t[1, 3]), abs(t[2, 3]), abs(t[3, 1]), abs(t[3, 2]),
    )
    if off > tol:
        raise ValidationError(
            f"correlation block not reducible to X form (off-axis entry {off:.2e})"
        )
    c1, c2 = _so2_svd(t[1:3, 1:3])
    return XStateParams(a=t[3, 0], b=t[0, 3], c=np.array([c1, c2, t[3, 3]]))


def _s1(a: float, b: float, c3: float) -> float:
    """Conditional entropy of A after measuring B along z."""
    terms = [
        (1 + a + b + c3, 2 * (1 + b)),
        (1 - a + b - c3, 2 * (1 + b)),
        (1 + a - b - c3, 2 * (1 - b)),
        (1 - a - b + c3, 2 * (1 - b)),
    ]
    out = 0.0
    for num, den in terms:
        num = max(num, 0.0)
        if num > 0:
            out -= num / 4 * math.log2(num / den)
    return out


def _f(t: float) -> float:
    t = min(max(t, 0.0), 1.0)
    return float(-(xlogy(1 - t, 1 - t) + xlogy(1 + t, 1 + t)) / (2 * LN2))


def _s2(a: float, c1: float) -> float:
    """Conditional entropy of A after measuring B in the transverse plane."""
    return 1.0 + _f(math.hypot(a, c1))


@dataclass(frozen=True)
class DiscordResult:
    discord: float
    classical_corr: float


def discord_xstate(m) -> DiscordResult:
    """Discord with measurement on qubit B, minimized over the z axis and the
    best transverse axis."""
    m = np.asarray(m, dtype=complex)
    return _discord(m, vn_entropy(partial_trace(m, 0)), mutual_information(m))


def _discord(m: np.ndarray, s_a: float, mi: float) -> DiscordResult:
    xs = xstate_params(m)
    c1 = max(abs(xs.c[0]), abs(xs.c[1]))
    cond = min(_s1(xs.a, xs.b, xs.c[2]), _s2(xs.a, c1))
    cc = s_a - cond
    q = mi - cc
    if q < 0:
        if q < -DISCORD_CLIP:
            raise ValidationError(f"negative discord {q:.3e}")
        q = 0.0
    return DiscordResult(discord=float(q), classical_corr=float(cc))


def fibonacci_sphere(n: int) -> np.ndarray:
    k = np.arange(n) + 0.5
    z = 1.0 - 2.0 * k / n
    phi = math.pi * (1 + 5**0.5) * k
    r = np.sqrt(1 - z * z)
    return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)


def discord_bruteforce(m, n_directions: int = 10_000) -> DiscordResult:
    """Discord minimized over projective measurements on B along a grid of
    directions. Independent of the X-state reduction."""
    m = np.asarray(m, dtype=complex)
    t = m.reshape(2, 2, 2, 2)
    best = np.inf
    for d in fibonacci_sphere(n_directions):
        proj = 0.5 * (SIGMA[0] + d[0] * SIGMA[1] + d[1] * SIGMA[2] + d[2] * SIGMA[3])
        cond = 0.0
        for P in (proj, SIGMA[0] - proj):
            # unnormalized conditional state of A: Tr_B[(1 x P) rho]
            sub = np.einsum("ajbk,kj->ab", t, P)
            p = sub.trace().real
            if p > 1e-15:
                cond += p * _entropy_of(np.clip(np.linalg.eigvalsh(sub / p), 0, None))
        best = min(best, cond)
    cc = vn_entropy(partial_trace(m, 0)) - best
    return DiscordResult(discord=mutual_information(m) - cc, classical_corr=cc)


# ---------------------------------------------------------------------------
# entropy production and rates
# ---------------------------------------------------------------------------

def relative_entropy(rho, sigma) -> float:
    """S(rho || sigma) in bits; +inf when supp(rho) is not inside supp(sigma)."""
    rho = np.asarray(rho, dtype=complex)
    sigma = np.asarray(sigma, dtype=complex)
    wr, ur = np.linalg.eigh(rho)
    ws, us = np.linalg.eigh(sigma)
    wr = np.clip(wr, 0.0, None)
    ws = np.clip(ws, 0.0, None)
    overlap = np.abs(ur.conj().T @ us) ** 2
    support = ws > PSD_TOL
    leak = overlap[:, ~support] @ np.ones((~support).sum())
    if np.any((wr > PSD_TOL) & (leak > 1e-10)):
        return math.inf
    log_s = np.where(support, np.log(np.where(support, ws, 1.0)), 0.0)
    cross = float(wr @ overlap @ log_s)
    return max((float(np.sum(xlogy(wr, wr))) - cross) / LN2, 0.0)


def entropy_production_bound(mi_initial: float, mi_final: float, tol: float = 1e-9) -> float:
    """Lower bound Delta I_{A:B} = I(t_i) - I(t_f) on the pair's entropy production."""
    if mi_initial < -tol or mi_final < -tol:
        raise DomainError("mutual information must be non-negative")
    bound = mi_initial - mi_final
    if bound < -tol:
        raise DomainError(f"negative entropy production bound {bound:.3e}")
    return max(bound, 0.0)


def epr(mi_series: Sequence[float], times: Sequence[float]) -> np.ndarray:
    """(I(0) - I(t)) / t along a series; 0 at t = 0."""
    mi = np.asarray(mi_series, dtype=float)
    t = np.asarray(times, dtype=float)
    if t[0] != 0 or np.any(np.diff(t) <= 0):
        raise DomainError("times must start at 0 and increase strictly")
    out = np.zeros_like(mi)
    out[1:] = (mi[0] - mi[1:]) / t[1:]
    return out


def decay_rate(qc0: float, qct: float, t: float) -> float:
    if not t > 0:
        raise DomainError(f"t must be positive, got {t}")
    return (qc0 - qct) / t


def effective_epr(flux: float, T1: float, T2: float) -> float:
    """flux * (1/T2 - 1/T1) with ``flux`` the current from bath 1 into the
    system; non-negative when heat runs from the hotter bath."""
    if not (T1 > 0 and T2 > 0):
        raise DomainError("temperatures must be positive")
    return flux * (1.0 / T2 - 1.0 / T1)


# ---------------------------------------------------------------------------
# report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CorrelationReport:
    concurrence: float
    coherence_l1: float
    mutual_info: float
    classical_corr: float
    discord: float
    vn_entropy: float
    entropy_A: float
    entropy_B: float

    def as_dict(self) -> dict:
        return asdict(self)


def correlation_report(m, coherence_basis=None) -> CorrelationReport:
    m = check_density(m)
    s_ab = vn_entropy(m)
    s_a = vn_entropy(partial_trace(m, 0))
    s_b = vn_entropy(partial_trace(m, 1))
    mi = max(s_a + s_b - s_ab, 0.0)
    d = _discord(m, s_a, mi)
    return CorrelationReport(
        concurrence=concurrence(m),
        coherence_l1=l1_coherence(m, coherence_basis),
        mutual_info=mi,
        classical_corr=d.classical_corr,
        discord=d.discord,
        vn_entropy=s_ab,
        entropy_A=s_a,
        entropy_B=s_b,
    )
