"""Acceptance criteria 1-8.

Each test prints one ``criterion N: PASS|FAIL`` line with the measured figure
of merit, then asserts. Run ``pytest tests/test_acceptance.py -v`` to see the
lines inline with the test names.
"""
import math

import numpy as np
import pytest

from conftest import random_density, random_x_state
from kerrqc.bath import BathSpectrum, detailed_balance_ratio, dissipation_coeffs, wightman_fourier
from kerrqc.geometry import BlackHoleParams, DetectorPosition, local_acceleration
from kerrqc.gksl import (
    TAU_STAR_OBSERVABLE,
    TwoQubitHamiltonian,
    build_common_bath_liouvillian,
    build_two_bath_liouvillian,
    eigen_structure,
    equilibrium_steady_state,
    evolve_rk4,
    neq_populations,
    neq_steady_state_closed_form,
    rk4_step_matrix,
    single_qubit_generator,
    steady_state_nullspace,
    transient_evolution,
    transient_rates,
    transition_ops,
)
from kerrqc.measures import (
    concurrence,
    concurrence_xstate,
    correlation_report,
    discord_xstate,
    is_x_state,
    mutual_information,
)
from kerrqc.states import bell_phi_plus, density_to_pauli, product_state
from kerrqc.sweep import ScenarioConfig, run

OMEGA = 0.1
MU = 0.01
FACTOR = 1.01


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, f"criterion {n}: {detail}"

    return emit


@pytest.fixture(scope="module")
def default_sweeps():
    return {m: run(ScenarioConfig(model=m)) for m in ("equilibrium", "transient", "neq-steady")}


def sample_black_holes(n):
    """n non-extremal (M, a) points, half along each family."""
    half = n // 2
    pts = [(float(m), 10.0) for m in np.linspace(10.05, 50.0, half)]
    pts += [(10.01, float(a)) for a in np.linspace(0.1, 10.0, n - half)]
    return [BlackHoleParams(m, a) for m, a in pts]


def kappa_r(bh):
    return local_acceleration(bh, DetectorPosition(FACTOR))


# ---------------------------------------------------------------------------

def test_criterion_1_kms(report):
    omegas = np.logspace(-2, 0, 20)
    kappas = np.logspace(-1, 0.5, 20)
    kms_err = r_err = 0.0
    for kr in kappas:
        spec = BathSpectrum.unruh(kr)
        for w in omegas:
            ratio = wightman_fourier(spec, w) / wightman_fourier(spec, -w)
            ref = math.exp(2 * math.pi * w / kr)
            kms_err = max(kms_err, abs(ratio / ref - 1))
            tanh = math.tanh(math.pi * w / kr)
            c = dissipation_coeffs(spec, w, MU)
            r_err = max(r_err,
                        abs(detailed_balance_ratio(spec, w) - tanh) / tanh,
                        abs(c.B / c.A - tanh) / tanh,
                        abs(c.R - tanh) / tanh)
    ok = kms_err <= 1e-12 and r_err <= 1e-12
    report(1, ok, f"max KMS rel err {kms_err:.2e}, max R rel err {r_err:.2e} (tol 1e-12)")


def test_criterion_2_equilibrium_nullspace(report):
    worst = 0.0
    for bh in sample_black_holes(50):
        c = dissipation_coeffs(BathSpectrum.unruh(kappa_r(bh)), OMEGA, MU)
        rho_ns = steady_state_nullspace(build_common_bath_liouvillian(c), tau_star=-1.0)
        rho_cf = equilibrium_steady_state(c.R, -1.0).to_density()
        worst = max(worst, np.max(np.abs(rho_ns - rho_cf)))
    report(2, worst <= 1e-8, f"max entrywise deviation {worst:.2e} over 50 points (tol 1e-8)")


def test_criterion_3_transient_rk4(report):
    # The dissipator commutes with the free rotation, so RK4 integrates the
    # dissipator and the rotation is applied exactly: a direct RK4 at
    # mu^2 dt = 1e-3 would take Omega*dt = 1 rad steps.
    dtau = 1e-3 / MU**2
    n_steps, stride = 100_000, 50
    taus = np.arange(0, n_steps + 1, stride) * dtau
    p0 = density_to_pauli(bell_phi_plus())
    worst = 0.0
    for bh in sample_black_holes(20):
        c = dissipation_coeffs(BathSpectrum.unruh(kappa_r(bh)), OMEGA, MU)
        A, B = transient_rates(c)
        P = np.linalg.matrix_power(
            rk4_step_matrix(single_qubit_generator(c.gamma_plus, c.gamma_minus), dtau), stride
        )
        v = bell_phi_plus().reshape(-1).astype(complex)
        for tau in taus:
            if tau > 0:
                v = P @ v
            phase = np.exp(-0.5j * OMEGA * tau)
            U = np.kron(np.diag([phase, phase.conjugate()]), np.eye(2))
            ref = U @ v.reshape(4, 4) @ U.conj().T
            got = transient_evolution(p0, A, B, OMEGA, tau).to_density()
            worst = max(worst, np.max(np.abs(got - ref)))
    report(3, worst <= 1e-6,
           f"max deviation {worst:.2e} over 20 points, mu^2 t in [0,100], {len(taus)} samples (tol 1e-6)")


def test_criterion_4_two_bath(report):
    H = TwoQubitHamiltonian(OMEGA, OMEGA, 0.05 * OMEGA)
    es = eigen_structure(H)
    ops = transition_ops(es)
    grid = np.logspace(-2, 0, 8)
    pairs = [(k1, k2) for k1 in grid for k2 in grid if k1 != k2][:42]
    pairs += [(k, k) for k in grid]
    worst = 0.0
    for k1, k2 in pairs:
        b1, b2 = BathSpectrum.unruh(k1), BathSpectrum.unruh(k2)
        rho_ns = steady_state_nullspace(build_two_bath_liouvillian(es, ops, b1, b2, MU))
        worst = max(worst, np.max(np.abs(rho_ns - neq_steady_state_closed_form(es, b1, b2))))
    gibbs_err = 0.0
    for k in np.logspace(-2, 0, 20):
        b = BathSpectrum.unruh(k)
        w = np.exp(-(es.energies - es.energies.min()) / b.temperature)
        gibbs_err = max(gibbs_err, np.max(np.abs(neq_populations(es, b, b) - w / w.sum())))
    ok = worst <= 1e-8 and gibbs_err <= 1e-10
    report(4, ok, f"{len(pairs)} pairs: max deviation {worst:.2e} (tol 1e-8); "
                  f"Gibbs populations {gibbs_err:.2e} (tol 1e-10)")


def test_criterion_5_measures(report, rng):
    x_err = max(abs(concurrence_xstate(m) - concurrence(m))
                for m in (random_x_state(rng) for _ in range(200)))
    r = correlation_report(bell_phi_plus())
    bell = np.array([r.concurrence, r.coherence_l1, r.mutual_info, r.discord])
    bell_err = np.max(np.abs(bell - [1, 1, 2, 1]))
    prod_err = 0.0
    for _ in range(100):
        # diagonal product states: every measure vanishes, coherence included
        za, zb = rng.uniform(-1, 1, 2)
        m = product_state([0, 0, za], [0, 0, zb])
        r = correlation_report(m)
        prod_err = max(prod_err, r.concurrence, r.coherence_l1, abs(r.mutual_info), abs(r.discord))
        # generic product states: the correlation measures vanish
        a, b = (v * rng.uniform(0, 1) / np.linalg.norm(v) for v in rng.normal(size=(2, 3)))
        m = product_state(a, b)
        prod_err = max(prod_err, concurrence(m), abs(mutual_information(m)))
        if is_x_state(m):
            prod_err = max(prod_err, abs(discord_xstate(m).discord))
    ok = x_err <= 1e-10 and bell_err <= 1e-9 and prod_err <= 1e-10
    report(5, ok, f"X vs Wootters {x_err:.2e} (1e-10); Bell {bell_err:.2e} (1e-9); "
                  f"product {prod_err:.2e} (1e-10)")


def test_criterion_6_validity(report, default_sweeps):
    herm = trace = 0.0
    min_eig = math.inf
    n_states = n_unflagged_missing = 0
    for res in default_sweeps.values():
        for row in res.rows:
            if math.isnan(row["min_eig"]):
                n_unflagged_missing += row["flag"] == ""
                continue
            n_states += 1
            herm = max(herm, row["hermitian_err"])
            trace = max(trace, row["trace_err"])
            min_eig = min(min_eig, row["min_eig"])
    neq = default_sweeps["neq-steady"]
    flux_sum = max(abs(r["flux_sum"]) for r in neq.rows if not math.isnan(r["flux_sum"]))
    epr_vals = [r["effective_epr"] for r in neq.rows]
    undefined = [r for r in neq.rows if math.isnan(r["effective_epr"])]
    epr_min = min(v for v in epr_vals if not math.isnan(v))
    ok = (herm <= 1e-12 and trace <= 1e-12 and min_eig >= -1e-10 and n_unflagged_missing == 0
          and flux_sum <= 1e-10 and epr_min >= 0
          and all("zero_temperature" in r["flag"] for r in undefined))
    report(6, ok, f"{n_states} states: herm {herm:.1e}, trace {trace:.1e}, min eig {min_eig:.1e}; "
                  f"|I1+I2| {flux_sum:.1e}; min effective EPR {epr_min:.2e} "
                  f"({len(undefined)} zero-temperature rows flagged)")


def test_criterion_7_trends(report, default_sweeps):
    eq = default_sweeps["equilibrium"]
    rows = sorted(eq.rows, key=lambda r: r["kappa_r"])
    kr = np.array([r["kappa_r"] for r in rows])
    distinct = np.all(np.diff(kr) > 0)
    dec = all(np.all(np.diff([r[k] for r in rows]) < 0)
              for k in ("concurrence", "coherence_l1", "mutual_info", "discord"))
    inc = np.all(np.diff([r["vn_entropy"] for r in rows]) > 0)
    t1 = bool(distinct and dec and inc)

    mass = eq.column("concurrence", where={"family": "mass"})
    slope = np.sign(np.diff(mass))
    first_down = np.argmax(slope < 0) if np.any(slope < 0) else None
    t2 = first_down is not None and np.any(slope[first_down:] > 0)

    tr = default_sweeps["transient"]
    t3 = True
    for fam, m, a in {(r["family"], r["mass"], r["spin"]) for r in tr.rows}:
        series = [r for r in tr.rows if (r["family"], r["mass"], r["spin"]) == (fam, m, a)]
        e = np.array([r["epr"] for r in series])[1:]
        if np.any(np.isnan(e)):
            continue
        t3 &= bool(np.all(np.diff(e) <= 1e-15))

    neq = default_sweeps["neq-steady"]
    t4 = True
    worst_ratio = 0.0
    for m, a in sorted({(r["mass"], r["spin"]) for r in neq.rows}):
        series = [r for r in neq.rows if (r["mass"], r["spin"]) == (m, a)]
        f = np.array([r["flux_1"] for r in series])
        dr = np.array([r["delta_r"] for r in series])
        if series[0]["kappa_r1"] == 0:
            continue
        s = np.diff(f) / np.diff(dr)
        q = len(s) * 3 // 4
        ratio = np.max(np.abs(s[q:])) / np.max(s)
        worst_ratio = max(worst_ratio, ratio)
        t4 &= bool(np.all(s >= -1e-18) and ratio < 0.01)

    harvested = 0
    times = np.linspace(0, 100, 21) / MU**2
    rho0 = product_state([0, 0, 1], [0, 0, -1])  # |10>
    for bh in sample_black_holes(6):
        c = dissipation_coeffs(BathSpectrum.unruh(kappa_r(bh)), OMEGA, MU)
        traj = evolve_rk4(build_common_bath_liouvillian(c), rho0, times, step=1e-3 / MU**2)
        harvested += sum(concurrence(r) > 1e-6 for r in traj)
    t5 = harvested > 0 and concurrence(rho0) == 0

    ok = t1 and t2 and t3 and t4 and t5
    report(7, ok, f"(i) {t1} (ii) {t2} (iii) {t3} (iv) {t4} [tail/peak slope {worst_ratio:.1e}] "
                  f"(v) {t5} [{harvested} entangled samples from |10>]")


def test_criterion_8_tau_star(report, rng):
    times = np.linspace(0, 100, 101) / MU**2
    drift = 0.0
    starts = [product_state([0, 0, 1], [0, 0, -1]), bell_phi_plus()]
    starts += [random_density(rng) for _ in range(3)]
    for bh in sample_black_holes(6):
        c = dissipation_coeffs(BathSpectrum.unruh(kappa_r(bh)), OMEGA, MU)
        for n in ((0, 0, 1), (0.6, 0, 0.8)):
            L = build_common_bath_liouvillian(c, n)
            for rho0 in starts:
                traj = evolve_rk4(L, rho0, times, step=1e-3 / MU**2)
                tau = np.einsum("tij,ji->t", traj, TAU_STAR_OBSERVABLE).real
                drift = max(drift, np.max(np.abs(tau - tau[0])))
    report(8, drift <= 1e-8, f"max tau* drift {drift:.2e} over 60 trajectories (tol 1e-8)")
