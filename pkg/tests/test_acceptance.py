"""Acceptance suite: one test per criterion, printed as a PASS line each.

Run with `pytest tests/test_acceptance.py -v -s`.  The periodic fields at the
two working grids are session fixtures shared by the criteria that need them;
their wall times are measured where a criterion constrains runtime.
"""

import time

import numpy as np
import pytest

from pipewave import (DIRICHLET, BoundaryData, BoundaryMode, FrictionSpec, GasParams,
                      IbvpState, PeriodicField, PhysState, eigenvalues, from_riemann,
                      linearized_sweep, make_compatible_perturbation, run_ibvp,
                      run_oracle, solve_periodic, step_ibvp, subsonic_check,
                      to_riemann)
from pipewave.fvm import compare_fields
from pipewave.stability import closure_residual, run_stability_experiment

EPS = 0.01
PARAMS = GasParams(gamma=2.0, alpha=1.0, rho_bar=1.0, L=1.0, P=1.0)
SPEC = FrictionSpec.constant(0.5, PARAMS)


def bd_eps(eps):
    return BoundaryData.from_terms(eps, [(1, 0.0, 1.0)], [(1, 1.0, 0.0)], PARAMS.P)


BD = bd_eps(EPS)


@pytest.fixture(scope="module")
def phi256():
    solve_periodic(BD, SPEC, PARAMS, (16, 16))  # warm the jit, outside the clock
    t0 = time.perf_counter()
    field, report = solve_periodic(BD, SPEC, PARAMS, (256, 256), tol_fp=1e-10)
    elapsed = time.perf_counter() - t0
    return field, report, elapsed


@pytest.fixture(scope="module")
def phi512():
    field, report = solve_periodic(BD, SPEC, PARAMS, (512, 512), tol_fp=1e-10)
    return field, report


@pytest.fixture(scope="module")
def stab512(phi512):
    field, report = phi512
    t0 = time.perf_counter()
    srep, traj = run_stability_experiment(BD, SPEC, PARAMS, (512, 512),
                                          amplitude=EPS / 2.0, K=8,
                                          phiP=field, solver_report=report)
    elapsed = time.perf_counter() - t0
    return srep, traj, elapsed


@pytest.fixture(scope="module")
def oracle_runs(phi512):
    field, report = phi512
    t_settle = 6.0 * report.T0
    out = {}
    for n in (128, 256, 512):
        cells = run_oracle(BD, SPEC, PARAMS, n, t_settle)
        ref1, ref2 = field.interpolate(np.full(n, cells.t), cells.centers())
        rep = compare_fields(cells.centers(), np.stack([ref1, ref2], axis=-1),
                             cells, PARAMS)
        out[n] = (cells, rep.linf_max)
    return out


def test_criterion_01_transforms():
    t0 = time.perf_counter()
    rng = np.random.default_rng(42)
    rho = rng.uniform(0.3, 3.0, size=10_000)
    w = rng.uniform(-0.9, 0.9, size=10_000)
    u = w * np.asarray(PARAMS.sound_speed(rho))
    worst_rt = 0.0
    worst_eig = 0.0
    for i in range(10_000):
        r = to_riemann(PhysState(rho[i], u[i]), PARAMS)
        s = from_riemann(r, PARAMS)
        worst_rt = max(worst_rt, abs(s.rho - rho[i]) / rho[i],
                       abs(s.u - u[i]) / max(1.0, abs(u[i])))
        if i % 50 == 0:
            e = eigenvalues(r, PARAMS)
            c = float(PARAMS.sound_speed(rho[i]))
            worst_eig = max(worst_eig, abs(e.lambda1 - (u[i] - c)),
                            abs(e.lambda2 - (u[i] + c)))
    elapsed = time.perf_counter() - t0
    assert worst_rt <= 1e-12
    assert worst_eig <= 1e-12
    assert elapsed < 1.0
    print(f"\nCRITERION 1 PASS: 1e4 round trips, max rel err {worst_rt:.2e}, "
          f"eig err {worst_eig:.2e}, {elapsed:.2f}s")


def test_criterion_02_existence(phi256):
    field, report, elapsed = phi256
    assert report.converged
    assert report.iterations <= 50
    assert report.sup_diffs[-1] <= 1e-10
    assert all(k < 1.0 for k in report.kappa_hats)
    assert elapsed < 60.0
    # exact P-periodicity by representation: one period later lands on the
    # same nodes (dyadic grid, so t + P is exactly representable)
    tn = field.t_nodes()
    xn = field.x_nodes()
    a1, a2 = field.interpolate(tn[:, None], xn[None, :])
    b1, b2 = field.interpolate(tn[:, None] + PARAMS.P, xn[None, :])
    assert np.array_equal(a1, b1) and np.array_equal(a2, b2)
    assert np.array_equal(a1, field.data[:, :, 0])
    sub = subsonic_check(field, PARAMS)
    assert sub.ok
    print(f"\nCRITERION 2 PASS: {report.iterations} sweeps, "
          f"final diff {report.sup_diffs[-1]:.2e}, kappa max "
          f"{max(report.kappa_hats):.3f}, {elapsed:.1f}s")


def test_criterion_03_contraction_scaling(phi256):
    _, report_1em2, _ = phi256
    kappas = [report_1em2.late_kappa()]
    for eps in (5e-3, 2.5e-3):
        _, rep = solve_periodic(bd_eps(eps), SPEC, PARAMS, (256, 256))
        kappas.append(rep.late_kappa())
    assert kappas[1] <= kappas[0] * 1.10
    assert kappas[2] <= kappas[1] * 1.10
    print(f"\nCRITERION 3 PASS: late kappa ladder {[round(k, 5) for k in kappas]}")


def test_criterion_04_amplitude_linearity():
    norms = []
    for eps in (1e-3, 5e-4):
        _, rep = solve_periodic(bd_eps(eps), SPEC, PARAMS, (256, 256))
        norms.append(rep.c0_norm)
    ratio = norms[1] / norms[0]
    assert 0.45 <= ratio <= 0.55
    print(f"\nCRITERION 4 PASS: halving eps scaled the C0 norm by {ratio:.5f}")


def test_criterion_05_orbit_closure(phi256, phi512):
    f256, rep256, _ = phi256
    f512, rep512 = phi512
    c256 = closure_residual(f256, BD, SPEC, PARAMS)
    c512 = closure_residual(f512, BD, SPEC, PARAMS)
    assert c256 <= 0.1 * rep256.c0_norm  # returns to within a small multiple of h
    order = float(np.log2(c256 / c512))
    assert order >= 0.7
    assert order <= 1.38  # halving within +-30%
    print(f"\nCRITERION 5 PASS: closure {c256:.3e} -> {c512:.3e}, order {order:.2f}")


def test_criterion_06_stability(stab512):
    srep, traj, elapsed = stab512
    assert elapsed < 120.0
    assert srep.status in ("ok", "bounded")
    assert srep.xi_hat is not None and srep.xi_hat < 1.0
    assert srep.monotone_fraction >= 0.8
    assert srep.distances[-1] <= srep.distances[0] / 5.0
    assert srep.passed
    print(f"\nCRITERION 6 PASS: xi_hat {srep.xi_hat:.4f} ({srep.status}), "
          f"d_0 {srep.distances[0]:.2e} -> d_K {srep.distances[-1]:.2e}, "
          f"monotone {srep.monotone_fraction:.2f}, {elapsed:.1f}s")


def test_criterion_07_uniqueness_shadow(phi512):
    field, report = phi512
    T0 = report.T0
    K = 8
    i1 = make_compatible_perturbation(field.data[0], EPS / 2.0, PARAMS)
    i2 = make_compatible_perturbation(field.data[0], -EPS / 4.0, PARAMS)
    t1 = run_ibvp(i1, BD, DIRICHLET, SPEC, PARAMS, T=K * T0, snapshot_every=T0)
    t2 = run_ibvp(i2, BD, DIRICHLET, SPEC, PARAMS, T=K * T0, snapshot_every=T0)
    d = np.array([float(np.max(np.abs(t1.at_time(k * T0) - t2.at_time(k * T0))))
                  for k in range(K + 1)])
    assert d[1] / d[0] < 1.0
    assert d[2] / d[1] < 1.0
    assert d[-1] <= d[0] / 5.0
    print(f"\nCRITERION 7 PASS: inter-trajectory distances "
          f"{d[0]:.2e} -> {d[1]:.2e} -> {d[2]:.2e}, d_K/d_0 {d[-1] / d[0]:.2e}")


def test_criterion_08_oracle_equivalence(oracle_runs):
    errs = {n: linf for n, (cells, linf) in oracle_runs.items()}
    assert errs[512] <= 0.02 * EPS
    ns = np.array(sorted(errs))
    slope = np.polyfit(np.log2(ns), np.log2([errs[n] for n in ns]), 1)[0]
    order = -slope
    assert order >= 0.8
    print(f"\nCRITERION 8 PASS: oracle L_inf {errs[128]:.2e} / {errs[256]:.2e} / "
          f"{errs[512]:.2e} (budget {0.02 * EPS:.1e}), order {order:.2f}")


def test_criterion_09_degenerate_fixtures():
    # zero data: identically zero in one sweep
    zero_bd = BoundaryData.zero(PARAMS.P)
    field, rep = solve_periodic(zero_bd, SPEC, PARAMS, (16, 16))
    assert rep.iterations == 1 and field.c0_norm() == 0.0

    # beta = 0: first sweep equals exact transport of the boundary data
    spec0 = FrictionSpec.constant(0.0, PARAMS)
    prev = PeriodicField.zeros(64, 65, PARAMS.P, PARAMS.L)
    swept = linearized_sweep(prev, BD, spec0, PARAMS)
    t = swept.t_nodes()[:, None]
    x = swept.x_nodes()[None, :]
    nu = 1.0 / np.sqrt(2.0)
    err1 = np.max(np.abs(swept.data[:, :, 0] - BD.phi1b(t - (PARAMS.L - x) * nu)))
    err2 = np.max(np.abs(swept.data[:, :, 1] - BD.phi2b(t - x * nu)))
    assert err1 <= 1e-10 and err2 <= 1e-10

    # reflective closure with K1 = K2 = 0 is bit-identical to dirichlet
    refl = BoundaryMode("reflective", 0.0, 0.0)
    sd = IbvpState(0.0, make_compatible_perturbation(np.zeros((33, 2)), 0.004, PARAMS))
    sr = IbvpState(0.0, sd.phi.copy())
    dt = 0.9 * (PARAMS.L / 32) / 1.5
    for _ in range(50):
        sd = step_ibvp(sd, dt, BD, DIRICHLET, SPEC, PARAMS)
        sr = step_ibvp(sr, dt, BD, refl, SPEC, PARAMS)
    assert sd.phi.tobytes() == sr.phi.tobytes()
    print(f"\nCRITERION 9 PASS: zero fixture exact, transport err "
          f"{max(err1, err2):.2e}, reflective K=0 bit-identical")


def test_criterion_10_subsonic_invariant(phi256, phi512, stab512, oracle_runs):
    from pipewave.fvm import cells_to_phi
    checked = 0
    for field in (phi256[0], phi512[0]):
        assert subsonic_check(field, PARAMS).ok
        checked += 1
    _, traj, _ = stab512
    for snap in traj.states:
        assert subsonic_check(snap, PARAMS).ok
        checked += 1
    for cells, _linf in oracle_runs.values():
        assert subsonic_check(cells_to_phi(cells, PARAMS), PARAMS).ok
        checked += 1
    print(f"\nCRITERION 10 PASS: {checked} emitted fields/snapshots, "
          f"all strictly subsonic")
