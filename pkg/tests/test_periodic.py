import numpy as np
import pytest

from pipewave import (BoundaryData, ConvergenceError, FrictionSpec, GasParams,
                      PeriodicField, RegimeError, c1_norm_estimate, linearized_sweep,
                      solve_periodic, subsonic_check)

P = GasParams()
SQRT2 = np.sqrt(2.0)


def bd_eps(eps):
    return BoundaryData.from_terms(eps, [(1, 0.0, 1.0)], [(1, 1.0, 0.0)], P.P)


SPEC = FrictionSpec.constant(0.5, P)


def test_zero_data_zero_fixed_point():
    bd = BoundaryData.zero(P.P)
    field, rep = solve_periodic(bd, SPEC, P, (16, 16))
    assert rep.iterations == 1
    assert rep.converged
    assert field.c0_norm() == 0.0


def test_sweep_boundary_columns_exact():
    bd = bd_eps(0.01)
    prev = PeriodicField.zeros(32, 33, P.P, P.L)
    new = linearized_sweep(prev, bd, SPEC, P)
    tn = new.t_nodes()
    assert np.array_equal(new.data[:, -1, 0], np.asarray(bd.phi1b(tn)))
    assert np.array_equal(new.data[:, 0, 1], np.asarray(bd.phi2b(tn)))


def test_sweep_pure_transport_closed_form():
    bd = bd_eps(0.01)
    spec0 = FrictionSpec.constant(0.0, P)
    prev = PeriodicField.zeros(64, 65, P.P, P.L)
    swept = linearized_sweep(prev, bd, spec0, P)
    t = swept.t_nodes()[:, None]
    x = swept.x_nodes()[None, :]
    exact1 = bd.phi1b(t - (P.L - x) / SQRT2)
    exact2 = bd.phi2b(t - x / SQRT2)
    assert np.max(np.abs(swept.data[:, :, 0] - exact1)) <= 1e-10
    assert np.max(np.abs(swept.data[:, :, 1] - exact2)) <= 1e-10


def test_c1_norm_estimate_cases():
    zero = PeriodicField.zeros(16, 16, P.P, P.L)
    assert c1_norm_estimate(zero) == 0.0
    const = PeriodicField(np.full((16, 16, 2), 0.3), P.P, P.L)
    assert c1_norm_estimate(const) == pytest.approx(0.3, abs=1e-15)
    wave = PeriodicField.from_function(
        lambda t, x: 0.01 * np.sin(2 * np.pi * t), lambda t, x: 0.0 * t,
        256, 16, P.P, P.L)
    assert c1_norm_estimate(wave) == pytest.approx(0.01 * 2 * np.pi, rel=1e-2)


def test_solve_periodic_small_grid():
    field, rep = solve_periodic(bd_eps(0.01), SPEC, P, (64, 64))
    assert rep.converged
    assert rep.iterations <= 20
    assert all(k < 1.0 for k in rep.kappa_hats)
    # geometric tail: successive differences eventually strictly decrease
    tail = rep.sup_diffs[1:]
    assert all(a > b for a, b in zip(tail, tail[1:]))
    assert subsonic_check(field, P).ok
    assert rep.T0 == pytest.approx(P.L * rep.nu_max)
    # periodicity by representation: querying one period later hits the same nodes
    tn = field.t_nodes()
    a1, a2 = field.interpolate(tn, 0.5)
    b1, b2 = field.interpolate(tn + P.P, 0.5)
    assert np.array_equal(a1, b1) and np.array_equal(a2, b2)


def test_fixed_point_residual():
    tol = 1e-10
    field, rep = solve_periodic(bd_eps(0.01), SPEC, P, (64, 64), tol_fp=tol)
    again = linearized_sweep(field, bd_eps(0.01), SPEC, P)
    assert float(np.max(np.abs(again.data - field.data))) <= 2.0 * tol


def test_amplitude_linearity():
    n1 = solve_periodic(bd_eps(1e-3), SPEC, P, (64, 64))[1].c0_norm
    n2 = solve_periodic(bd_eps(5e-4), SPEC, P, (64, 64))[1].c0_norm
    assert 0.45 <= n2 / n1 <= 0.55


def test_gross_amplitude_fails_cleanly():
    with pytest.raises((RegimeError, ConvergenceError)):
        solve_periodic(bd_eps(10.0), SPEC, P, (32, 32))


def test_max_iter_exhaustion_carries_report():
    with pytest.raises(ConvergenceError) as exc:
        solve_periodic(bd_eps(0.01), SPEC, P, (32, 32), tol_fp=1e-10, max_iter=2)
    rep = exc.value.report
    assert rep is not None
    assert not rep.converged
    assert rep.iterations == 2


def test_grid_preconditions():
    from pipewave import DomainError
    with pytest.raises(DomainError):
        solve_periodic(bd_eps(0.01), SPEC, P, (8, 64))
    with pytest.raises(DomainError):
        solve_periodic(bd_eps(0.01), SPEC, P, (64, 64), tol_fp=-1.0)
