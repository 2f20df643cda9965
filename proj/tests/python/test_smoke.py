import cmath
import math

import pytest

import qhedge as qh


def test_psi_closed_forms():
    po = qh.poisson(3.0)
    assert po.tag() == "poisson"
    assert po.is_levy()
    assert abs(po.psi(1.0, math.pi) - (-6.0)) < 1e-14
    assert abs(po.psi_d1(1.0, 0.0) - 3j) < 1e-14
    assert abs(po.psi_d2(1.0, 0.0) - (-3.0)) < 1e-14

    vg = qh.vg(2.0, 1.0, 1.0, 0.0)
    assert abs(vg.psi_d1(1.0, 0.0) - 0.5j) < 1e-14
    assert abs(vg.psi_d2(1.0, 0.0) - (-0.75)) < 1e-14

    nig = qh.nig(2.0, 1.0, 1.0, 0.0)
    assert abs(nig.psi(1.0, 0.0)) < 1e-14


def test_structure_condition():
    sc = qh.check_sc(qh.vg(2.0, 1.0, 1.0, 0.0), 1.0)
    assert sc.satisfied
    assert abs(sc.alpha(0.5) - 2.0 / 3.0) < 1e-14
    assert abs(sc.K_T - 1.0 / 3.0) < 1e-14


def test_payoffs():
    mu = qh.atom_payoff([(1.0, 0.5), (-1.0, 0.5)])
    assert mu.hermitian()
    assert abs(qh.fourier_eval(mu, 0.7) - cmath.cos(0.7)) < 1e-14

    sq = qh.self_quanto_put(1.0)
    x = -0.5
    exact = math.exp(x) * (1.0 - math.exp(x))
    assert abs(qh.fourier_eval(sq, x).real - exact) < 1e-3


def test_operators_and_decompositions():
    ctx = qh.OperatorContext(qh.vg(2.0, 1.0, 1.0, 0.0), 1.0)
    mu = qh.atom_payoff([(1.0, 0.5), (-1.0, 0.5)])
    assert abs(qh.epsilon(ctx, 1.0, 1.3) - 1.0) < 1e-14  # at t = T
    assert abs(qh.kernel_e(ctx, mu, 1.0, 0.3) - cmath.cos(0.3)) < 1e-12

    dec = qh.fs(ctx, mu)
    assert abs(dec.H0 - 0.9015198939494568) < 1e-12
    kwd = qh.kw(ctx, mu)
    assert abs(kwd.V(0.0, 0.0) - kwd.V0) < 1e-14


def test_variance_error_regression():
    ctx = qh.OperatorContext(qh.vg(2.0, 1.0, 1.0, 0.0), 1.0)
    mu = qh.atom_payoff([(1.0, 0.5), (-1.0, 0.5)])
    j0, imag_residual, evals = qh.variance_error(ctx, mu)
    assert abs(j0 - 0.056460859396086707) < 1e-12
    assert imag_residual < 1e-12
    assert evals > 0


def test_zero_error_families():
    mu = qh.atom_payoff([(1.0, 0.5), (-1.0, 0.5)])
    ctx = qh.OperatorContext(qh.poisson(1.0), 1.0)
    j0, _, _ = qh.variance_error(ctx, mu)
    assert j0 < 1e-12

    g = qh.brownian([0.0, 1.0], [0.0, 0.1], [0.0, 1.0], [0.0, 1.0])
    j0, _, _ = qh.variance_error(qh.OperatorContext(g, 1.0), mu)
    assert j0 < 1e-12


def test_backtest_runs():
    ctx = qh.OperatorContext(qh.vg(2.0, 1.0, 1.0, 0.0), 1.0)
    mu = qh.atom_payoff([(1.0, 0.5), (-1.0, 0.5)])
    dec = qh.fs(ctx, mu)
    j0 = qh.variance_error(ctx, mu)[0]
    rep = qh.backtest(dec, strategy="vo-feedback", paths=2000, steps=50,
                      seed=4, analytic_j0=j0)
    assert rep["n_paths"] == 2000
    assert 0.2 * j0 < rep["realized_mse"] < 5.0 * j0
    assert rep["se"] > 0.0


def test_errors_are_mapped():
    with pytest.raises(qh.Error):
        qh.nig(1.0, 2.0, 1.0, 0.0)  # needs theta > |beta|
    with pytest.raises(qh.TruncationTooTight):
        qh.self_quanto_put(1.0, truncation=20.0)
