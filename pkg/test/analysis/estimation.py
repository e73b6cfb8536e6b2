from pytest import raises, mark
import numpy as np
from tmspy.dephasing import (
    DephasingCurve, FilterSpec, g2_closed_form, g2_curve, nk_curve)
from tmspy.estimation import *
from tmspy.jpa import JpaParams, squeezing_level
from tmspy.utils import dumps, loads


def symmetric_pair(r, n):
    return JpaParams(r, n), JpaParams(r, n, np.pi)


def central_difference(fun, point, h=1e-6):
    point = np.array(point, dtype=float)
    columns = []
    for i in range(len(point)):
        step = np.zeros_like(point)
        step[i] = h * max(1, abs(point[i]))
        columns.append((fun(point + step) - fun(point - step)) / (2 * step[i]))
    return np.column_stack(columns)


@mark.parametrize("symmetric", [True, False])
@mark.parametrize("r, n", [(.3, .05), (.8, .2), (1.2, .4)])
def test_nk_jacobian(r, n, symmetric):
    omega = 1e6
    taus = np.linspace(0, .9 * np.pi / omega, 20)
    _, jacobian = nk_model_and_jacobian(taus, omega, r, n, symmetric)
    expected = central_difference(
        lambda p: nk_model_and_jacobian(taus, omega, *p, symmetric)[0],
        [r, n])
    assert np.allclose(jacobian, expected, rtol=1e-6, atol=1e-7)


def test_g2_jacobian():
    taus = np.linspace(0, 3e-6, 25)
    _, jacobian = g2_model_and_jacobian(taus, 2.5, 1.3e6)
    expected = central_difference(
        lambda p: g2_model_and_jacobian(taus, *p)[0], [2.5, 1.3e6])
    assert np.allclose(jacobian, expected, rtol=1e-6, atol=1e-7)


@mark.parametrize("r", [.3, .8, 1.2])
@mark.parametrize("n", [.1, .3])
def test_nk_recovery(r, n):
    filter = FilterSpec(1e6)
    taus = np.linspace(0, filter.first_zero, 40)
    curve = nk_curve(*symmetric_pair(r, n), filter, taus)
    result = fit_nk(curve, filter.omega)
    assert result.converged and result.symmetric
    assert abs(result.estimates['r'] / r - 1) < 1e-5
    assert abs(result.estimates['n'] / n - 1) < 1e-5
    assert result.fixed == {'omega': filter.omega}


@mark.parametrize("r", [.3, .8, 1.2])
def test_nk_recovery_without_noise(r):
    filter = FilterSpec(1e6)
    taus = np.linspace(0, filter.first_zero, 40)
    curve = nk_curve(*symmetric_pair(r, 0.), filter, taus)
    result = fit_nk(curve, filter.omega)
    assert abs(result.estimates['r'] - r) < 1e-4
    assert 0 <= result.estimates['n'] < 1e-4
    assert any(warning.startswith("Estimate of n is at its bound")
               for warning in result.warnings)


def test_nk_recovery_single_jpa():
    filter = FilterSpec(2e6)
    j1, j2 = JpaParams(.9, .1), JpaParams()
    curve = nk_curve(j1, j2, filter, np.linspace(0, filter.first_zero, 30))
    result = fit_nk(curve, filter.omega, symmetric=False)
    assert abs(result.estimates['r'] / .9 - 1) < 1e-5
    assert abs(result.estimates['n'] / .1 - 1) < 1e-5
    assert result.fixed == {'omega': filter.omega, 'r2': 0., 'n2': 0.}


def test_nk_first_lobe_only():
    filter = FilterSpec(1e6)
    taus = np.linspace(0, 2 * filter.first_zero, 40)
    curve = nk_curve(*symmetric_pair(.8, .1), filter, taus)
    assert fit_nk(curve, filter.omega).n_points == 20
    assert fit_nk(curve, filter.omega, first_lobe_only=False).n_points == 40


@mark.parametrize("r, omega", [(.3, 1e5), (1., 2.7e6), (1.5, 3e7)])
def test_g2_recovery(r, omega):
    filter = FilterSpec(omega)
    taus = np.linspace(0, 2 * filter.first_zero, 50)
    result = fit_g2(g2_curve(JpaParams(r, .05), filter, taus))
    assert abs(result.estimates['omega'] / omega - 1) < 1e-8
    amplitude = g2_closed_form(JpaParams(r, .05), filter, 0) - 1
    assert abs(result.estimates['amplitude'] / amplitude - 1) < 1e-8
    result = fit_g2(g2_curve(JpaParams(r, .05), filter, taus),
                    init={'omega': 1.1 * omega})
    assert abs(result.estimates['omega'] / omega - 1) < 1e-8


def test_g2_recovery_with_noise():
    filter = FilterSpec(2.7e6)
    taus = np.linspace(0, 2 * filter.first_zero, 60)
    curve = g2_curve(JpaParams(1.), filter, taus).with_noise(.01, seed=42)
    result = fit_g2(curve)
    assert result.converged
    assert abs(result.estimates['omega'] - filter.omega)\
        < 3 * result.stderr['omega']
    assert result.reduced_chi2 < 3


def test_fit_errors():
    taus = np.arange(6) * 1e-7
    with raises(DegenerateDataError):
        fit_g2(DephasingCurve("g2", taus, np.full(6, 1.5)))
    with raises(ValueError):
        fit_g2(DephasingCurve("g2", taus, [3, 2, 1, 0, 1, 2]))
    with raises(ValueError):
        fit_g2(DephasingCurve("g2", taus[:4], [3, 2, 1, 2]))
    with raises(ValueError):
        fit_g2(DephasingCurve("g2", taus, [3, 2, 1, 1, 1, 2], np.zeros(6)))
    with raises(ValueError):
        fit_g2(DephasingCurve("nk", taus, [3, 2, 1, 1, 1, 2]))
    with raises(ValueError):
        fit_g2(DephasingCurve("g2", taus, [3, 2, 1, 1, 1, 2]),
               init={'omega': 0})
    with raises(ValueError):
        fit_nk(DephasingCurve("nk", taus, [3, 2, 1, 1, 1, 2]), 0)
    with raises(TypeError):
        fit_nk([1, 2, 3], 1e6)


def test_levenberg_marquardt():
    x = np.linspace(0, 1, 10)

    def fun(theta):
        model = theta[0] * np.exp(theta[1] * x)
        jacobian = np.column_stack([model / theta[0], model * x])
        return model - 2 * np.exp(-x), jacobian

    state = levenberg_marquardt(fun, [1., 0.])
    assert state.converged and state.cost < 1e-12
    assert np.allclose(state.theta, [2, -1])
    stopped = levenberg_marquardt(fun, [1., 0.], max_iter=1)
    assert stopped.n_iterations == 1 and not stopped.converged
    assert stopped.cost < levenberg_marquardt(fun, [1., 0.], 0).cost
    with raises(FitError):
        levenberg_marquardt(lambda theta: ([np.nan], [[1.]]), [0.])


def test_ConvergenceError():
    filter = FilterSpec(1e6)
    taus = np.linspace(0, filter.first_zero, 20)
    result = fit_nk(nk_curve(*symmetric_pair(.8, .1), filter, taus),
                    filter.omega)
    error = ConvergenceError(result)
    assert isinstance(error, FitError) and error.result is result
    assert str(error) == "Fit did not converge after {} iterations.".format(
        result.n_iterations)


def test_FitResult():
    filter = FilterSpec(1e6)
    taus = np.linspace(0, filter.first_zero, 20)
    curve = nk_curve(*symmetric_pair(.8, .1), filter, taus)
    result = fit_nk(curve, filter.omega)
    assert result.names == ('r', 'n')
    assert set(result.stderr) == {'r', 'n'}
    assert np.allclose(result.evaluate(taus), curve.values, atol=1e-9)
    level = float(squeezing_level(JpaParams(.8, .1)))
    assert abs(result.squeezing_db - level) < 1e-4
    tree = result.to_tree()
    assert tree['factory'] == "estimation.FitResult"
    assert loads(dumps(result)).to_tree() == tree


def test_residual_report():
    filter = FilterSpec(1e6)
    taus = np.linspace(0, 2 * filter.first_zero, 30)
    curve = g2_curve(JpaParams(.7), filter, taus)
    result = fit_g2(curve)
    report = residual_report(curve, result)
    assert report.dof == 28 and report.chi2 < 1e-16
    report = residual_report(curve.with_noise(.1, seed=0), lambda t: 1 + t)
    assert report.dof == 30 and report.reduced_chi2 > 1
    with raises(ValueError):
        residual_report(curve, lambda t: t[:3])


def test_fits_in_other_time_units():
    scale, filter = 1e6, FilterSpec(2.7e6)
    taus = np.linspace(0, 2 * filter.first_zero, 60)
    curve = g2_curve(JpaParams(1.), filter, taus).with_noise(.01, seed=7)
    micro = DephasingCurve("g2", curve.taus * scale, curve.values,
                           curve.stderr)
    seconds = fit_g2(curve, init={'omega': 1.1 * filter.omega})
    rescaled = fit_g2(micro, init={'omega': 1.1 * filter.omega / scale})
    assert abs(rescaled.estimates['omega'] * scale
               / seconds.estimates['omega'] - 1) < 1e-7
    assert abs(rescaled.estimates['amplitude']
               - seconds.estimates['amplitude']) < 1e-7
    assert np.allclose(residual_report(micro, rescaled).residuals,
                       residual_report(curve, seconds).residuals, atol=1e-6)
    curve = nk_curve(*symmetric_pair(.8, .1), filter, taus)\
        .with_noise(.01, seed=7)
    micro = DephasingCurve("nk", curve.taus * scale, curve.values,
                           curve.stderr)
    seconds = fit_nk(curve, filter.omega)
    rescaled = fit_nk(micro, filter.omega / scale)
    assert seconds.n_points == rescaled.n_points == 30
    for name in ('r', 'n'):
        assert abs(rescaled.estimates[name] - seconds.estimates[name]) < 1e-7


def test_equal_weights_give_the_unweighted_fit():
    filter = FilterSpec(1e6)
    taus = np.linspace(0, filter.first_zero, 40)
    noisy = nk_curve(*symmetric_pair(.8, .1), filter, taus)\
        .with_noise(.01, seed=3)
    unweighted = fit_nk(DephasingCurve("nk", taus, noisy.values),
                        filter.omega)
    weighted = fit_nk(DephasingCurve("nk", taus, noisy.values,
                                     np.full(40, .05)), filter.omega)
    for name in ('r', 'n'):
        assert abs(weighted.estimates[name]
                   - unweighted.estimates[name]) < 1e-7
    assert abs(weighted.residual_norm * .05 ** 2
               - unweighted.residual_norm) < 1e-10


def test_chi2_of_noisy_data():
    filter = FilterSpec(2.7e6)
    taus = np.linspace(0, 3 * filter.first_zero, 200)
    curve = g2_curve(JpaParams(.8), filter, taus).with_noise(.02, seed=11)
    report = residual_report(curve, fit_g2(curve))
    assert report.dof == 198
    assert abs(report.chi2 - report.dof) < 3 * np.sqrt(2 * report.dof)


def test_nk_fit_of_a_flat_zero_curve():
    filter = FilterSpec(1e6)
    taus = np.linspace(0, filter.first_zero, 30)
    result = fit_nk(DephasingCurve("nk", taus, np.zeros(30)), filter.omega)
    assert result.converged
    assert 0 <= result.estimates['r'] < 1e-4
    assert 0 <= result.estimates['n'] < 1e-4
    assert any(warning.startswith("Estimate of r is at its bound")
               for warning in result.warnings)


def test_levenberg_marquardt_stall():
    state = levenberg_marquardt(
        lambda theta: ([1 + abs(theta[0])], [[-1e-8]]), [0.])
    assert state.stalled and not state.converged
    assert state.n_iterations == 1 and state.theta[0] == 0
    assert abs(state.gradient_norm - 1e-8) < 1e-20
    state = levenberg_marquardt(
        lambda theta: ([1 + abs(theta[0])], [[-1e-12]]), [0.])
    assert state.converged and not state.stalled
