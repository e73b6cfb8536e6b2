# -*- coding: utf-8 -*-

"""
Nonlinear least-squares fits of dephasing curves: the filter rate
:math:`\\Omega` from :math:`g^{(2)}` traces and the squeezing factor and
noise photons from negativity kernel traces.

Both fits run a damped Gauss-Newton (Levenberg-Marquardt) iteration with
analytic Jacobians. Positivity of :math:`\\Omega`, :math:`r` and :math:`n` is
kept by reparameterization, :math:`\\Omega = e^\\theta` and
:math:`r = \\log(1 + e^\\theta)`, rather than by clipping.

Summary
-------

.. autosummary::
    :template: class.rst
    :nosignatures:
    :toctree:

    FitResult
    OptimizerState
    ResidualReport
    CurveError
    FitError
    ConvergenceError
    DegenerateDataError

.. admonition:: Functions

    .. autosummary::
        :template: function.rst
        :nosignatures:
        :toctree:

        levenberg_marquardt
        g2_model_and_jacobian
        nk_model_and_jacobian
        fit_g2
        fit_nk
        residual_report

Example
-------
>>> from tmspy.jpa import JpaParams
>>> from tmspy.dephasing import FilterSpec, g2_curve
>>> filter = FilterSpec(2.7e6)
>>> taus = numpy.linspace(0, 2 * numpy.pi / filter.omega, 50)
>>> result = fit_g2(g2_curve(JpaParams(1.), filter, taus))
>>> assert abs(result.estimates['omega'] / 2.7e6 - 1) < 1e-8
>>> result.converged
True
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable

import numpy
from scipy.special import expit

from tmspy import config, messages
from tmspy.dephasing import (
    DephasingCurve, nk_bracket, sinc, sinc_derivative)
from tmspy.jpa import JpaParams, squeezing_level
from tmspy.utils import assert_isinstance, factory_name

logger = logging.getLogger(__name__)


class CurveError(ValueError):
    """ When a curve breaks the preconditions of a fit. """


class FitError(RuntimeError):
    """ When a fit cannot produce estimates. """


class DegenerateDataError(FitError):
    """ When the data cannot identify the model parameters. """


class ConvergenceError(FitError):
    """
    When the optimizer runs out of iterations, with the partial result.

    Parameters:
        result : The :class:`FitResult` at the last iterate.
    """
    def __init__(self, result: FitResult):
        self.result = result
        super().__init__(messages.NOT_CONVERGED.format(result.n_iterations))


@dataclass(frozen=True)
class OptimizerState:
    """
    The last iterate of :func:`levenberg_marquardt`.

    Parameters:
        theta : The parameters.
        residuals : The residual vector at ``theta``.
        jacobian : Its Jacobian at ``theta``.
        n_iterations : The number of Gauss-Newton steps taken.
        converged : Whether a convergence criterion was met.
        gradient_norm : The infinity norm of :math:`J^T r` at ``theta``.
        stalled : Whether the damping diverged before convergence.
    """
    theta: numpy.ndarray
    residuals: numpy.ndarray
    jacobian: numpy.ndarray
    n_iterations: int
    converged: bool
    gradient_norm: float
    stalled: bool = False

    @property
    def cost(self) -> float:
        """ The residual sum of squares. """
        return float(self.residuals @ self.residuals)


def _evaluate(fun, theta):
    try:
        with numpy.errstate(all="ignore"):
            residuals, jacobian = fun(theta)
    except ValueError:
        return None, None, False
    residuals = numpy.asarray(residuals, dtype=float)
    jacobian = numpy.asarray(jacobian, dtype=float)
    finite = numpy.isfinite(residuals).all() and numpy.isfinite(jacobian).all()
    return residuals, jacobian, finite


def levenberg_marquardt(
        fun: Callable, theta0, max_iter: int = config.LM_MAX_ITER
        ) -> OptimizerState:
    """
    Minimise :math:`\\|r(\\theta)\\|^2` by damped Gauss-Newton steps
    :math:`(J^T J + \\lambda \\, \\mathrm{diag}\\, J^T J) \\delta = -J^T r`.

    The damping starts at ``LM_LAMBDA_INIT``, grows tenfold on a rejected
    step and shrinks tenfold on an accepted one. The iteration stops when
    the gradient is below ``LM_GTOL``, when the relative step is below
    ``LM_XTOL`` with the gradient below ``LM_STEP_GTOL``, or when the
    damping exceeds ``LM_LAMBDA_MAX``. The last case marks the state as
    stalled and only counts as convergence below ``LM_GTOL``.

    Parameters:
        fun : Maps parameters to residuals and their Jacobian.
        theta0 : The starting point.
        max_iter : The maximum number of steps.

    Example
    -------
    >>> x = numpy.linspace(0, 1, 10)
    >>> def fun(theta):
    ...     model = theta[0] * numpy.exp(theta[1] * x)
    ...     jacobian = numpy.column_stack([model / theta[0], model * x])
    ...     return model - 2 * numpy.exp(-x), jacobian
    >>> state = levenberg_marquardt(fun, [1., 0.])
    >>> assert state.converged and numpy.allclose(state.theta, [2, -1])
    """
    theta = numpy.array(theta0, dtype=float).reshape(-1)
    residuals, jacobian, finite = _evaluate(fun, theta)
    if not finite:
        raise FitError(messages.BAD_VALUE.format(theta))
    cost, damping = residuals @ residuals, config.LM_LAMBDA_INIT
    converged, stalled, iteration = False, False, 0
    while iteration < max_iter:
        gradient = jacobian.T @ residuals
        if numpy.abs(gradient).max() < config.LM_GTOL:
            converged = True
            break
        iteration += 1
        normal = jacobian.T @ jacobian
        scale = numpy.maximum(numpy.diag(normal), numpy.finfo(float).tiny)
        while True:
            step = numpy.linalg.lstsq(
                normal + damping * numpy.diag(scale), -gradient,
                rcond=None)[0]
            candidate = theta + step
            new_residuals, new_jacobian, finite = _evaluate(fun, candidate)
            new_cost = new_residuals @ new_residuals if finite else numpy.inf
            if new_cost <= cost:
                break
            damping *= config.LM_LAMBDA_UP
            if damping > config.LM_LAMBDA_MAX:
                break
        if damping > config.LM_LAMBDA_MAX:
            stalled = True
            converged = numpy.abs(gradient).max() < config.LM_GTOL
            logger.debug("damping exceeded at iteration %d", iteration)
            break
        small_step = numpy.linalg.norm(step) <= config.LM_XTOL * (
            numpy.linalg.norm(theta) + config.LM_XTOL)
        theta, residuals, jacobian, cost = (
            candidate, new_residuals, new_jacobian, new_cost)
        damping *= config.LM_LAMBDA_DOWN
        logger.debug("iteration %d: cost %.6g, damping %.3g",
                     iteration, cost, damping)
        if small_step:
            converged = numpy.abs(
                jacobian.T @ residuals).max() < config.LM_STEP_GTOL
            break
    gradient_norm = float(numpy.abs(jacobian.T @ residuals).max())
    return OptimizerState(
        theta, residuals, jacobian, iteration, bool(converged), gradient_norm,
        stalled)


def g2_model_and_jacobian(taus, amplitude: float, omega: float):
    """
    The model :math:`1 + A \\, \\sinc^2(\\Omega \\tau)` and its
    Jacobian with respect to :math:`(A, \\Omega)`.

    Example
    -------
    >>> values, jacobian = g2_model_and_jacobian([0.], 2., 1e6)
    >>> values
    array([3.])
    >>> assert (jacobian == [[1, 0]]).all()
    """
    taus = numpy.abs(numpy.asarray(taus, dtype=float).reshape(-1))
    x = omega * taus
    shape = sinc(x)
    values = 1 + amplitude * shape ** 2
    jacobian = numpy.column_stack([
        shape ** 2, 2 * amplitude * shape * sinc_derivative(x) * taus])
    return values, jacobian


def _nk_pair(r: float, n: float, symmetric: bool):
    if symmetric:
        return JpaParams(r, n), JpaParams(r, n, numpy.pi)
    return JpaParams(r, n), JpaParams()


def nk_model_and_jacobian(taus, omega: float, r: float, n: float,
                          symmetric: bool = True):
    """
    The negativity kernel at fixed :math:`\\Omega` and its Jacobian with
    respect to :math:`(r, n)`.

    Parameters:
        taus : The delays in seconds.
        omega : The filter rate in rad/s.
        r : The squeezing factor of each JPA, or of the only one.
        n : The noise photons of each JPA, or of the only one.
        symmetric : Whether both JPAs share ``(r, n)``, otherwise the
            second one is in the vacuum.

    Example
    -------
    >>> values, _ = nk_model_and_jacobian([0.], 1e6, .5, 0.)
    >>> assert numpy.allclose(values, numpy.expm1(1.) / 2)
    """
    taus = numpy.asarray(taus, dtype=float).reshape(-1)
    s = numpy.abs(sinc(omega * numpy.abs(taus)))
    j1, j2 = _nk_pair(r, n, symmetric)
    bracket = nk_bracket(j1, j2, s)
    n1, n2, total = j1.n, j2.n, j1.r + j2.r
    a1, a2 = 1 + 2 * n1, 1 + 2 * n2
    C, D = numpy.cosh(total) ** 2, numpy.sinh(2 * total)
    photons = n1 + n2 + 1
    shape = C * (1 + s ** 2) - D * s
    d_total = a1 * a2 * (
        numpy.sinh(2 * total) * (1 + s ** 2) - 2 * numpy.cosh(2 * total) * s)
    d_n1 = 2 * (n1 - n2) + 2 * a2 * shape - 2 * photons * s ** 2
    d_n2 = 2 * (n2 - n1) + 2 * a1 * shape - 2 * photons * s ** 2
    d_r, d_n = (2 * d_total, d_n1 + d_n2) if symmetric else (d_total, d_n1)
    values = -.5 + .5 / numpy.sqrt(bracket)
    factor = -.25 * bracket ** -1.5
    return values, numpy.column_stack([factor * d_r, factor * d_n])


def _softplus(u):
    return numpy.logaddexp(0., u)


def _inverse_softplus(x):
    x = max(float(x), config.SOFTPLUS_FLOOR)
    return x + numpy.log(-numpy.expm1(-x))


@dataclass(frozen=True)
class FitResult:
    """
    The estimates of a dephasing fit.

    Parameters:
        kind : Either ``"g2"`` or ``"nk"``.
        estimates : The estimated parameters by name.
        fixed : The parameters held fixed by name.
        covariance : The estimate covariance, ordered as ``estimates``.
        residual_norm : The weighted residual sum of squares.
        reduced_chi2 : ``residual_norm`` per degree of freedom.
        n_points : The number of fitted points.
        n_iterations : The number of optimizer steps.
        converged : Whether the optimizer converged.
        gradient_norm : The final gradient infinity norm.
        squeezing_db : The squeezing level of the fitted JPA, for ``"nk"``.
        symmetric : Whether both JPAs were fitted as equal, for ``"nk"``.
        warnings : Diagnostics of a suspicious fit.
    """
    kind: str
    estimates: dict
    fixed: dict
    covariance: numpy.ndarray
    residual_norm: float
    reduced_chi2: float
    n_points: int
    n_iterations: int
    converged: bool
    gradient_norm: float
    squeezing_db: float = None
    symmetric: bool = None
    warnings: tuple = field(default=())

    @property
    def names(self) -> tuple[str, ...]:
        """ The names of the estimated parameters. """
        return tuple(self.estimates)

    @property
    def stderr(self) -> dict:
        """ The standard errors, the root of the covariance diagonal. """
        errors = numpy.sqrt(numpy.clip(numpy.diag(self.covariance), 0, None))
        return dict(zip(self.names, map(float, errors)))

    def evaluate(self, taus):
        """ The fitted model on a grid of delays. """
        if self.kind == "g2":
            return g2_model_and_jacobian(
                taus, self.estimates['amplitude'], self.estimates['omega'])[0]
        return nk_model_and_jacobian(
            taus, self.fixed['omega'], self.estimates['r'],
            self.estimates['n'], self.symmetric)[0]

    def to_tree(self) -> dict:
        return {
            'factory': factory_name(type(self)),
            'kind': self.kind,
            'estimates': dict(self.estimates),
            'stderr': self.stderr,
            'fixed': dict(self.fixed),
            'covariance': self.covariance.tolist(),
            'residual_norm': self.residual_norm,
            'reduced_chi2': self.reduced_chi2,
            'n_points': self.n_points,
            'n_iterations': self.n_iterations,
            'converged': self.converged,
            'gradient_norm': self.gradient_norm,
            'squeezing_db': self.squeezing_db,
            'symmetric': self.symmetric,
            'warnings': list(self.warnings)}

    @classmethod
    def from_tree(cls, tree: dict) -> FitResult:
        return cls(
            tree['kind'], dict(tree['estimates']), dict(tree['fixed']),
            numpy.array(tree['covariance'], dtype=float),
            tree['residual_norm'], tree['reduced_chi2'], tree['n_points'],
            tree['n_iterations'], tree['converged'], tree['gradient_norm'],
            tree.get('squeezing_db'), tree.get('symmetric'),
            tuple(tree.get('warnings', ())))


@dataclass(frozen=True)
class ResidualReport:
    """
    Per-point residuals of a curve against a model.

    Parameters:
        residuals : Data minus model, divided by the standard errors if any.
        chi2 : The sum of squared residuals.
        dof : The degrees of freedom.
        reduced_chi2 : ``chi2 / dof``, ``nan`` without degrees of freedom.
    """
    residuals: numpy.ndarray
    chi2: float
    dof: int
    reduced_chi2: float


def _prepare(curve: DephasingCurve, kind: str):
    assert_isinstance(curve, DephasingCurve)
    if curve.kind != kind:
        raise CurveError(messages.UNKNOWN_KIND.format((kind, ), curve.kind))
    if len(curve) < config.MIN_FIT_POINTS:
        raise CurveError(messages.TOO_FEW_POINTS.format(
            config.MIN_FIT_POINTS, len(curve)))
    if curve.stderr is None:
        return numpy.ones(len(curve))
    if not (curve.stderr > 0).all():
        raise CurveError(messages.NON_POSITIVE_STDERR)
    return 1 / curve.stderr


def _covariance(state: OptimizerState, transform, weighted: bool):
    normal = state.jacobian.T @ state.jacobian
    singular = numpy.linalg.matrix_rank(normal) < len(state.theta)
    covariance = numpy.linalg.pinv(normal)
    dof = len(state.residuals) - len(state.theta)
    reduced_chi2 = state.cost / dof if dof > 0 else numpy.nan
    if not weighted and dof > 0:
        covariance = covariance * reduced_chi2
    covariance = transform[:, None] * covariance * transform[None, :]
    return covariance, float(reduced_chi2), singular


def _diagnose(curve, state, weights, reduced_chi2, singular):
    warnings = []
    if state.stalled:
        warnings.append(messages.OPTIMIZER_STALLED.format(
            state.gradient_norm))
    if singular:
        warnings.append(messages.SINGULAR_COVARIANCE)
    rms = numpy.sqrt(numpy.mean((state.residuals / weights) ** 2))
    if rms > config.FIT_RMS_WARNING:
        warnings.append(messages.LARGE_RESIDUALS.format(
            rms, config.FIT_RMS_WARNING))
    if curve.stderr is not None and reduced_chi2 > config.FIT_CHI2_WARNING:
        warnings.append(messages.LARGE_CHI2.format(
            reduced_chi2, config.FIT_CHI2_WARNING))
    return warnings


def _finish(result: FitResult) -> FitResult:
    for warning in result.warnings:
        logger.warning(warning)
    logger.info("%s fit: %s after %d iterations, reduced chi2 %.6g",
                result.kind, result.estimates, result.n_iterations,
                result.reduced_chi2)
    if not result.converged:
        raise ConvergenceError(result)
    return result


def fit_g2(curve: DephasingCurve, init: dict = None) -> FitResult:
    """
    Fit :math:`1 + A \\, \\sinc^2(\\Omega \\tau)` to a
    :math:`g^{(2)}` curve, weighted by the standard errors when present.

    Without ``init``, the iteration starts from ``MULTISTART_PER_DECADE``
    log-spaced values of :math:`\\Omega` per decade across
    ``MULTISTART_OMEGA_RANGE``, each with the amplitude that best fits it,
    and keeps the lowest residual, ties going to the smallest
    :math:`\\Omega`.

    Parameters:
        curve : The curve, with at least ``MIN_FIT_POINTS`` positive values.
        init : Starting ``omega`` and optionally ``amplitude``.

    Raises:
        DegenerateDataError : If the curve is flat.
        ConvergenceError : If no start converges.

    Example
    -------
    >>> curve = DephasingCurve("g2", numpy.arange(5) * 1e-6, numpy.ones(5))
    >>> fit_g2(curve)
    Traceback (most recent call last):
    ...
    tmspy.estimation.DegenerateDataError: Data is flat, the model is not \
identifiable.
    """
    weights = _prepare(curve, "g2")
    if not (curve.values > 0).all():
        raise CurveError(messages.NON_POSITIVE_VALUES)
    spread = numpy.ptp(curve.values)
    if spread <= config.DEGENERATE_SPREAD * numpy.abs(curve.values).max():
        raise DegenerateDataError(messages.FLAT_DATA)
    taus, excess = curve.taus, curve.values - 1

    def fun(theta):
        values, jacobian = g2_model_and_jacobian(
            taus, theta[0], numpy.exp(theta[1]))
        jacobian[:, 1] *= numpy.exp(theta[1])
        return (weights * (values - curve.values),
                weights[:, None] * jacobian)

    def start(omega):
        shape = weights * sinc(omega * numpy.abs(taus)) ** 2
        norm = shape @ shape
        amplitude = shape @ (weights * excess) / norm if norm > 0 else 0.
        return [amplitude, numpy.log(omega)]

    if init is None:
        lo, hi = numpy.log10(config.MULTISTART_OMEGA_RANGE)
        omegas = numpy.logspace(
            lo, hi, int(round(config.MULTISTART_PER_DECADE * (hi - lo))) + 1)
        starts = [start(omega) for omega in omegas]
    else:
        if not init['omega'] > 0:
            raise ValueError(
                messages.NON_POSITIVE_OMEGA.format(init['omega']))
        theta0 = start(init['omega'])
        if 'amplitude' in init:
            theta0[0] = init['amplitude']
        starts = [theta0]
    states = []
    for theta0 in starts:
        try:
            states.append(levenberg_marquardt(fun, theta0))
        except FitError as error:
            logger.debug("start %s failed: %s", theta0, error)
    if not states:
        raise FitError(messages.NOT_CONVERGED.format(0))
    candidates = [state for state in states if state.converged] or states
    best_cost = min(state.cost for state in candidates)
    ties = [state for state in candidates if state.cost <= best_cost + (
        config.MULTISTART_TIE_RTOL * best_cost)]
    state = min(ties, key=lambda state: state.theta[1])
    omega = float(numpy.exp(state.theta[1]))
    covariance, reduced_chi2, singular = _covariance(
        state, numpy.array([1., omega]), curve.stderr is not None)
    warnings = _diagnose(curve, state, weights, reduced_chi2, singular)
    return _finish(FitResult(
        "g2", {'amplitude': float(state.theta[0]), 'omega': omega}, {},
        covariance, state.cost, reduced_chi2, len(curve),
        state.n_iterations, state.converged, state.gradient_norm,
        warnings=tuple(warnings)))


def fit_nk(curve: DephasingCurve, omega: float, symmetric: bool = True,
           first_lobe_only: bool = True) -> FitResult:
    """
    Fit the negativity kernel at fixed :math:`\\Omega` to find the
    squeezing factor and noise photons of the JPAs, both kept non-negative
    by a softplus reparameterization.

    The iteration starts from the best point of the grid
    ``NK_START_R`` by ``NK_START_N``. Parameters within ``BOUND_TOL`` of
    zero are reported in the warnings of the result.

    Parameters:
        curve : The curve, with at least ``MIN_FIT_POINTS`` points.
        omega : The filter rate in rad/s.
        symmetric : Whether both JPAs share ``(r, n)``, otherwise the
            second one is in the vacuum.
        first_lobe_only : Whether to drop the points beyond
            :math:`\\tau = \\pi / \\Omega`.

    Example
    -------
    >>> from tmspy.dephasing import FilterSpec, nk_curve
    >>> from tmspy.jpa import JpaParams
    >>> filter = FilterSpec(1e6)
    >>> j1, j2 = JpaParams(.8, .05), JpaParams(.8, .05, numpy.pi)
    >>> taus = numpy.linspace(0, filter.first_zero, 40)
    >>> result = fit_nk(nk_curve(j1, j2, filter, taus), filter.omega)
    >>> assert abs(result.estimates['r'] / .8 - 1) < 1e-6
    >>> assert abs(result.estimates['n'] / .05 - 1) < 1e-6
    """
    if not omega > 0:
        raise ValueError(messages.NON_POSITIVE_OMEGA.format(omega))
    assert_isinstance(curve, DephasingCurve)
    if first_lobe_only:
        curve = curve.restrict(numpy.pi / omega)
    weights = _prepare(curve, "nk")
    taus, data = curve.taus, curve.values

    def fun(theta):
        r, n = _softplus(theta)
        values, jacobian = nk_model_and_jacobian(taus, omega, r, n, symmetric)
        jacobian = jacobian * expit(theta)[None, :]
        return weights * (values - data), weights[:, None] * jacobian

    def cost(r, n):
        values, _ = nk_model_and_jacobian(taus, omega, r, n, symmetric)
        return float(numpy.sum((weights * (values - data)) ** 2))

    grid = [(r, n) for r in config.NK_START_R for n in config.NK_START_N]
    with numpy.errstate(all='ignore'):
        costs = [cost(r, n) for r, n in grid]
    r0, n0 = grid[int(numpy.nanargmin(costs))]
    logger.debug("nk fit starting from r = %.3g, n = %.3g", r0, n0)
    state = levenberg_marquardt(
        fun, [_inverse_softplus(r0), _inverse_softplus(n0)])
    r, n = map(float, _softplus(state.theta))
    covariance, reduced_chi2, singular = _covariance(
        state, expit(state.theta), curve.stderr is not None)
    warnings = _diagnose(curve, state, weights, reduced_chi2, singular)
    for name, value in (("r", r), ("n", n)):
        if value < config.BOUND_TOL:
            warnings.append(messages.PARAMETER_AT_BOUND.format(name, value))
    fixed = {'omega': float(omega)}
    if not symmetric:
        fixed.update(r2=0., n2=0.)
    return _finish(FitResult(
        "nk", {'r': r, 'n': n}, fixed, covariance, state.cost,
        reduced_chi2, len(curve), state.n_iterations, state.converged,
        state.gradient_norm, float(squeezing_level(JpaParams(r, n))),
        bool(symmetric), tuple(warnings)))


def residual_report(curve: DephasingCurve, model, n_params: int = None
                    ) -> ResidualReport:
    """
    Residuals of a curve against a fitted model or any function of the
    delays, weighted by the standard errors when present.

    Parameters:
        curve : The curve.
        model : A :class:`FitResult` or a function from delays to values.
        n_params : The number of fitted parameters, by default those of the
            :class:`FitResult` or zero.

    Example
    -------
    >>> curve = DephasingCurve("g2", [0, 1, 2], [3.1, 2, 1])
    >>> report = residual_report(curve, lambda taus: 3 - taus)
    >>> report.residuals.round(12)
    array([0.1, 0. , 0. ])
    >>> report.dof
    3
    """
    assert_isinstance(curve, DephasingCurve)
    if isinstance(model, FitResult):
        n_params = len(model.estimates) if n_params is None else n_params
        predicted = model.evaluate(curve.taus)
    else:
        predicted = numpy.asarray(model(curve.taus), dtype=float)
    if len(predicted) != len(curve):
        raise ValueError(
            messages.LENGTH_MISMATCH.format(len(curve), len(predicted)))
    residuals = curve.values - predicted
    if curve.stderr is not None:
        residuals = residuals / curve.stderr
    chi2 = float(residuals @ residuals)
    dof = len(curve) - (n_params or 0)
    return ResidualReport(
        residuals, chi2, dof, chi2 / dof if dof > 0 else numpy.nan)
