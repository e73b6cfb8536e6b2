# -*- coding: utf-8 -*-

"""
Finite-time dephasing of squeezed microwaves: second order coherence and
negativity kernel of a two-mode squeezed state as a function of the delay
:math:`\\tau` between its paths, for a measurement filter with sinc rate
:math:`\\Omega`.

Both laws come with an independent evaluator, the Gaussian moment theorem
for :math:`g^{(2)}` and the partially transposed covariance for
:math:`N_k`, which agree with the closed forms to numerical precision.

Summary
-------

.. autosummary::
    :template: class.rst
    :nosignatures:
    :toctree:

    FilterSpec
    DephasingCurve
    DegenerateStateError

.. admonition:: Functions

    .. autosummary::
        :template: function.rst
        :nosignatures:
        :toctree:

        sinc
        sinc_derivative
        mean_photon_number
        g2_closed_form
        g2_wick_oracle
        delayed_tms_cov
        nk_bracket
        nk_closed_form
        nk_numeric_oracle
        threshold_argument
        dephasing_time
        g2_curve
        nk_curve

Example
-------
>>> from tmspy.jpa import tms_resource
>>> j1, j2 = tms_resource(5.7)
>>> filter = FilterSpec.from_bandwidth(430e3)
>>> tau_d = dephasing_time(j1, j2, filter)
>>> assert abs(nk_closed_form(j1, j2, filter, tau_d)) < 1e-9
>>> assert abs(sinc(filter.omega * tau_d) - numpy.tanh(j1.r)) < 1e-9
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy
from scipy.optimize import bisect

from tmspy import config, messages
from tmspy.gaussian import (
    CovarianceMatrix, apply, negativity_kernel_from_cov)
from tmspy.jpa import JpaParams, quadrature_variances, squeezed_thermal_cov
from tmspy.symplectic import beam_splitter_50_50
from tmspy.utils import (
    InputError, assert_isinstance, factory_name, read_csv, write_csv)

logger = logging.getLogger(__name__)

KINDS = ("g2", "nk")


class DegenerateStateError(ValueError):
    """
    When a dephasing law is undefined for a state, e.g. :math:`g^{(2)}` of
    the vacuum or the dephasing time of a separable resource.
    """


@dataclass(frozen=True)
class FilterSpec:
    """
    A measurement filter, through the rate :math:`\\Omega` in rad/s of the
    sinc it imprints on temporal correlations.

    A boxcar filter of full width :math:`B` in Hz has correlations
    :math:`\\sinc(\\pi B \\tau)`, i.e. :math:`\\Omega = \\pi B`.

    Parameters:
        omega : The sinc rate, positive.

    Example
    -------
    >>> filter = FilterSpec.from_bandwidth(1e6)
    >>> assert abs(filter.bandwidth_hz - 1e6) < 1e-6
    >>> FilterSpec(0)
    Traceback (most recent call last):
    ...
    ValueError: Filter rate omega must be > 0, got 0.0.
    """
    omega: float

    def __post_init__(self):
        omega = float(self.omega)
        if not (numpy.isfinite(omega) and omega > 0):
            raise ValueError(messages.NON_POSITIVE_OMEGA.format(omega))
        object.__setattr__(self, 'omega', omega)

    @classmethod
    def from_bandwidth(cls, bandwidth_hz: float) -> FilterSpec:
        """ The boxcar filter of full width ``bandwidth_hz``. """
        return cls(numpy.pi * float(bandwidth_hz))

    @property
    def bandwidth_hz(self) -> float:
        """ The full width :math:`B = \\Omega / \\pi` of the boxcar. """
        return self.omega / numpy.pi

    @property
    def first_zero(self) -> float:
        """ The first zero :math:`\\pi / \\Omega` of the sinc, in seconds. """
        return numpy.pi / self.omega

    def to_tree(self) -> dict:
        return {'factory': factory_name(type(self)), 'omega': self.omega}

    @classmethod
    def from_tree(cls, tree: dict) -> FilterSpec:
        return cls(tree['omega'])


class DephasingCurve:
    """
    A sampled trace of :math:`g^{(2)}(\\tau)` or :math:`N_k(\\tau)`.

    Parameters:
        kind : Either ``"g2"`` or ``"nk"``.
        taus : The delays in seconds, strictly increasing.
        values : The values, dimensionless.
        stderr : The standard errors, non-negative, or ``None``.
        params : The JPAs and filter that generated a synthetic curve.

    Example
    -------
    >>> curve = DephasingCurve("nk", [0, 1e-6], [1., .5], [.1, .1])
    >>> len(curve), list(curve.points())[1]
    (2, (1e-06, 0.5, 0.1))
    >>> DephasingCurve("nk", [1e-6, 0], [1., .5])
    Traceback (most recent call last):
    ...
    ValueError: Delays must be strictly increasing.
    """
    def __init__(self, kind: str, taus, values, stderr=None, params=None):
        if kind not in KINDS:
            raise ValueError(messages.UNKNOWN_KIND.format(KINDS, kind))
        taus, values = (
            numpy.array(x, dtype=float).reshape(-1) for x in (taus, values))
        if len(values) != len(taus):
            raise ValueError(
                messages.LENGTH_MISMATCH.format(len(taus), len(values)))
        if (numpy.diff(taus) <= 0).any():
            raise ValueError(messages.NOT_INCREASING)
        if stderr is not None:
            stderr = numpy.array(stderr, dtype=float).reshape(-1)
            if len(stderr) != len(taus):
                raise ValueError(
                    messages.LENGTH_MISMATCH.format(len(taus), len(stderr)))
            if not (stderr >= 0).all():
                raise ValueError(messages.NEGATIVE_STDERR)
        for array in (taus, values, stderr):
            if array is not None:
                array.flags.writeable = False
        self.kind, self.taus, self.values = kind, taus, values
        self.stderr, self.params = stderr, params

    def __len__(self):
        return len(self.taus)

    def __repr__(self):
        return "DephasingCurve({!r}, n_points={})".format(self.kind, len(self))

    def points(self):
        """ The triples ``(tau, value, stderr)``, ``stderr`` 0 if absent. """
        stderr = numpy.zeros(len(self)) if self.stderr is None else self.stderr
        for point in zip(self.taus, self.values, stderr):
            yield tuple(map(float, point))

    def restrict(self, tau_max: float) -> DephasingCurve:
        """
        The points with delay at most ``tau_max``.

        Example
        -------
        >>> curve = DephasingCurve("g2", [0, 1, 2], [3, 2, 1])
        >>> curve.restrict(1.5).values
        array([3., 2.])
        """
        keep = self.taus <= tau_max
        stderr = None if self.stderr is None else self.stderr[keep]
        return DephasingCurve(
            self.kind, self.taus[keep], self.values[keep], stderr, self.params)

    def with_noise(self, sigma: float, seed: int = None) -> DephasingCurve:
        """
        A copy with seeded Gaussian noise of width ``sigma`` on the values,
        and ``sigma`` as standard error. A zero ``sigma`` returns the same
        values without errors.

        Parameters:
            sigma : The noise standard deviation.
            seed : The seed of the random generator.

        Example
        -------
        >>> curve = DephasingCurve("g2", [0, 1, 2], [3, 2, 1])
        >>> noisy = curve.with_noise(.1, seed=42)
        >>> assert (noisy.values == curve.with_noise(.1, seed=42).values).all()
        >>> assert (noisy.stderr == .1).all()
        """
        if not sigma >= 0:
            raise ValueError(messages.NEGATIVE_STDERR)
        if sigma == 0:
            return DephasingCurve(
                self.kind, self.taus, self.values, None, self.params)
        rng = numpy.random.default_rng(seed)
        values = self.values + sigma * rng.standard_normal(len(self))
        return DephasingCurve(self.kind, self.taus, values,
                              numpy.full(len(self), float(sigma)), self.params)

    def to_csv(self, file, column: str = "value"):
        """
        Write the curve as CSV with header ``tau_s,<column>[,stderr]``.

        Parameters:
            file : A path or an open text file.
            column : The name of the value column.
        """
        header = ["tau_s", column]
        if self.stderr is None:
            rows = zip(self.taus, self.values)
        else:
            header.append("stderr")
            rows = zip(self.taus, self.values, self.stderr)
        write_csv(file, header, rows)

    @classmethod
    def from_csv(cls, file, kind: str) -> DephasingCurve:
        """
        Read a curve from CSV, with value column named ``value`` or ``kind``
        and an optional ``stderr`` column.

        Parameters:
            file : A path or an open text file.
            kind : Either ``"g2"`` or ``"nk"``.

        Raises:
            InputError : If the file is malformed or its delays are not
                strictly increasing.

        Example
        -------
        >>> import io
        >>> buffer = io.StringIO()
        >>> DephasingCurve("nk", [0, 1e-6], [1., .5]).to_csv(buffer, "nk")
        >>> _ = buffer.seek(0)
        >>> DephasingCurve.from_csv(buffer, "nk").values
        array([1. , 0.5])
        """
        headers = [("tau_s", name) + extra
                   for name in ("value", kind) for extra in ((), ("stderr", ))]
        header, rows = read_csv(file, headers)
        columns = numpy.array(rows, dtype=float).reshape(-1, len(header)).T
        stderr = columns[2] if len(header) == 3 else None
        try:
            return cls(kind, columns[0], columns[1], stderr)
        except ValueError as error:
            raise InputError(str(error)) from error


def sinc(x):
    """
    The unnormalised sinc :math:`\\sin(x) / x`, with a series expansion
    around the removable singularity.

    Example
    -------
    >>> sinc(0.)
    1.0
    >>> assert abs(sinc(numpy.pi)) < 1e-15
    >>> sinc([0, -numpy.pi / 2]) * numpy.pi
    array([3.14159265, 2.        ])
    """
    x = numpy.asarray(x, dtype=float)
    small = numpy.abs(x) < config.SINC_SERIES_THRESHOLD
    safe = numpy.where(small, 1., x)
    result = numpy.where(
        small, 1 - x ** 2 / 6 + x ** 4 / 120, numpy.sin(safe) / safe)
    return result if result.ndim else float(result)


def sinc_derivative(x):
    """
    The derivative :math:`(\\cos x - \\sinc\\, x) / x` of the sinc.

    Example
    -------
    >>> sinc_derivative(0.)
    0.0
    >>> assert abs(sinc_derivative(numpy.pi) + 1 / numpy.pi) < 1e-15
    """
    x = numpy.asarray(x, dtype=float)
    small = numpy.abs(x) < config.SINC_SERIES_THRESHOLD
    safe = numpy.where(small, 1., x)
    result = numpy.where(
        small, -x / 3 + x ** 3 / 30, (numpy.cos(safe) - sinc(safe)) / safe)
    return result if result.ndim else float(result)


def mean_photon_number(params: JpaParams) -> float:
    """
    The mean photon number :math:`n \\cosh 2r + \\sinh^2 r` of a squeezed
    thermal state.
    """
    return float(params.n * numpy.cosh(2 * params.r)
                 + numpy.sinh(params.r) ** 2)


def _filtered_sinc(filter: FilterSpec, tau):
    assert_isinstance(filter, FilterSpec)
    return sinc(filter.omega * numpy.abs(numpy.asarray(tau, dtype=float)))


def _as_float(result):
    return result if numpy.ndim(result) else float(result)


def _assert_not_vacuum(params: JpaParams):
    assert_isinstance(params, JpaParams)
    if not mean_photon_number(params) > 0:
        raise DegenerateStateError(messages.VACUUM_G2)


def g2_closed_form(params: JpaParams, filter: FilterSpec, tau):
    """
    Second order coherence of a squeezed thermal state seen through a
    filter, after a delay ``tau``:

    .. math::
        g^{(2)}(\\tau) = 1 + \\sinc^2(\\Omega \\tau)
        \\frac{1 + 2 \\sigma_s^2 (\\sigma_s^2 - 1)
        + 2 \\sigma_a^2 (\\sigma_a^2 - 1)}{(1 - \\sigma_s^2 - \\sigma_a^2)^2}

    where the variances are in units where the vacuum has variance 1/2.

    Parameters:
        params : The JPA, not in the vacuum.
        filter : The measurement filter.
        tau : The delay in seconds, a float or an array.

    Example
    -------
    >>> filter = FilterSpec(1e6)
    >>> round(g2_closed_form(JpaParams(1.), filter, 0), 5)
    3.72406
    >>> round(g2_closed_form(JpaParams(0, .3), filter, 0), 12)
    2.0
    >>> g2_closed_form(JpaParams(1.), filter, numpy.pi / 1e6)
    1.0
    """
    _assert_not_vacuum(params)
    squeezed, antisqueezed = (v / 2 for v in quadrature_variances(params))
    numerator = 1 + 2 * squeezed * (squeezed - 1)\
        + 2 * antisqueezed * (antisqueezed - 1)
    denominator = (1 - squeezed - antisqueezed) ** 2
    return _as_float(
        1 + _filtered_sinc(filter, tau) ** 2 * numerator / denominator)


def g2_wick_oracle(params: JpaParams, filter: FilterSpec, tau):
    """
    Second order coherence from the Gaussian moment theorem,
    :math:`g^{(2)}(\\tau) = 1 + \\sinc^2(\\Omega \\tau)
    (\\bar N^2 + |M|^2) / \\bar N^2` with mean photon number
    :math:`\\bar N` and anomalous moment :math:`M = (1 + 2n) \\sinh(2r) / 2`.

    Example
    -------
    >>> params, filter = JpaParams(.5), FilterSpec(1e6)
    >>> round(g2_wick_oracle(params, filter, 0), 4)
    6.6827
    >>> assert abs(g2_wick_oracle(params, filter, 0)
    ...            - g2_closed_form(params, filter, 0)) < 1e-9
    """
    _assert_not_vacuum(params)
    photons = mean_photon_number(params)
    anomalous = (1 + 2 * params.n) * numpy.sinh(2 * params.r) / 2
    return _as_float(1 + _filtered_sinc(filter, tau) ** 2
                     * (photons ** 2 + anomalous ** 2) / photons ** 2)


def delayed_tms_cov(j1: JpaParams, j2: JpaParams,
                    filter: FilterSpec, tau: float) -> CovarianceMatrix:
    """
    The two-mode state at the outputs of a balanced beam splitter fed by two
    JPAs, with its cross-covariance blocks scaled by
    :math:`\\sinc(\\Omega \\tau)` when one path is delayed by
    ``tau``.

    Parameters:
        j1 : The first JPA, usually with angle ``phi``.
        j2 : The second JPA, usually with angle ``phi + pi``.
        filter : The measurement filter.
        tau : The delay in seconds.

    Example
    -------
    >>> from tmspy.jpa import tms_resource
    >>> j1, j2 = tms_resource(8.)
    >>> filter = FilterSpec(1e6)
    >>> V = delayed_tms_cov(j1, j2, filter, filter.first_zero)
    >>> assert numpy.allclose(V.block(0, 1), 0, atol=1e-12)
    """
    for params in (j1, j2):
        assert_isinstance(params, JpaParams)
    inputs = squeezed_thermal_cov(j1) @ squeezed_thermal_cov(j2)
    entries = apply(beam_splitter_50_50(), inputs).entries.copy()
    scale = _filtered_sinc(filter, tau)
    if numpy.ndim(scale):
        raise ValueError(messages.BAD_VALUE.format(tau))
    entries[:2, 2:] *= scale
    entries[2:, :2] *= scale
    return CovarianceMatrix(entries, check=False)


def nk_bracket(j1: JpaParams, j2: JpaParams, s):
    """
    The squared smallest partially transposed symplectic eigenvalue

    .. math::
        (n_1 - n_2)^2 + \\tilde n C + (\\tilde n C - (n_1 + n_2 + 1)^2) s^2
        - \\tilde n D |s|

    with :math:`\\tilde n = (1 + 2n_1)(1 + 2n_2)`,
    :math:`C = \\cosh^2(r_1 + r_2)` and :math:`D = \\sinh(2r_1 + 2r_2)`,
    as a function of the cross-correlation scale ``s``.
    """
    s = numpy.abs(numpy.asarray(s, dtype=float))
    n_tilde = (1 + 2 * j1.n) * (1 + 2 * j2.n)
    C = numpy.cosh(j1.r + j2.r) ** 2
    D = numpy.sinh(2 * j1.r + 2 * j2.r)
    return (j1.n - j2.n) ** 2 + n_tilde * C\
        + (n_tilde * C - (j1.n + j2.n + 1) ** 2) * s ** 2 - n_tilde * D * s


def _nk_from_bracket(bracket):
    if (numpy.asarray(bracket) <= 0).any():
        raise DegenerateStateError(messages.NEGATIVE_BRACKET.format(
            float(numpy.min(bracket))))
    return _as_float(-.5 + .5 / numpy.sqrt(bracket))


def nk_closed_form(j1: JpaParams, j2: JpaParams, filter: FilterSpec, tau):
    """
    The negativity kernel of the delayed two-mode squeezed state,
    :math:`N_k(\\tau) = -1/2 + 1/2 \\, [\\dots]^{-1/2}` with the bracket of
    :func:`nk_bracket` at :math:`s = \\sinc(\\Omega \\tau)`. A single
    JPA with the other in the vacuum is the case ``r2 = n2 = 0``.

    Parameters:
        j1 : The first JPA.
        j2 : The second JPA, with orthogonal squeezing angle.
        filter : The measurement filter.
        tau : The delay in seconds, a float or an array.

    Example
    -------
    >>> j1, j2 = JpaParams(.65624), JpaParams(.65624, phi=numpy.pi)
    >>> filter = FilterSpec(1e6)
    >>> nk = nk_closed_form(j1, j2, filter, [0, filter.first_zero])
    >>> assert numpy.allclose(nk, [numpy.expm1(2 * .65624) / 2,
    ...                            -.5 + .5 / numpy.cosh(2 * .65624)])
    """
    for params in (j1, j2):
        assert_isinstance(params, JpaParams)
    return _nk_from_bracket(nk_bracket(j1, j2, _filtered_sinc(filter, tau)))


def nk_numeric_oracle(j1: JpaParams, j2: JpaParams,
                      filter: FilterSpec, tau: float) -> float:
    """
    The negativity kernel of :func:`delayed_tms_cov`, computed from the
    symplectic spectrum of its partial transpose.
    """
    return negativity_kernel_from_cov(delayed_tms_cov(j1, j2, filter, tau))


def threshold_argument(j1: JpaParams, j2: JpaParams) -> float:
    """
    The smallest :math:`x^* \\in (0, \\pi]` with :math:`N_k = 0` at
    :math:`\\sinc(x^*)`, found by bisection on the first lobe.

    Raises:
        DegenerateStateError : If the resource is not entangled at zero
            delay.

    Example
    -------
    >>> from tmspy.jpa import tms_resource
    >>> j1, j2 = tms_resource(5.7)
    >>> x = threshold_argument(j1, j2)
    >>> assert 0 < x < numpy.pi
    >>> assert abs(sinc(x) - numpy.tanh(j1.r)) < 1e-9
    """
    for params in (j1, j2):
        assert_isinstance(params, JpaParams)
    nk_at_zero = _nk_from_bracket(nk_bracket(j1, j2, 1.))
    if not nk_at_zero > 0:
        raise DegenerateStateError(
            messages.NEVER_ENTANGLED.format(nk_at_zero))
    x = bisect(lambda x: _nk_from_bracket(nk_bracket(j1, j2, sinc(x))),
               0., numpy.pi, xtol=config.BISECTION_XTOL,
               rtol=config.BISECTION_RTOL, maxiter=config.BISECTION_MAXITER)
    logger.debug("threshold argument %.12g for %s, %s", x, j1, j2)
    return float(x)


def dephasing_time(j1: JpaParams, j2: JpaParams, filter: FilterSpec) -> float:
    """
    The dephasing time :math:`\\tau_d = x^* / \\Omega`, i.e. the smallest
    delay at which the negativity kernel vanishes.

    Parameters:
        j1 : The first JPA.
        j2 : The second JPA.
        filter : The measurement filter.

    Example
    -------
    >>> from tmspy.jpa import tms_resource
    >>> j1, j2 = tms_resource(5.7)
    >>> slow, fast = FilterSpec(430e3), FilterSpec(770e3)
    >>> ratio = dephasing_time(j1, j2, slow) / dephasing_time(j1, j2, fast)
    >>> assert abs(ratio - 770 / 430) < 1e-9
    """
    assert_isinstance(filter, FilterSpec)
    return threshold_argument(j1, j2) / filter.omega


def g2_curve(params: JpaParams, filter: FilterSpec, taus) -> DephasingCurve:
    """
    The closed-form :math:`g^{(2)}` sampled on a grid of delays.

    Example
    -------
    >>> curve = g2_curve(JpaParams(1.), FilterSpec(1e6), [0, numpy.pi / 1e6])
    >>> curve.values.round(5)
    array([3.72406, 1.     ])
    """
    taus = numpy.array(taus, dtype=float).reshape(-1)
    values = g2_closed_form(params, filter, taus)
    return DephasingCurve("g2", taus, values, params=(params, filter))


def nk_curve(j1: JpaParams, j2: JpaParams,
             filter: FilterSpec, taus) -> DephasingCurve:
    """ The closed-form :math:`N_k` sampled on a grid of delays. """
    taus = numpy.array(taus, dtype=float).reshape(-1)
    values = nk_closed_form(j1, j2, filter, taus)
    return DephasingCurve("nk", taus, values, params=(j1, j2, filter))
