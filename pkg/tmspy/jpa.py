# -*- coding: utf-8 -*-

"""
Josephson parametric amplifiers as sources of squeezed thermal states, and
the conversions between squeezing factors, noise photons and levels in dB.

Variances are in units where the vacuum has unit variance, i.e. four times
the values in the convention where the vacuum variance is 1/4.

Summary
-------

.. autosummary::
    :template: class.rst
    :nosignatures:
    :toctree:

    JpaParams
    SqueezingLevel
    SqueezingRangeError

.. admonition:: Functions

    .. autosummary::
        :template: function.rst
        :nosignatures:
        :toctree:

        quadrature_variances
        squeezing_level
        r_from_level
        squeezed_thermal_cov
        thermal_cov
        tms_resource
        tms_squeezing_level
        nu_from_tms_level
        nk_from_tms_level
        path_photon_number
        noise_for_path_photons

Example
-------
>>> params = JpaParams.from_level(8.)
>>> round(params.r, 5)
0.92103
>>> assert abs(float(squeezing_level(params)) - 8) < 1e-12
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy

from tmspy import messages
from tmspy.gaussian import CovarianceMatrix
from tmspy.symplectic import rotation_matrix
from tmspy.utils import factory_name


class SqueezingRangeError(ValueError):
    """ When no squeezing factor ``r >= 0`` reproduces a squeezing level. """


@dataclass(frozen=True)
class SqueezingLevel:
    """
    A squeezing level in decibels below vacuum, negative for excess noise.

    Parameters:
        s_db : The level :math:`S = -10 \\log_{10} \\sigma_s^2`.

    Example
    -------
    >>> SqueezingLevel(10.).linear
    0.1
    """
    s_db: float

    def __post_init__(self):
        if not numpy.isfinite(self.s_db):
            raise ValueError(messages.NOT_FINITE.format("s_db", self.s_db))
        object.__setattr__(self, 's_db', float(self.s_db))

    def __float__(self):
        return self.s_db

    @property
    def linear(self) -> float:
        """ The squeezed variance :math:`10^{-S / 10}` relative to vacuum. """
        return 10 ** (-self.s_db / 10)


@dataclass(frozen=True)
class JpaParams:
    """
    The output of a JPA, a squeezed thermal state with complex squeezing
    amplitude :math:`\\xi = r e^{i \\phi}` and ``n`` noise photons.

    Parameters:
        r : The squeezing factor, non-negative.
        n : The number of noise photons, non-negative.
        phi : The squeezing angle in radians, normalised to
            :math:`[0, 2 \\pi)`.

    Example
    -------
    >>> JpaParams(.5, phi=-numpy.pi).phi == numpy.pi
    True
    >>> JpaParams(-.1)
    Traceback (most recent call last):
    ...
    ValueError: Squeezing factor must be >= 0, got -0.1.
    """
    r: float = 0.
    n: float = 0.
    phi: float = 0.

    def __post_init__(self):
        r, n, phi = map(float, (self.r, self.n, self.phi))
        for name, value in zip(("r", "n", "phi"), (r, n, phi)):
            if not numpy.isfinite(value):
                raise ValueError(messages.NOT_FINITE.format(name, value))
        if r < 0:
            raise ValueError(messages.NEGATIVE_SQUEEZING.format(r))
        if n < 0:
            raise ValueError(messages.NEGATIVE_NOISE.format(n))
        object.__setattr__(self, 'r', r)
        object.__setattr__(self, 'n', n)
        object.__setattr__(self, 'phi', phi % (2 * numpy.pi))

    @classmethod
    def vacuum(cls) -> JpaParams:
        """ A switched-off JPA, i.e. a vacuum input. """
        return cls()

    @classmethod
    def from_level(
            cls, s_db: float, n: float = 0., phi: float = 0.) -> JpaParams:
        """
        The JPA reaching a squeezing level with ``n`` noise photons.

        Parameters:
            s_db : The squeezing level in dB.
            n : The number of noise photons.
            phi : The squeezing angle.
        """
        return cls(r_from_level(s_db, n), n, phi)

    @property
    def is_vacuum(self) -> bool:
        """ Whether the output is the vacuum. """
        return self.r == 0 and self.n == 0

    def to_tree(self) -> dict:
        return {
            'factory': factory_name(type(self)),
            'r': self.r, 'n': self.n, 'phi': self.phi}

    @classmethod
    def from_tree(cls, tree: dict) -> JpaParams:
        return cls(tree['r'], tree.get('n', 0.), tree.get('phi', 0.))


def quadrature_variances(params: JpaParams) -> tuple[float, float]:
    """
    The squeezed and anti-squeezed variances
    :math:`(1 + 2n) e^{\\mp 2r}`.

    Example
    -------
    >>> quadrature_variances(JpaParams(0, .5))
    (2.0, 2.0)
    """
    noise = 1 + 2 * params.n
    return (float(noise * numpy.exp(-2 * params.r)),
            float(noise * numpy.exp(2 * params.r)))


def squeezing_level(params: JpaParams) -> SqueezingLevel:
    """
    The squeezing level :math:`S = -10 \\log_{10} [(1 + 2n) e^{-2r}]`.

    Example
    -------
    >>> round(float(squeezing_level(JpaParams(1.))), 4)
    8.6859
    """
    return SqueezingLevel(-10 * numpy.log10(1 + 2 * params.n)
                          + 20 * params.r / numpy.log(10))


def r_from_level(s: SqueezingLevel | float, n: float = 0.) -> float:
    """
    The squeezing factor :math:`r = \\ln [(1 + 2n) 10^{S / 10}] / 2`
    reaching a level ``s`` with ``n`` noise photons.

    Parameters:
        s : The squeezing level, in dB if a float.
        n : The number of noise photons.

    Raises:
        SqueezingRangeError : When :math:`S < -10 \\log_{10} (1 + 2n)`.

    Example
    -------
    >>> round(r_from_level(5.7), 5)
    0.65624
    >>> r_from_level(-3, .2)
    Traceback (most recent call last):
    ...
    tmspy.jpa.SqueezingRangeError: No r >= 0 gives -3.0 dB with n = 0.2: \
the level must be >= -1.46128 dB.
    """
    s_db = float(SqueezingLevel(float(s)))
    if not n >= 0:
        raise ValueError(messages.NEGATIVE_NOISE.format(n))
    r = (numpy.log1p(2 * n) + s_db * numpy.log(10) / 10) / 2
    if r < -1e-12:
        raise SqueezingRangeError(messages.NO_SQUEEZING_FACTOR.format(
            s_db, n, -10 * numpy.log10(1 + 2 * n)))
    return max(0., float(r))


def squeezed_thermal_cov(params: JpaParams) -> CovarianceMatrix:
    """
    The covariance :math:`(1 + 2n) R(\\phi / 2) \\mathrm{diag}(e^{-2r},
    e^{2r}) R(\\phi / 2)^T` of the JPA output.

    Example
    -------
    >>> V = squeezed_thermal_cov(JpaParams(0, .5))
    >>> assert V == CovarianceMatrix.thermal(.5)
    """
    R = rotation_matrix(params.phi / 2)
    entries = R @ numpy.diag(quadrature_variances(params)) @ R.T
    return CovarianceMatrix((entries + entries.T) / 2, check=False)


def thermal_cov(n: float) -> CovarianceMatrix:
    """ Single-mode thermal state with ``n`` photons, i.e. a bare JPA. """
    return CovarianceMatrix.thermal(n)


def tms_resource(
        s_db: float, n: float = 0., phi: float = 0.
        ) -> tuple[JpaParams, JpaParams]:
    """
    Two equal JPAs with orthogonal squeezing angles ``phi`` and
    ``phi + pi``, which a balanced beam splitter turns into a symmetric
    two-mode squeezed state.

    Example
    -------
    >>> j1, j2 = tms_resource(5.7)
    >>> assert j1.r == j2.r and j2.phi == numpy.pi
    """
    return (JpaParams.from_level(s_db, n, phi),
            JpaParams.from_level(s_db, n, phi + numpy.pi))


def tms_squeezing_level(nu: float) -> SqueezingLevel:
    """
    The two-mode squeezing level :math:`-10 \\log_{10} \\tilde\\nu` of a
    state with smallest partially transposed symplectic eigenvalue ``nu``.
    """
    return SqueezingLevel(-10 * numpy.log10(nu))


def nu_from_tms_level(s: SqueezingLevel | float) -> float:
    """ Inverse of :func:`tms_squeezing_level`. """
    return SqueezingLevel(float(s)).linear


def nk_from_tms_level(s: SqueezingLevel | float) -> float:
    """
    The negativity kernel of a two-mode state squeezed by ``s`` dB.

    Example
    -------
    >>> round(nk_from_tms_level(7.2), 3)
    2.124
    """
    return -.5 + .5 / nu_from_tms_level(s)


def path_photon_number(j1: JpaParams, j2: JpaParams) -> float:
    """
    The mean photon number in each beam splitter output,
    :math:`[(1 + 2n_1) \\cosh 2r_1 + (1 + 2n_2) \\cosh 2r_2] / 4 - 1/2`.

    Example
    -------
    >>> assert path_photon_number(JpaParams(), JpaParams()) == 0
    """
    total = (1 + 2 * j1.n) * numpy.cosh(2 * j1.r)\
        + (1 + 2 * j2.n) * numpy.cosh(2 * j2.r)
    return float(total / 4 - .5)


def noise_for_path_photons(s_db: float, n_tms: float) -> JpaParams:
    """
    The JPA which, squeezed by ``s_db`` and paired with an orthogonal copy,
    puts ``n_tms`` photons in each path.

    With :math:`\\mu = 1 + 2 n_{TMS}` and :math:`s = 10^{-S / 10}`, the noise
    factor :math:`a = 1 + 2n` solves :math:`a^2 = s (2 \\mu - s)`.

    Example
    -------
    >>> params = noise_for_path_photons(8., 2.7)
    >>> round(params.n, 4), round(params.r, 4)
    (0.2077, 1.0947)
    """
    s, mu = SqueezingLevel(s_db).linear, 1 + 2 * n_tms
    a_squared = s * (2 * mu - s)
    if not a_squared >= 1 or s > numpy.sqrt(a_squared):
        raise SqueezingRangeError(
            messages.NO_NOISE_SOLUTION.format(s_db, n_tms))
    a = numpy.sqrt(a_squared)
    return JpaParams(max(0., numpy.log(a / s) / 2), (a - 1) / 2)
