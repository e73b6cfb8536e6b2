# -*- coding: utf-8 -*-

"""
Fidelity of continuous-variable protocols run over a delayed two-mode
squeezed resource: remote state preparation (RSP) and coherent-state
quantum teleportation (QT).

Summary
-------

.. autosummary::
    :template: class.rst
    :nosignatures:
    :toctree:

    ProtocolResult

.. admonition:: Functions

    .. autosummary::
        :template: function.rst
        :nosignatures:
        :toctree:

        rsp_fidelity
        qt_fidelity
        fidelity_sweep
        fidelity_drop_delay

Example
-------
>>> from tmspy.jpa import tms_resource
>>> from tmspy.dephasing import FilterSpec
>>> j1, j2 = tms_resource(5.7)
>>> filter = FilterSpec.from_bandwidth(430e3)
>>> rsp_fidelity(j1, j2, filter, 0).fidelity
1.0
>>> round(qt_fidelity(j1, j2, filter, 0).fidelity, 5)
0.78793
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy
from scipy.optimize import bisect

from tmspy import config, messages
from tmspy.dephasing import FilterSpec, delayed_tms_cov
from tmspy.gaussian import (
    conditional_covariance_homodyne, gaussian_fidelity_single_mode,
    pt_symplectic_eigenvalue)
from tmspy.jpa import JpaParams
from tmspy.utils import factory_name

PROTOCOLS = ("rsp", "qt")


@dataclass(frozen=True)
class ProtocolResult:
    """
    The fidelity of a protocol at a given delay.

    Parameters:
        protocol : Either ``"rsp"`` or ``"qt"``.
        tau : The delay in seconds.
        fidelity : The fidelity, in :math:`[0, 1]`.
        resource : The two JPAs and the filter.
    """
    protocol: str
    tau: float
    fidelity: float
    resource: tuple[JpaParams, JpaParams, FilterSpec]

    def to_tree(self) -> dict:
        j1, j2, filter = self.resource
        return {
            'factory': factory_name(type(self)),
            'protocol': self.protocol, 'tau': self.tau,
            'fidelity': self.fidelity, 'resource': [
                j1.to_tree(), j2.to_tree(), filter.to_tree()]}


def _assert_protocol(protocol: str):
    if protocol not in PROTOCOLS:
        raise ValueError(messages.UNKNOWN_PROTOCOL.format(protocol))


def rsp_fidelity(j1: JpaParams, j2: JpaParams, filter: FilterSpec,
                 tau: float, measured_quadrature: str = "q"
                 ) -> ProtocolResult:
    """
    Remote state preparation: ideal homodyne detection of the first mode
    steers the second one. The fidelity compares the state prepared after a
    delay ``tau`` with the one prepared without delay.

    Parameters:
        j1 : The first JPA.
        j2 : The second JPA.
        filter : The measurement filter.
        tau : The delay in seconds.
        measured_quadrature : The quadrature measured on the first mode.

    Example
    -------
    >>> from tmspy.jpa import tms_resource
    >>> j1, j2 = tms_resource(5.7)
    >>> filter = FilterSpec(1e6)
    >>> F = rsp_fidelity(j1, j2, filter, filter.first_zero).fidelity
    >>> mu = numpy.cosh(2 * j1.r)
    >>> assert abs(F - numpy.sqrt(2 / (1 + mu ** 2))) < 1e-12
    """
    target, prepared = (conditional_covariance_homodyne(
        delayed_tms_cov(j1, j2, filter, t), 0, measured_quadrature)
        for t in (0., tau))
    fidelity = gaussian_fidelity_single_mode(prepared, target)
    return ProtocolResult("rsp", float(tau), fidelity, (j1, j2, filter))


def qt_fidelity(j1: JpaParams, j2: JpaParams, filter: FilterSpec,
                tau: float) -> ProtocolResult:
    """
    Unit-gain teleportation of coherent states,
    :math:`F = 1 / (1 + \\min\\{\\tilde\\nu, 1\\})`, which is the classical
    bound 1/2 for separable resources.

    Example
    -------
    >>> from tmspy.jpa import JpaParams
    >>> vacuum = JpaParams()
    >>> round(qt_fidelity(vacuum, vacuum, FilterSpec(1e6), 0).fidelity, 12)
    0.5
    """
    nu = pt_symplectic_eigenvalue(delayed_tms_cov(j1, j2, filter, tau))
    fidelity = 1 / (1 + min(nu, 1.))
    return ProtocolResult("qt", float(tau), fidelity, (j1, j2, filter))


def _fidelity(protocol: str, j1, j2, filter, tau) -> ProtocolResult:
    _assert_protocol(protocol)
    method = rsp_fidelity if protocol == "rsp" else qt_fidelity
    return method(j1, j2, filter, tau)


def fidelity_sweep(protocol: str, j1: JpaParams, j2: JpaParams,
                   filter: FilterSpec, tau_grid) -> list[ProtocolResult]:
    """
    The fidelity of a protocol on a strictly increasing grid of delays.

    Example
    -------
    >>> from tmspy.jpa import tms_resource
    >>> sweep = fidelity_sweep("qt", *tms_resource(5.7), FilterSpec(1e6),
    ...                        [0, 1e-6, 2e-6])
    >>> fidelities = [result.fidelity for result in sweep]
    >>> assert fidelities == sorted(fidelities, reverse=True)
    """
    _assert_protocol(protocol)
    taus = numpy.array(tau_grid, dtype=float).reshape(-1)
    if (numpy.diff(taus) <= 0).any():
        raise ValueError(messages.NOT_INCREASING)
    return [_fidelity(protocol, j1, j2, filter, tau) for tau in taus]


def fidelity_drop_delay(protocol: str, j1: JpaParams, j2: JpaParams,
                        filter: FilterSpec, level: float) -> float:
    """
    The smallest delay on the first lobe of the sinc at which the fidelity
    falls to ``level``, zero if it starts below.

    Raises:
        ValueError : If the fidelity stays above ``level`` on the lobe.

    Example
    -------
    >>> from tmspy.jpa import tms_resource
    >>> j1, j2 = tms_resource(5.7)
    >>> filter = FilterSpec(1e6)
    >>> tau = fidelity_drop_delay("rsp", j1, j2, filter, .95)
    >>> assert abs(rsp_fidelity(j1, j2, filter, tau).fidelity - .95) < 1e-9
    """
    _assert_protocol(protocol)

    def excess(x):
        return _fidelity(
            protocol, j1, j2, filter, x / filter.omega).fidelity - level
    if excess(0.) <= 0:
        return 0.
    if excess(numpy.pi) > 0:
        raise ValueError(messages.FIDELITY_NOT_REACHED.format(level))
    x = bisect(excess, 0., numpy.pi, xtol=config.BISECTION_XTOL,
               rtol=config.BISECTION_RTOL, maxiter=config.BISECTION_MAXITER)
    return float(x / filter.omega)
