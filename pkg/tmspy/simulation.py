# -*- coding: utf-8 -*-

"""
Monte Carlo simulation of the dual-path receiver: band-limited Gaussian
envelopes for the two outputs of the hybrid ring, a digital delay on the
second path, noisy detection chains, and the reconstruction of signal
moments against a vacuum reference.

Envelopes are synthesised in the frequency domain with a flat spectrum of
full width ``bandwidth_hz``, so that their normalised autocorrelation is
:math:`\\sinc(\\pi B \\tau)` and the estimates agree with the closed
forms of :mod:`tmspy.dephasing` for :math:`\\Omega = \\pi B`.

Every record draws from its own counter-based stream, seeded by
``(seed, stream, record)``, so that outputs do not depend on the number of
worker threads.

Summary
-------

.. autosummary::
    :template: class.rst
    :nosignatures:
    :toctree:

    SimulationConfig
    MeasurementRecord
    CovarianceEstimate
    ConfigError

.. admonition:: Functions

    .. autosummary::
        :template: function.rst
        :nosignatures:
        :toctree:

        calibration_config
        generate_records
        reconstruct_covariance
        covariance_stderr
        estimate_covariance
        estimate_coherence
        estimate_nk_curve
        estimate_g2_curve
        envelope_autocorrelation

Example
-------
>>> from tmspy.jpa import JpaParams
>>> sim = SimulationConfig(JpaParams(), JpaParams(), bandwidth_hz=1e6,
...                        sample_rate_hz=8e6, n_samples=4096, n_records=10)
>>> records = generate_records(sim)
>>> records.chains.shape
(10, 2, 4096)
>>> V = reconstruct_covariance(records, generate_records(sim, stream=1))
>>> assert numpy.allclose(V.entries, numpy.eye(4), atol=.2)
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields, replace
from functools import partial

import numpy

from tmspy import config, messages
from tmspy.dephasing import (
    DegenerateStateError, DephasingCurve, FilterSpec, delayed_tms_cov)
from tmspy.gaussian import CovarianceMatrix, pt_symplectic_eigenvalue
from tmspy.jpa import JpaParams, SqueezingRangeError
from tmspy.utils import assert_isinstance, factory_name

logger = logging.getLogger(__name__)

SIGNAL_STREAM, CALIBRATION_STREAM = 0, 1
JPA_KEYS = ("factory", "r", "s_db", "n", "phi")
REQUIRED_KEYS = (
    "j1", "bandwidth_hz", "sample_rate_hz", "n_samples", "n_records")
MATCHING_FIELDS = (
    "bandwidth_hz", "sample_rate_hz", "n_samples", "n_records",
    "amp_noise_photons", "seed")


class ConfigError(ValueError):
    """
    An invalid simulation configuration.

    Parameters:
        pointer : The JSON pointer of the offending field.
        detail : What is wrong with it.
    """
    def __init__(self, pointer: str, detail: str):
        self.pointer, self.detail = pointer, detail
        super().__init__(messages.CONFIG_ERROR.format(pointer, detail))


def _number(value, pointer: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float))\
            or not numpy.isfinite(value):
        raise ConfigError(pointer, messages.BAD_VALUE.format(value))
    return float(value)


def _count(value, pointer: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise ConfigError(pointer, messages.NON_POSITIVE_COUNT.format(value))
    return value


def _unknown_keys(tree: dict, allowed, pointer: str):
    if not isinstance(tree, dict):
        raise ConfigError(pointer, messages.BAD_VALUE.format(tree))
    for key in tree:
        if key not in allowed:
            raise ConfigError(
                "{}/{}".format(pointer, key), messages.UNKNOWN_KEY)


def _jpa_from_tree(tree: dict, pointer: str) -> JpaParams:
    _unknown_keys(tree, JPA_KEYS, pointer)
    if "r" in tree and "s_db" in tree:
        raise ConfigError(pointer, messages.BOTH_R_AND_LEVEL)
    values = {key: _number(tree[key], "{}/{}".format(pointer, key))
              for key in JPA_KEYS[1:] if key in tree}
    for key in ("r", "n"):
        if values.get(key, 0.) < 0:
            raise ConfigError("{}/{}".format(pointer, key),
                              messages.BAD_VALUE.format(values[key]))
    n, phi = values.get("n", 0.), values.get("phi", 0.)
    try:
        if "s_db" in values:
            return JpaParams.from_level(values["s_db"], n, phi)
        return JpaParams(values.get("r", 0.), n, phi)
    except SqueezingRangeError as error:
        raise ConfigError(pointer + "/s_db", str(error)) from error


@dataclass(frozen=True)
class SimulationConfig:
    """
    The parameters of a simulated measurement.

    Parameters:
        j1 : The first JPA.
        j2 : The second JPA, the vacuum for single-mode measurements.
        bandwidth_hz : The full width :math:`B` of the flat filter.
        sample_rate_hz : The sample rate, at least ``8 B``.
        n_samples : The samples per record, spanning at least ``20 / B``.
        n_records : The number of independent records.
        amp_noise_photons : The noise photons added by each detection
            chain, ``None`` for ideal chains.
        delay_s : The delay of the second path in seconds.
        seed : The master seed, a 64-bit unsigned integer.
        carrier_hz : The carrier frequency, metadata only.

    Example
    -------
    >>> SimulationConfig(JpaParams(), JpaParams(), 1e6, 4e6, 1024, 10)
    Traceback (most recent call last):
    ...
    tmspy.simulation.ConfigError: Invalid configuration at \
'/sample_rate_hz': Sample rate must be >= 8 times the bandwidth, got \
4000000.0 Hz for 1000000.0 Hz.
    """
    j1: JpaParams
    j2: JpaParams
    bandwidth_hz: float
    sample_rate_hz: float
    n_samples: int
    n_records: int
    amp_noise_photons: float = None
    delay_s: float = 0.
    seed: int = 0
    carrier_hz: float = config.CARRIER_FREQUENCY_HZ

    def __post_init__(self):
        for name in ("j1", "j2"):
            assert_isinstance(getattr(self, name), JpaParams)
        for name in ("bandwidth_hz", "sample_rate_hz", "delay_s",
                     "carrier_hz"):
            object.__setattr__(
                self, name, _number(getattr(self, name), "/" + name))
        for name in ("n_samples", "n_records"):
            _count(getattr(self, name), "/" + name)
        if self.amp_noise_photons is not None:
            noise = _number(self.amp_noise_photons, "/amp_noise_photons")
            if noise < 0:
                raise ConfigError("/amp_noise_photons",
                                  messages.NEGATIVE_NOISE.format(noise))
            object.__setattr__(self, "amp_noise_photons", noise)
        if isinstance(self.seed, bool) or not isinstance(self.seed, int)\
                or not 0 <= self.seed < 2 ** 64:
            raise ConfigError("/seed", messages.BAD_VALUE.format(self.seed))
        if not self.bandwidth_hz > 0:
            raise ConfigError(
                "/bandwidth_hz", messages.BAD_VALUE.format(self.bandwidth_hz))
        factor = config.MIN_SAMPLE_RATE_FACTOR
        if self.sample_rate_hz < factor * self.bandwidth_hz:
            raise ConfigError("/sample_rate_hz", messages.SAMPLE_RATE_TOO_LOW
                              .format(factor, self.sample_rate_hz,
                                      self.bandwidth_hz))
        span = self.duration_s * self.bandwidth_hz
        if span < config.MIN_RECORD_CORRELATION_TIMES:
            raise ConfigError("/n_samples", messages.RECORD_TOO_SHORT.format(
                config.MIN_RECORD_CORRELATION_TIMES, span))

    @property
    def duration_s(self) -> float:
        """ The duration of a record. """
        return self.n_samples / self.sample_rate_hz

    @property
    def filter(self) -> FilterSpec:
        """ The equivalent filter, with :math:`\\Omega = \\pi B`. """
        return FilterSpec.from_bandwidth(self.bandwidth_hz)

    @property
    def padded_length(self) -> int:
        """ The length of the spectral synthesis grid. """
        return config.SYNTHESIS_PADDING * self.n_samples

    def to_tree(self) -> dict:
        return {
            'factory': factory_name(type(self)),
            'j1': self.j1.to_tree(), 'j2': self.j2.to_tree(),
            **{field.name: getattr(self, field.name)
               for field in fields(self) if field.name not in ("j1", "j2")}}

    @classmethod
    def from_tree(cls, tree: dict) -> SimulationConfig:
        """
        Validate and decode a JSON configuration, reporting the offending
        field as a JSON pointer. JPAs take either ``r`` or ``s_db``, with
        optional ``n`` and ``phi``, and ``j2`` defaults to the vacuum.

        Example
        -------
        >>> tree = {"j1": {"s_db": 5.7}, "bandwidth_hz": 1e6,
        ...         "sample_rate_hz": 8e6, "n_samples": 1024,
        ...         "n_records": 10, "colour": "blue"}
        >>> SimulationConfig.from_tree(tree)
        Traceback (most recent call last):
        ...
        tmspy.simulation.ConfigError: Invalid configuration at '/colour': \
Unknown key.
        """
        allowed = ("factory", "j2", "amp_noise_photons", "delay_s", "seed",
                   "carrier_hz") + REQUIRED_KEYS
        _unknown_keys(tree, allowed, "")
        for key in REQUIRED_KEYS:
            if key not in tree:
                raise ConfigError("/" + key, messages.MISSING_KEY)
        j1 = _jpa_from_tree(tree["j1"], "/j1")
        j2 = _jpa_from_tree(tree.get("j2", {}), "/j2")
        noise = tree.get("amp_noise_photons")
        return cls(
            j1, j2, _number(tree["bandwidth_hz"], "/bandwidth_hz"),
            _number(tree["sample_rate_hz"], "/sample_rate_hz"),
            _count(tree["n_samples"], "/n_samples"),
            _count(tree["n_records"], "/n_records"),
            None if noise is None else _number(noise, "/amp_noise_photons"),
            _number(tree.get("delay_s", 0.), "/delay_s"),
            tree.get("seed", 0),
            _number(tree.get("carrier_hz", config.CARRIER_FREQUENCY_HZ),
                    "/carrier_hz"))


@dataclass(frozen=True)
class MeasurementRecord:
    """
    The complex envelopes :math:`q + i p` recorded by the two detection
    chains, of shape ``(n_records, 2, n_samples)``.

    Parameters:
        config : The simulated configuration.
        chains : The envelope samples, read-only.
        stream : The random stream the records were drawn from.
    """
    config: SimulationConfig
    chains: numpy.ndarray
    stream: int = SIGNAL_STREAM

    def __post_init__(self):
        shape = (self.config.n_records, 2, self.config.n_samples)
        if self.chains.shape != shape:
            raise ValueError(messages.LENGTH_MISMATCH.format(
                shape, self.chains.shape))
        if not numpy.isfinite(self.chains).all():
            raise ValueError(messages.BAD_VALUE.format("chains"))
        self.chains.flags.writeable = False

    @property
    def seed(self) -> tuple[int, int]:
        """ The seed provenance ``(seed, stream)``. """
        return self.config.seed, self.stream


def calibration_config(sim: SimulationConfig) -> SimulationConfig:
    """
    The vacuum reference of a configuration: both JPAs off, no delay.

    Example
    -------
    >>> sim = SimulationConfig(JpaParams(.5), JpaParams(.5, phi=numpy.pi),
    ...                        1e6, 8e6, 1024, 10, delay_s=1e-7)
    >>> reference = calibration_config(sim)
    >>> reference.j1.is_vacuum, reference.delay_s
    (True, 0.0)
    """
    assert_isinstance(sim, SimulationConfig)
    return replace(sim, j1=JpaParams(), j2=JpaParams(), delay_s=0.)


def _band_weights(sim: SimulationConfig):
    frequencies = numpy.fft.fftfreq(
        sim.padded_length, d=1 / sim.sample_rate_hz)
    spacing = sim.sample_rate_hz / sim.padded_length
    half = sim.bandwidth_hz / 2
    lo = numpy.clip(frequencies - spacing / 2, -half, half)
    hi = numpy.clip(frequencies + spacing / 2, -half, half)
    weights = (hi - lo) / spacing
    return frequencies, weights / weights.sum()


def _unit_processes(spectra, n_samples: int):
    """ Pairs of independent unit-variance real processes per spectrum. """
    padded = spectra.shape[-1]
    z = numpy.fft.ifft(spectra, axis=-1)[:, :n_samples] * padded
    return numpy.sqrt(2) * numpy.stack(
        [z.real, z.imag], axis=1).reshape(-1, n_samples)


def _generate_record(sim: SimulationConfig, stream: int, frequencies,
                     amplitudes, cholesky, index: int):
    sequence = numpy.random.SeedSequence(sim.seed, spawn_key=(stream, index))
    rng = numpy.random.Generator(numpy.random.Philox(sequence))
    draws = rng.standard_normal((4, 2, sim.padded_length))
    spectra = amplitudes * (draws[:, 0] + 1j * draws[:, 1]) / numpy.sqrt(2)
    signal = _unit_processes(spectra[:2], sim.n_samples)
    if sim.delay_s:
        ramp = numpy.exp(-2j * numpy.pi * frequencies * sim.delay_s)
        delayed = _unit_processes(spectra[:2] * ramp, sim.n_samples)
    else:
        delayed = signal
    quadratures = numpy.vstack([cholesky[:2] @ signal, cholesky[2:] @ delayed])
    if sim.amp_noise_photons is not None:
        quadratures += numpy.sqrt(1 + 2 * sim.amp_noise_photons)\
            * _unit_processes(spectra[2:], sim.n_samples)
    logger.debug("record %d of stream %d", index, stream)
    return quadratures[0::2] + 1j * quadratures[1::2]


def generate_records(sim: SimulationConfig, stream: int = SIGNAL_STREAM,
                     workers: int = None) -> MeasurementRecord:
    """
    Simulate the detection chains.

    Each record draws independent circular Gaussian spectra on a padded
    frequency grid, weighted by the overlap of each bin with the band,
    mixes them by the Cholesky factor of the two-mode covariance at zero
    delay, delays the second path by a phase ramp and adds band-limited
    amplifier noise of variance ``1 + 2 amp_noise_photons``.

    Parameters:
        sim : The configuration.
        stream : The random stream, distinct for calibration records.
        workers : The number of threads, by default ``DEFAULT_WORKERS``.

    Example
    -------
    >>> sim = SimulationConfig(JpaParams(.5), JpaParams(.5, phi=numpy.pi),
    ...                        1e6, 8e6, 1024, 2, amp_noise_photons=1.)
    >>> first, second = generate_records(sim), generate_records(sim, 0, 2)
    >>> assert (first.chains == second.chains).all()
    """
    assert_isinstance(sim, SimulationConfig)
    frequencies, weights = _band_weights(sim)
    state = delayed_tms_cov(sim.j1, sim.j2, sim.filter, 0.)
    cholesky = numpy.linalg.cholesky(state.entries)
    generate = partial(_generate_record, sim, stream, frequencies,
                       numpy.sqrt(weights), cholesky)
    with ThreadPoolExecutor(
            max_workers=workers or config.DEFAULT_WORKERS) as pool:
        chains = numpy.stack(list(pool.map(generate, range(sim.n_records))))
    logger.info("generated %d records of %d samples on stream %d",
                sim.n_records, sim.n_samples, stream)
    return MeasurementRecord(sim, chains, stream)


def _moments(records: MeasurementRecord) -> numpy.ndarray:
    """ The quadrature second moments of each record. """
    chains = records.chains
    n_records, _, n_samples = chains.shape
    quadratures = numpy.stack([chains.real, chains.imag], axis=2).reshape(
        n_records, 4, n_samples)
    return numpy.einsum(
        'rin,rjn->rij', quadratures, quadratures) / n_samples


def _intensity_products(records: MeasurementRecord) -> numpy.ndarray:
    """
    The equal-time products :math:`|D_1|^2 |D_2|^2` of the detected
    amplitudes :math:`D_k = c_k / 2`, averaged over each record.
    """
    powers = numpy.abs(records.chains / 2) ** 2
    return (powers[:, 0] * powers[:, 1]).mean(axis=-1)


def _statistics(records: MeasurementRecord):
    return _moments(records), _intensity_products(records)


def _reconstruct(moments, reference, index=slice(None)) -> CovarianceMatrix:
    entries = moments[index].mean(axis=0) - reference[index].mean(axis=0)\
        + numpy.eye(4)
    return CovarianceMatrix((entries + entries.T) / 2, check=False)


def _assert_compatible(records: MeasurementRecord,
                       calibration: MeasurementRecord):
    for record in (records, calibration):
        assert_isinstance(record, MeasurementRecord)
    for name in MATCHING_FIELDS:
        if getattr(records.config, name) != getattr(calibration.config, name):
            raise ValueError(messages.CONFIG_MISMATCH.format(name))
    if not (calibration.config.j1.is_vacuum
            and calibration.config.j2.is_vacuum):
        raise ValueError(messages.CALIBRATION_NOT_VACUUM)


def reconstruct_covariance(records: MeasurementRecord,
                           calibration: MeasurementRecord
                           ) -> CovarianceMatrix:
    """
    The covariance of the signal modes,
    :math:`\\hat V = \\hat V_{meas} - \\hat V_{cal} + I`, where the vacuum
    reference removes the amplifier noise and the vacuum of the chains.
    Statistical estimates need not be physical, so the result is not
    checked.

    Parameters:
        records : The measured records.
        calibration : Records of the vacuum reference, with the same
            configuration otherwise.
    """
    _assert_compatible(records, calibration)
    return _reconstruct(_moments(records), _moments(calibration))


def _batches(n_records: int, n_batches: int):
    if n_records < n_batches:
        raise ValueError(messages.TOO_FEW_RECORDS.format(
            n_batches, n_records))
    return numpy.array_split(numpy.arange(n_records), n_batches)


def covariance_stderr(records: MeasurementRecord,
                      calibration: MeasurementRecord,
                      n_batches: int = config.MIN_BATCHES) -> numpy.ndarray:
    """
    The standard errors of the entries of :func:`reconstruct_covariance`,
    from the spread of the estimates over batches of records.
    """
    _assert_compatible(records, calibration)
    moments, reference = _moments(records), _moments(calibration)
    estimates = numpy.stack([
        _reconstruct(moments, reference, index).entries
        for index in _batches(records.config.n_records, n_batches)])
    return estimates.std(axis=0, ddof=1) / numpy.sqrt(n_batches)


@dataclass(frozen=True)
class CovarianceEstimate:
    """
    A reconstructed covariance with the standard errors of its entries,
    serialised with the convention tag of :class:`CovarianceMatrix`.

    Parameters:
        state : The reconstructed covariance, not necessarily physical.
        stderr : The standard errors, shaped as the entries.
        config : The simulated measurement.
    """
    state: CovarianceMatrix
    stderr: numpy.ndarray
    config: SimulationConfig

    def to_tree(self) -> dict:
        return {
            **self.state.to_tree(), 'factory': factory_name(type(self)),
            'stderr': [float(x) for x in numpy.ravel(self.stderr)],
            'delay_s': self.config.delay_s, 'config': self.config.to_tree()}

    @classmethod
    def from_tree(cls, tree: dict) -> CovarianceEstimate:
        state = CovarianceMatrix.from_tree(tree, check=False)
        stderr = numpy.reshape(tree['stderr'], state.entries.shape)
        return cls(state, stderr, SimulationConfig.from_tree(tree['config']))


def estimate_covariance(records: MeasurementRecord,
                        calibration: MeasurementRecord,
                        n_batches: int = config.MIN_BATCHES
                        ) -> CovarianceEstimate:
    """
    The reconstructed covariance of :func:`reconstruct_covariance` with the
    standard errors of :func:`covariance_stderr`.

    Example
    -------
    >>> from tmspy.utils import dumps, loads
    >>> sim = SimulationConfig(JpaParams(.3), JpaParams(.3, phi=numpy.pi),
    ...                        1e6, 8e6, 4096, 10)
    >>> estimate = estimate_covariance(
    ...     generate_records(sim), generate_records(sim, stream=1))
    >>> assert (estimate.stderr > 0).all()
    >>> assert loads(dumps(estimate)).state == estimate.state
    """
    return CovarianceEstimate(
        reconstruct_covariance(records, calibration),
        covariance_stderr(records, calibration, n_batches), records.config)


def _negativity_kernel(signal, reference, index=slice(None)) -> float:
    state = _reconstruct(signal[0], reference[0], index)
    return -.5 + .5 / pt_symplectic_eigenvalue(state)


def _path_powers(moments) -> numpy.ndarray:
    """ The powers :math:`\\langle |D_k|^2 \\rangle` of both paths. """
    return numpy.array([moments[0, 0] + moments[1, 1],
                        moments[2, 2] + moments[3, 3]]) / 4


def _coherence(signal, reference, index=slice(None)) -> float:
    """
    Second order coherence between the paths from fourth-order moments.

    The detected amplitudes are :math:`D_k = a_k + h_k` with noise
    :math:`h_k` independent between the chains, of power :math:`Z_k`
    measured on the vacuum reference. The normally ordered moment is then

    .. math::
        \\langle a_1^\\dagger a_2^\\dagger a_2 a_1 \\rangle
        = \\langle |D_1|^2 |D_2|^2 \\rangle
        - \\langle |D_1|^2 \\rangle Z_2 - \\langle |D_2|^2 \\rangle Z_1
        + Z_1 Z_2

    and is normalised by the reconstructed photon numbers
    :math:`\\langle |D_k|^2 \\rangle - Z_k`.
    """
    moments, products = signal[0][index], signal[1][index]
    power = _path_powers(moments.mean(axis=0))
    noise = _path_powers(reference[0][index].mean(axis=0))
    photons = power - noise
    if not photons[0] * photons[1] > 0:
        raise DegenerateStateError(messages.VACUUM_G2)
    joint = products.mean() - power[0] * noise[1] - power[1] * noise[0]\
        + noise[0] * noise[1]
    return float(joint / (photons[0] * photons[1]))


def estimate_coherence(records: MeasurementRecord,
                       calibration: MeasurementRecord) -> float:
    """
    The second order coherence between the two chains of ``records``, from
    their equal-time intensity products against a vacuum reference.

    Example
    -------
    >>> sim = SimulationConfig(JpaParams(0., 3.), JpaParams(), 1e6, 8e6,
    ...                        8192, 10)
    >>> reference = generate_records(calibration_config(sim), stream=1)
    >>> g2 = estimate_coherence(generate_records(sim), reference)
    >>> assert abs(g2 - 2) < .2
    """
    _assert_compatible(records, calibration)
    return _coherence(_statistics(records), _statistics(calibration))


def _estimate_curve(kind: str, statistic, sim: SimulationConfig, tau_grid,
                    n_batches: int, workers: int) -> DephasingCurve:
    taus = numpy.array(tau_grid, dtype=float).reshape(-1)
    if (numpy.diff(taus) <= 0).any():
        raise ValueError(messages.NOT_INCREASING)
    batches = _batches(sim.n_records, n_batches)
    reference = _statistics(generate_records(
        calibration_config(sim), CALIBRATION_STREAM, workers))
    values, stderr = [], []
    for tau in taus:
        signal = _statistics(generate_records(
            replace(sim, delay_s=float(tau)), SIGNAL_STREAM, workers))
        values.append(statistic(signal, reference))
        estimates = [statistic(signal, reference, index)
                     for index in batches]
        stderr.append(numpy.std(estimates, ddof=1) / numpy.sqrt(n_batches))
        logger.debug("%s(%.6g s) = %.6g +- %.3g",
                     kind, tau, values[-1], stderr[-1])
    return DephasingCurve(
        kind, taus, values, stderr, params=(sim.j1, sim.j2, sim.filter))


def estimate_nk_curve(sim: SimulationConfig, tau_grid,
                      n_batches: int = config.MIN_BATCHES,
                      workers: int = None) -> DephasingCurve:
    """
    The negativity kernel of the reconstructed covariance at each delay,
    with standard errors from batches of records.

    Parameters:
        sim : The configuration, its delay is ignored.
        tau_grid : The delays, strictly increasing.
        n_batches : The number of batches, at most ``n_records``.
        workers : The number of threads.
    """
    assert_isinstance(sim, SimulationConfig)
    return _estimate_curve(
        "nk", _negativity_kernel, sim, tau_grid, n_batches, workers)


def estimate_g2_curve(sim: SimulationConfig, tau_grid,
                      n_batches: int = config.MIN_BATCHES,
                      workers: int = None) -> DephasingCurve:
    """
    The second order coherence between the paths at each delay, for a
    single JPA whose partner is in the vacuum. It is estimated from the
    equal-time intensity products of the records, with the noise of the
    vacuum reference subtracted, and makes no Gaussian assumption.

    Raises:
        ValueError : If the second JPA is not in the vacuum.
        DegenerateStateError : If the paths carry no photons.
    """
    assert_isinstance(sim, SimulationConfig)
    if not sim.j2.is_vacuum:
        raise ValueError(messages.G2_NEEDS_VACUUM)
    return _estimate_curve(
        "g2", _coherence, sim, tau_grid, n_batches, workers)


def envelope_autocorrelation(records: MeasurementRecord, chain: int = 0,
                             lags=(0, )) -> numpy.ndarray:
    """
    The normalised autocorrelation
    :math:`\\mathrm{Re} \\langle c^*(t) c(t + \\ell) \\rangle /
    \\langle |c|^2 \\rangle` of a chain at lags given in samples.

    Example
    -------
    >>> sim = SimulationConfig(JpaParams(), JpaParams(), 1e6, 8e6, 4096, 4)
    >>> rho = envelope_autocorrelation(generate_records(sim), 0, [0, 8])
    >>> assert abs(rho[0] - 1) < 1e-12
    >>> assert abs(rho[1]) < .1
    """
    assert_isinstance(records, MeasurementRecord)
    if chain not in (0, 1):
        raise IndexError(messages.MODE_OUT_OF_RANGE.format(chain, 2))
    envelope = records.chains[:, chain]
    n_samples = envelope.shape[1]
    lags = numpy.array(lags, dtype=int).reshape(-1)
    if ((lags < 0) | (lags >= n_samples)).any():
        raise ValueError(messages.LAG_OUT_OF_RANGE.format(n_samples, lags))
    power = numpy.mean(numpy.abs(envelope) ** 2)
    return numpy.array([
        numpy.mean((envelope[:, :n_samples - lag].conj()
                    * envelope[:, lag:]).real) / power for lag in lags])
