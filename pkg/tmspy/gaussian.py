# -*- coding: utf-8 -*-

"""
Zero-mean Gaussian states of ``N`` bosonic modes, described by their
covariance matrix in the convention where the vacuum is the identity.

Summary
-------

.. autosummary::
    :template: class.rst
    :nosignatures:
    :toctree:

    CovarianceMatrix
    WignerMarginal
    PhysicalityError

.. admonition:: Functions

    .. autosummary::
        :template: function.rst
        :nosignatures:
        :toctree:

        apply
        symplectic_eigenvalues
        partial_transpose
        pt_symplectic_eigenvalue
        negativity_kernel_from_cov
        negativity
        logarithmic_negativity
        conditional_covariance_homodyne
        gaussian_fidelity_single_mode
        wigner_marginal_grid

Example
-------
Two orthogonally squeezed vacua interfere on a balanced beam splitter into a
two-mode squeezed state.

>>> import numpy as np
>>> from tmspy.symplectic import squeezer_transform, beam_splitter_50_50
>>> r = .8
>>> squeezers = squeezer_transform(r) @ squeezer_transform(r, np.pi)
>>> tms = apply(squeezers >> beam_splitter_50_50(), CovarianceMatrix.vacuum(2))
>>> assert np.allclose(symplectic_eigenvalues(tms), [1, 1])
>>> assert np.isclose(pt_symplectic_eigenvalue(tms), np.exp(-2 * r))
>>> assert np.isclose(negativity_kernel_from_cov(tms), np.sinh(2 * r) / 2
...                   + np.cosh(2 * r) / 2 - .5)
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy
from scipy.linalg import block_diag
from scipy.stats import multivariate_normal

from tmspy import config, messages
from tmspy.cat import AxiomError, Whiskerable
from tmspy.symplectic import Symplectic, symplectic_form
from tmspy.utils import assert_isinstance, factory_name, format_float

QUADRATURES = ("q", "p")


class PhysicalityError(ValueError):
    """
    When a matrix is not the covariance of a quantum state, or a Gaussian
    operation on it is singular.
    """


class CovarianceMatrix(Whiskerable):
    """
    The covariance matrix of a zero-mean Gaussian state on ``N`` modes,
    ordered as :math:`(q_1, p_1, \\dots, q_N, p_N)` with vacuum :math:`I`.

    Parameters:
        entries : The real symmetric ``2N x 2N`` matrix.
        check : Whether to check symmetry, positivity and the uncertainty
            relation. Derived matrices such as partial transposes are built
            with ``check=False``.

    Example
    -------
    >>> V = CovarianceMatrix.thermal(.5)
    >>> V
    CovarianceMatrix([[2., 0.], [0., 2.]])
    >>> (V @ 1).n_modes
    2
    >>> CovarianceMatrix([[.5, 0], [0, .5]])
    Traceback (most recent call last):
    ...
    tmspy.gaussian.PhysicalityError: Covariance matrix violates the \
uncertainty relation: smallest symplectic eigenvalue 0.5 < 1.
    """
    convention = config.CONVENTION

    def __init__(self, entries, check: bool = True):
        entries = numpy.array(entries, dtype=float)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]\
                or entries.shape[0] % 2 or not entries.size:
            raise AxiomError(messages.NOT_SQUARE.format(entries.shape))
        entries.flags.writeable = False
        self.entries = entries
        if check:
            self.check()

    @property
    def n_modes(self) -> int:
        """ The number of modes. """
        return self.entries.shape[0] // 2

    dom = cod = n_modes

    def check(self):
        """
        Raise :class:`PhysicalityError` unless the matrix is symmetric,
        positive definite and satisfies the uncertainty relation.
        """
        assert_symmetric(self.entries)
        assert_positive_definite(self.entries)
        nu = symplectic_eigenvalues(self)[0]
        if nu < 1 - config.PHYSICALITY_TOL:
            raise PhysicalityError(messages.NOT_PHYSICAL.format(nu))

    def is_physical(self) -> bool:
        """ Whether the matrix is the covariance of a quantum state. """
        try:
            self.check()
        except PhysicalityError:
            return False
        return True

    def __repr__(self):
        return "CovarianceMatrix({})".format(
            numpy.array2string(self.entries, separator=', ')
            .replace('\n', '').replace('  ', ' '))

    def __eq__(self, other):
        return isinstance(other, CovarianceMatrix)\
            and self.entries.shape == other.entries.shape\
            and (self.entries == other.entries).all()

    def __hash__(self):
        return hash(self.entries.tobytes())

    def is_close(self, other: CovarianceMatrix, atol: float = 1e-12) -> bool:
        """ Whether two covariances agree entry-wise up to ``atol``. """
        assert_isinstance(other, CovarianceMatrix)
        return self.entries.shape == other.entries.shape\
            and numpy.allclose(self.entries, other.entries, rtol=0, atol=atol)

    @classmethod
    def vacuum(cls, n_modes: int = 1) -> CovarianceMatrix:
        """ The vacuum on ``n_modes`` modes, i.e. the identity. """
        return cls(numpy.eye(2 * n_modes), check=False)

    id = vacuum

    @classmethod
    def thermal(cls, n: float, n_modes: int = 1) -> CovarianceMatrix:
        """
        Thermal state with ``n`` mean photons per mode, i.e. :math:`(1+2n)I`.

        Example
        -------
        >>> CovarianceMatrix.thermal(-1)
        Traceback (most recent call last):
        ...
        ValueError: Noise photon number must be >= 0, got -1.
        """
        if not n >= 0:
            raise ValueError(messages.NEGATIVE_NOISE.format(n))
        return cls((1 + 2 * n) * numpy.eye(2 * n_modes), check=False)

    def tensor(self, other: CovarianceMatrix = None, *others):
        """
        The product state, i.e. the direct sum of covariance matrices.

        Example
        -------
        >>> V = CovarianceMatrix.vacuum() @ CovarianceMatrix.thermal(1)
        >>> assert V == CovarianceMatrix(numpy.diag([1., 1., 3., 3.]))
        """
        others = (() if other is None else (other, )) + others
        for state in others:
            assert_isinstance(state, CovarianceMatrix)
        return CovarianceMatrix(block_diag(
            self.entries, *(state.entries for state in others)), check=False)

    def block(self, i: int, j: int) -> numpy.ndarray:
        """
        The ``2 x 2`` block between mode ``i`` and mode ``j``.

        Parameters:
            i : The row mode index, from zero.
            j : The column mode index, from zero.
        """
        for k in (i, j):
            if not 0 <= k < self.n_modes:
                raise IndexError(
                    messages.MODE_OUT_OF_RANGE.format(k, self.n_modes))
        return self.entries[2 * i:2 * i + 2, 2 * j:2 * j + 2]

    def det(self) -> float:
        """ The determinant, one for pure states. """
        return float(numpy.linalg.det(self.entries))

    def is_pure(self) -> bool:
        """ Whether the determinant is one, up to rounding. """
        scale = max(1., float(numpy.abs(self.entries).max()))\
            ** (2 * self.n_modes)
        return abs(self.det() - 1) <= config.PURITY_RTOL * scale

    def purity(self) -> float:
        """
        The purity :math:`\\mathrm{tr} \\rho^2 = 1 / \\sqrt{\\det V}`.

        Example
        -------
        >>> assert CovarianceMatrix.thermal(.5).purity() == .5
        """
        return float(1 / numpy.sqrt(self.det()))

    def to_tree(self) -> dict:
        """
        Serialise a covariance matrix as a dictionary, with the convention tag
        and the row-major entries.

        Example
        -------
        >>> CovarianceMatrix.vacuum().to_tree()['entries']
        [1.0, 0.0, 0.0, 1.0]
        """
        return {
            'factory': factory_name(type(self)),
            'convention': self.convention,
            'n_modes': self.n_modes,
            'entries': [float(x) for x in self.entries.reshape(-1)]}

    @classmethod
    def from_tree(cls, tree: dict, check: bool = True) -> CovarianceMatrix:
        """ Decode a serialised covariance matrix. """
        if tree.get('convention', cls.convention) != cls.convention:
            raise ValueError(messages.BAD_VALUE.format(tree['convention']))
        dim = 2 * int(tree['n_modes'])
        return cls(numpy.reshape(tree['entries'], (dim, dim)), check)


@dataclass(frozen=True)
class WignerMarginal:
    """
    A Wigner marginal sampled on a square grid.

    Parameters:
        axes : The names of the two quadratures, e.g. ``("q2", "p1")``.
        coordinates : The grid coordinates, shared by both axes.
        values : The density, with ``values[i, j]`` at the point
            ``(coordinates[i], coordinates[j])``.
        covariance : The ``2 x 2`` sub-covariance of the two quadratures.
    """
    axes: tuple[str, str]
    coordinates: numpy.ndarray
    values: numpy.ndarray
    covariance: numpy.ndarray

    @property
    def step(self) -> float:
        """ The grid step. """
        return float(self.coordinates[1] - self.coordinates[0])

    def total(self) -> float:
        """ The Riemann sum of the density, close to one on wide grids. """
        return float(self.values.sum() * self.step ** 2)

    def header(self) -> list[str]:
        """
        The CSV header: the axis names, then the coordinates of the second
        axis.
        """
        corner = "{}\\{}".format(*self.axes)
        return [corner, *map(format_float, self.coordinates)]

    def rows(self):
        """ The CSV rows, each led by its coordinate on the first axis. """
        for x, row in zip(self.coordinates, self.values):
            yield [x, *row]


def assert_symmetric(entries: numpy.ndarray):
    """ Raise :class:`PhysicalityError` if ``entries`` is not symmetric. """
    deviation = float(numpy.abs(entries - entries.T).max())
    scale = max(1., float(numpy.abs(entries).max()))
    if deviation > config.SYMMETRY_RTOL * scale:
        raise PhysicalityError(messages.NOT_SYMMETRIC.format(deviation))


def assert_positive_definite(entries: numpy.ndarray):
    """ Raise :class:`PhysicalityError` if ``entries`` is not positive. """
    try:
        numpy.linalg.cholesky((entries + entries.T) / 2)
    except numpy.linalg.LinAlgError:
        raise PhysicalityError(messages.NOT_POSITIVE_DEFINITE)


def apply(transform: Symplectic, state: CovarianceMatrix) -> CovarianceMatrix:
    """
    Evolve a state under a symplectic transform, i.e. :math:`S V S^T`.

    Parameters:
        transform : The symplectic transform.
        state : The covariance matrix, on as many modes.

    Example
    -------
    >>> from tmspy.symplectic import squeezer_transform
    >>> V = apply(squeezer_transform(1.), CovarianceMatrix.vacuum())
    >>> assert numpy.allclose(V.entries, numpy.diag([numpy.exp(-2),
    ...                                              numpy.exp(2)]))
    >>> apply(squeezer_transform(1.), CovarianceMatrix.vacuum(2))
    Traceback (most recent call last):
    ...
    tmspy.cat.AxiomError: Expected 1 mode(s), got 2.
    """
    assert_isinstance(transform, Symplectic)
    assert_isinstance(state, CovarianceMatrix)
    if transform.n_modes != state.n_modes:
        raise AxiomError(messages.WRONG_MODES.format(
            transform.n_modes, state.n_modes))
    S = transform.array
    entries = S @ state.entries @ S.T
    return CovarianceMatrix((entries + entries.T) / 2, check=False)


def symplectic_eigenvalues(state: CovarianceMatrix) -> numpy.ndarray:
    """
    The symplectic eigenvalues, i.e. the moduli of the eigenvalues of
    :math:`J V` which come in pairs :math:`\\pm i \\nu`, sorted ascending.

    Parameters:
        state : A positive definite covariance matrix, physical or not.

    Example
    -------
    >>> symplectic_eigenvalues(CovarianceMatrix.thermal(.5))
    array([2.])
    >>> symplectic_eigenvalues(CovarianceMatrix([[1, 0], [0, -1]], False))
    Traceback (most recent call last):
    ...
    tmspy.gaussian.PhysicalityError: Covariance matrix is not positive \
definite.
    """
    assert_isinstance(state, CovarianceMatrix)
    assert_positive_definite(state.entries)
    J = symplectic_form(state.n_modes)
    moduli = numpy.sort(numpy.abs(numpy.linalg.eigvals(J @ state.entries)))
    pairs = moduli.reshape(-1, 2)
    gap = numpy.abs(pairs[:, 1] - pairs[:, 0])
    if (gap > config.PAIRING_TOL * numpy.maximum(1., pairs[:, 1])).any():
        raise PhysicalityError(messages.PAIRING_FAILED.format(moduli))
    return pairs.mean(axis=1)


def partial_transpose(
        state: CovarianceMatrix, mode_index: int = 1) -> CovarianceMatrix:
    """
    Partial transposition, i.e. time reversal of mode ``mode_index`` which
    flips the sign of its ``p`` quadrature.

    Parameters:
        state : A state on at least two modes.
        mode_index : The transposed mode, from zero.

    Example
    -------
    >>> V = CovarianceMatrix.vacuum(2)
    >>> assert partial_transpose(V, 0) == V
    >>> partial_transpose(V, 2)
    Traceback (most recent call last):
    ...
    IndexError: Mode index 2 out of range for 2 mode(s).
    """
    assert_isinstance(state, CovarianceMatrix)
    if state.n_modes < 2:
        raise AxiomError(messages.WRONG_MODES.format(
            "at least 2", state.n_modes))
    if not 0 <= mode_index < state.n_modes:
        raise IndexError(messages.MODE_OUT_OF_RANGE.format(
            mode_index, state.n_modes))
    flip = numpy.ones(2 * state.n_modes)
    flip[2 * mode_index + 1] = -1
    return CovarianceMatrix(
        flip[:, None] * state.entries * flip[None, :], check=False)


def pt_symplectic_eigenvalue(state: CovarianceMatrix) -> float:
    """
    The smallest symplectic eigenvalue :math:`\\tilde\\nu` of the partial
    transpose of a two-mode state, below one iff the state is entangled.
    """
    assert_isinstance(state, CovarianceMatrix)
    if state.n_modes != 2:
        raise AxiomError(messages.WRONG_MODES.format(2, state.n_modes))
    return float(symplectic_eigenvalues(partial_transpose(state))[0])


def negativity_kernel_from_cov(state: CovarianceMatrix) -> float:
    """
    The negativity kernel :math:`N_k = (1 - \\tilde\\nu) / (2 \\tilde\\nu)`,
    positive iff the two-mode state is entangled.

    Parameters:
        state : A physical two-mode state.

    Example
    -------
    >>> vacuum = CovarianceMatrix.vacuum(2)
    >>> assert abs(negativity_kernel_from_cov(vacuum)) < 1e-12
    >>> assert negativity_kernel_from_cov(CovarianceMatrix.thermal(.3, 2)) < 0
    """
    assert_isinstance(state, CovarianceMatrix)
    state.check()
    return -.5 + .5 / pt_symplectic_eigenvalue(state)


def negativity(state: CovarianceMatrix) -> float:
    """ The negativity :math:`\\max \\{0, N_k\\}`. """
    return max(0., negativity_kernel_from_cov(state))


def logarithmic_negativity(state: CovarianceMatrix) -> float:
    """
    The logarithmic negativity :math:`\\max \\{0, -\\log_2 \\tilde\\nu\\}`,
    in ebits.

    Example
    -------
    >>> assert logarithmic_negativity(CovarianceMatrix.vacuum(2)) < 1e-12
    """
    state.check()
    return max(0., -float(numpy.log2(pt_symplectic_eigenvalue(state))))


def conditional_covariance_homodyne(
        state: CovarianceMatrix, measured_mode: int = 0,
        measured_quadrature: str = "q") -> CovarianceMatrix:
    """
    The state of the other mode after ideal homodyne detection, i.e. the
    Schur complement of the measured quadrature variance. The outcome only
    shifts the mean, so the conditional covariance is deterministic.

    Parameters:
        state : A two-mode state.
        measured_mode : The measured mode, 0 or 1.
        measured_quadrature : Either ``"q"`` or ``"p"``.

    Example
    -------
    >>> V = CovarianceMatrix.vacuum() @ CovarianceMatrix.thermal(1)
    >>> V_rem = conditional_covariance_homodyne(V)
    >>> assert V_rem == CovarianceMatrix.thermal(1)
    """
    assert_isinstance(state, CovarianceMatrix)
    if state.n_modes != 2:
        raise AxiomError(messages.WRONG_MODES.format(2, state.n_modes))
    if measured_quadrature not in QUADRATURES:
        raise ValueError(messages.UNKNOWN_QUADRATURE.format(
            measured_quadrature))
    k = QUADRATURES.index(measured_quadrature)
    remaining = 1 - measured_mode
    variance = state.block(measured_mode, measured_mode)[k, k]
    if not variance > config.PHYSICALITY_TOL:
        raise PhysicalityError(messages.SINGULAR_HOMODYNE.format(variance))
    cross = state.block(remaining, measured_mode)[:, k]
    entries = state.block(remaining, remaining)\
        - numpy.outer(cross, cross) / variance
    return CovarianceMatrix(entries)


def gaussian_fidelity_single_mode(
        v1: CovarianceMatrix, v2: CovarianceMatrix) -> float:
    """
    The Uhlmann fidelity of two zero-mean single-mode Gaussian states

    .. math::
        F = 2 / (\\sqrt{\\Delta + \\delta} - \\sqrt{\\delta})

    with :math:`\\Delta = \\det(V_1 + V_2)` and
    :math:`\\delta = (\\det V_1 - 1)(\\det V_2 - 1)`.

    Example
    -------
    >>> vacuum = CovarianceMatrix.vacuum()
    >>> assert gaussian_fidelity_single_mode(
    ...     vacuum, CovarianceMatrix.thermal(1)) == .5
    """
    for state in (v1, v2):
        assert_isinstance(state, CovarianceMatrix)
        if state.n_modes != 1:
            raise AxiomError(messages.WRONG_MODES.format(1, state.n_modes))
        state.check()
    if v1 == v2:
        return 1.
    excess = [0. if v.is_pure() else v.det() - 1 for v in (v1, v2)]
    delta = max(0., excess[0] * excess[1])
    big_delta = float(numpy.linalg.det(v1.entries + v2.entries))
    fidelity = 2 / (numpy.sqrt(big_delta + delta) - numpy.sqrt(delta))
    return float(numpy.clip(fidelity, 0, 1))


def quadrature_index(axis: str, n_modes: int) -> int:
    """
    The row of a named quadrature, e.g. ``"p2"`` is row 3.

    Example
    -------
    >>> quadrature_index("p2", 2)
    3
    """
    names = [q + str(i + 1) for i in range(n_modes) for q in QUADRATURES]
    if axis not in names:
        raise ValueError(messages.UNKNOWN_AXIS.format(names, axis))
    return names.index(axis)


def wigner_marginal_grid(
        state: CovarianceMatrix, axes: tuple[str, str] = ("q1", "p1"),
        lo: float = -6., hi: float = 6., step: float = .05) -> WignerMarginal:
    """
    The Wigner function of a Gaussian state integrated over all but two
    quadratures, sampled on the square grid ``[lo, hi]`` with ``step``.

    Parameters:
        state : The state.
        axes : The two quadratures kept, e.g. ``("q2", "p1")``.
        lo : The lower grid bound.
        hi : The upper grid bound.
        step : The grid step.

    Example
    -------
    >>> marginal = wigner_marginal_grid(CovarianceMatrix.vacuum(2))
    >>> assert numpy.isclose(marginal.values.max(), 1 / (2 * numpy.pi))
    >>> assert abs(marginal.total() - 1) < 1e-3
    """
    assert_isinstance(state, CovarianceMatrix)
    rows = [quadrature_index(axis, state.n_modes) for axis in axes]
    covariance = state.entries[numpy.ix_(rows, rows)]
    if len(rows) != 2 or numpy.linalg.det(covariance)\
            <= config.PHYSICALITY_TOL * max(1., numpy.abs(covariance).max()):
        raise PhysicalityError(messages.DEGENERATE_MARGINAL.format(axes))
    if not step > 0 or not hi > lo:
        raise ValueError(messages.BAD_VALUE.format((lo, hi, step)))
    n_points = int(round((hi - lo) / step)) + 1
    if n_points < 2:
        raise ValueError(messages.COARSE_GRID.format(step, lo, hi))
    coordinates = numpy.linspace(lo, hi, n_points)
    x, y = numpy.meshgrid(coordinates, coordinates, indexing='ij')
    density = multivariate_normal(mean=numpy.zeros(2), cov=covariance)
    values = density.pdf(numpy.stack([x, y], axis=-1))
    return WignerMarginal(tuple(axes), coordinates, values, covariance)
