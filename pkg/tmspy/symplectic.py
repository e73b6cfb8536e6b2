# -*- coding: utf-8 -*-

"""
Symplectic transforms of quadrature phase space, with sequential composition
``>>`` and the direct sum over modes ``@``.

Quadratures are ordered :math:`(q_1, p_1, q_2, p_2, \\dots)` and the
symplectic form is block-diagonal with blocks :math:`[[0, 1], [-1, 0]]`.

Summary
-------

.. autosummary::
    :template: class.rst
    :nosignatures:
    :toctree:

    Symplectic

.. admonition:: Functions

    .. autosummary::
        :template: function.rst
        :nosignatures:
        :toctree:

        symplectic_form
        rotation_matrix
        squeezer_transform
        rotation_transform
        beam_splitter_50_50

Example
-------
>>> import numpy as np
>>> bs = beam_splitter_50_50()
>>> assert bs.is_symplectic()
>>> assert np.allclose((bs >> bs).array, [[0, 0, 1, 0],
...                                       [0, 0, 0, 1],
...                                       [-1, 0, 0, 0],
...                                       [0, -1, 0, 0]])
"""

from __future__ import annotations

import numpy
from scipy.linalg import block_diag

from tmspy import config, messages
from tmspy.cat import (
    AxiomError, Composable, Whiskerable, assert_iscomposable)
from tmspy.utils import assert_isinstance


def symplectic_form(n_modes: int) -> numpy.ndarray:
    """
    The block-diagonal symplectic form :math:`J` on ``n_modes`` modes.

    Example
    -------
    >>> symplectic_form(1)
    array([[ 0.,  1.],
           [-1.,  0.]])
    """
    return numpy.kron(numpy.eye(n_modes), [[0., 1.], [-1., 0.]])


def rotation_matrix(theta: float) -> numpy.ndarray:
    """ Counter-clockwise rotation of the :math:`(q, p)` plane. """
    cos, sin = numpy.cos(theta), numpy.sin(theta)
    return numpy.array([[cos, -sin], [sin, cos]])


class Symplectic(Composable, Whiskerable):
    """
    A symplectic transform is a real ``2N x 2N`` matrix :math:`S` with
    :math:`S J S^T = J`, acting on ``N`` modes.

    Composition ``S >> T`` applies ``S`` first, i.e. it has matrix
    :math:`T S`, and ``S @ T`` acts with ``S`` on the first modes and ``T``
    on the last ones.

    Parameters:
        array : The matrix of the transform.
        label : A free-form name, e.g. "squeezer".
        check : Whether to check the symplectic condition.

    Example
    -------
    >>> S = Symplectic([[2, 0], [0, .5]], label="squeezer")
    >>> assert (S.n_modes, S.dom, S.cod) == (1, 1, 1)
    >>> assert (S >> S).label == "squeezer >> squeezer"
    >>> Symplectic([[2, 0], [0, 2]])
    Traceback (most recent call last):
    ...
    tmspy.cat.AxiomError: Transform '' is not symplectic (max deviation 3).
    """
    def __init__(self, array, label: str = "", check: bool = True):
        assert_isinstance(label, str)
        array = numpy.array(array, dtype=float)
        if array.ndim != 2 or array.shape[0] != array.shape[1]\
                or array.shape[0] % 2:
            raise AxiomError(messages.NOT_SQUARE.format(array.shape))
        array.flags.writeable = False
        self.array, self.label = array, label
        if check and not self.is_symplectic():
            raise AxiomError(messages.NOT_SYMPLECTIC.format(
                label, self.symplectic_deviation()))

    @property
    def n_modes(self) -> int:
        """ The number of modes the transform acts on. """
        return self.array.shape[0] // 2

    dom = cod = n_modes

    def __repr__(self):
        return "Symplectic({}, n_modes={}, label={!r})".format(
            array2string(self.array.reshape(-1)), self.n_modes, self.label)

    def __eq__(self, other):
        return isinstance(other, Symplectic)\
            and (self.array == other.array).all()

    def __hash__(self):
        return hash(self.array.tobytes())

    def symplectic_deviation(self) -> float:
        """ The max-norm of :math:`S J S^T - J`. """
        J = symplectic_form(self.n_modes)
        return float(numpy.abs(self.array @ J @ self.array.T - J).max())

    def is_symplectic(self, atol: float = None) -> bool:
        """ Whether :math:`\\| S J S^T - J \\|_{max}` is below ``atol``. """
        atol = config.SYMPLECTIC_ATOL if atol is None else atol
        scale = max(1., float(numpy.abs(self.array).max()) ** 2)
        return self.symplectic_deviation() < atol * scale

    def is_close(self, other: Symplectic, atol: float = 1e-12) -> bool:
        """
        Whether a transform is numerically close to an ``other``.

        Parameters:
            other : The other transform.
            atol : The absolute tolerance on each entry.
        """
        assert_isinstance(other, Symplectic)
        return self.n_modes == other.n_modes\
            and numpy.allclose(self.array, other.array, rtol=0, atol=atol)

    @classmethod
    def id(cls, dom: int = 1) -> Symplectic:
        """ The identity on ``dom`` modes. """
        return cls(numpy.eye(2 * dom), label="identity")

    def then(self, other: Symplectic = None, *others: Symplectic):
        if others or other is None:
            result = self
            for arrow in (() if other is None else (other, )) + others:
                result = result.then(arrow)
            return result
        assert_isinstance(other, Symplectic)
        assert_iscomposable(self, other)
        label = " >> ".join(x for x in (self.label, other.label) if x)
        return Symplectic(other.array @ self.array, label, check=False)

    def tensor(self, other: Symplectic = None, *others: Symplectic):
        if others or other is None:
            result = self
            for arrow in (() if other is None else (other, )) + others:
                result = result.tensor(arrow)
            return result
        assert_isinstance(other, Symplectic)
        label = " @ ".join(x for x in (self.label, other.label) if x)
        return Symplectic(
            block_diag(self.array, other.array), label, check=False)

    def inverse(self) -> Symplectic:
        """
        The inverse transform :math:`S^{-1} = -J S^T J`.

        Example
        -------
        >>> S = squeezer_transform(.3, .7) @ rotation_transform(1.)
        >>> assert (S >> S.inverse()).is_close(Symplectic.id(2))
        """
        J = symplectic_form(self.n_modes)
        return Symplectic(-J @ self.array.T @ J, self.label + "^-1")

    def __call__(self, state):
        from tmspy.gaussian import apply
        return apply(self, state)


def squeezer_transform(r: float, phi: float = 0.) -> Symplectic:
    """
    Single-mode squeezer :math:`R(\\phi/2) \\mathrm{diag}(e^{-r}, e^r)
    R(\\phi/2)^T` for a complex squeezing amplitude :math:`r e^{i\\phi}`.

    Applied to the vacuum, it gives variance :math:`e^{-2r}` along the axis
    at angle :math:`\\phi / 2` and :math:`e^{2r}` orthogonally to it.

    Parameters:
        r : The squeezing factor, non-negative.
        phi : The squeezing angle in radians.

    Example
    -------
    >>> import numpy as np
    >>> assert squeezer_transform(0, 1.23).is_close(Symplectic.id(1))
    >>> S = squeezer_transform(1., np.pi)
    >>> assert np.allclose(S.array @ S.array.T, np.diag([np.e ** 2,
    ...                                                 np.e ** -2]))
    >>> squeezer_transform(-1.)
    Traceback (most recent call last):
    ...
    ValueError: Squeezing factor must be >= 0, got -1.0.
    """
    r, phi = float(r), float(phi)
    if not numpy.isfinite(r) or not numpy.isfinite(phi):
        raise ValueError(messages.NOT_FINITE.format("(r, phi)", (r, phi)))
    if r < 0:
        raise ValueError(messages.NEGATIVE_SQUEEZING.format(r))
    R = rotation_matrix(phi / 2)
    array = R @ numpy.diag([numpy.exp(-r), numpy.exp(r)]) @ R.T
    return Symplectic(array, label="squeezer", check=False)


def rotation_transform(theta: float) -> Symplectic:
    """
    Single-mode phase-space rotation by ``theta``, a passive transform.

    Example
    -------
    >>> import numpy as np
    >>> R = rotation_transform(np.pi / 2)
    >>> assert np.allclose(R.array, [[0, -1], [1, 0]])
    """
    return Symplectic(rotation_matrix(float(theta)), label="rotation")


def beam_splitter_50_50() -> Symplectic:
    """
    Balanced two-mode mixer :math:`\\frac{1}{\\sqrt 2} [[I, I], [-I, I]]`,
    the hybrid ring at covariance level.

    Example
    -------
    >>> import numpy as np
    >>> bs = beam_splitter_50_50()
    >>> assert bs.n_modes == 2 and bs.label == "beam-splitter"
    >>> assert np.isclose(bs.array[2, 0], -2 ** -.5)
    """
    eye = numpy.eye(2)
    array = numpy.block([[eye, eye], [-eye, eye]]) / numpy.sqrt(2)
    return Symplectic(array, label="beam-splitter")


def array2string(array, **params) -> str:
    """ Numpy array pretty print. """
    params = dict(params, separator=', ')
    params.setdefault('threshold', config.NUMPY_THRESHOLD)
    return numpy.array2string(array, **params)\
        .replace('[ ', '[').replace('  ', ' ')
