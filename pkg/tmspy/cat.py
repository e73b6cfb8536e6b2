# -*- coding: utf-8 -*-

"""
Operators for chaining and stacking phase-space maps.

Transforms on ``N`` modes chain with ``>>`` (apply left first) and stack
over disjoint modes with ``@``. An integer on either side of ``@`` stands
for the identity on that many modes.

Summary
-------

.. autosummary::
    :template: class.rst
    :nosignatures:
    :toctree:

    Composable
    Whiskerable
    AxiomError

.. admonition:: Functions

    .. autosummary::
        :template: function.rst
        :nosignatures:
        :toctree:

        assert_iscomposable

Example
-------
>>> from tmspy.symplectic import Symplectic, squeezer_transform
>>> S = squeezer_transform(.5)
>>> assert (S >> S).is_close(squeezer_transform(1.))
>>> assert (S @ 1).n_modes == (1 @ S).n_modes == 2
>>> assert (S << S).is_close(S >> S)
"""

from __future__ import annotations

from abc import ABC, abstractmethod

from tmspy import messages


class AxiomError(Exception):
    """ A map or state was used on the wrong number of modes. """


class Composable(ABC):
    """
    A map that chains with ``>>`` and ``<<`` through :meth:`then`.

    Subclasses carry an ``n_modes`` attribute and act on that many modes.

    Example
    -------
    >>> class Steps(tuple, Composable):
    ...     n_modes = 1
    ...     def then(self, other):
    ...         return Steps(self + other)
    >>> assert Steps(("squeeze", )) >> Steps(("mix", )) == ("squeeze", "mix")
    >>> assert Steps(("mix", )) << Steps(("squeeze", )) == ("squeeze", "mix")
    """
    n_modes: int

    @abstractmethod
    def then(self, other: Composable) -> Composable:
        """ Apply ``self``, then ``other``. """

    def is_composable(self, other: Composable) -> bool:
        """ Whether ``other`` acts on as many modes as ``self``. """
        return self.n_modes == other.n_modes

    def __rshift__(self, other):
        return self.then(other)

    def __lshift__(self, other):
        return other.then(self)


class Whiskerable(ABC):
    """
    An object on ``n_modes`` modes that stacks with ``@`` through
    :meth:`tensor`, e.g. a direct sum of transforms or a product state.
    """
    @classmethod
    @abstractmethod
    def id(cls, dom: int) -> Whiskerable:
        """
        The neutral object on ``dom`` modes.

        Parameters:
            dom : The number of modes.
        """

    @abstractmethod
    def tensor(self, other: Whiskerable) -> Whiskerable:
        """ Stack ``other`` on the modes after those of ``self``. """

    @classmethod
    def _promote(cls, other: Whiskerable | int) -> Whiskerable:
        return cls.id(other) if isinstance(other, int) else other

    def __matmul__(self, other):
        return self.tensor(self._promote(other))

    def __rmatmul__(self, other):
        return self._promote(other).tensor(self)


def assert_iscomposable(first: Composable, then: Composable):
    """
    Raise :class:`AxiomError` unless ``then`` can follow ``first``.

    >>> from tmspy.symplectic import Symplectic
    >>> assert_iscomposable(Symplectic.id(1), Symplectic.id(2))
    Traceback (most recent call last):
    ...
    tmspy.cat.AxiomError: Cannot apply a 2-mode map after a 1-mode map.
    """
    if not first.is_composable(then):
        raise AxiomError(messages.NOT_COMPOSABLE.format(
            then.n_modes, first.n_modes))
