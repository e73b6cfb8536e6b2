from pytest import raises, mark
import numpy as np
from tmspy.cat import AxiomError
from tmspy.gaussian import CovarianceMatrix, apply
from tmspy.symplectic import *


def test_symplectic_form():
    J = symplectic_form(2)
    assert J.shape == (4, 4)
    assert (J.T == -J).all() and (J @ J == -np.eye(4)).all()


def test_Symplectic():
    with raises(AxiomError):
        Symplectic(np.eye(3))
    with raises(AxiomError):
        Symplectic([[1, 2], [3, 4]])
    with raises(TypeError):
        Symplectic(np.eye(2), label=42)
    S = Symplectic([[2, 0], [0, .5]], label="squeezer")
    assert S == Symplectic([[2, 0], [0, .5]], label="other")
    assert {S: 42}[Symplectic([[2, 0], [0, .5]])] == 42
    assert S != np.array([[2, 0], [0, .5]])
    with raises(ValueError):
        S.array[0, 0] = 1
    assert Symplectic.id(2).label == "identity"
    assert Symplectic([[2, 0], [0, 2]], check=False).symplectic_deviation()\
        == 3


def test_repr():
    before = np.get_printoptions()
    assert repr(Symplectic.id(1))\
        == "Symplectic([1., 0., 0., 1.], n_modes=1, label='identity')"
    assert "..." in repr(Symplectic.id(3))
    assert np.get_printoptions() == before


def test_then():
    S = squeezer_transform(.7, 1.1)
    R = rotation_transform(np.pi / 2)
    fused = S.array @ R.array @ S.array
    assert np.allclose((S >> R >> S).array, fused, rtol=0, atol=1e-12)
    assert (S >> R >> S).label == "squeezer >> rotation >> squeezer"
    assert np.allclose(S.then(R, S).array, fused, rtol=0, atol=1e-12)
    assert (R << S).is_close(S >> R)
    with raises(AxiomError):
        S >> beam_splitter_50_50()
    with raises(TypeError):
        S >> np.eye(2)


def test_tensor():
    S, R = squeezer_transform(.5), rotation_transform(.3)
    both = S @ R
    assert both.n_modes == 2 and both.label == "squeezer @ rotation"
    assert (both.array[:2, :2] == S.array).all()
    assert (both.array[2:, 2:] == R.array).all()
    assert (both.array[:2, 2:] == 0).all()
    assert (S @ 1).is_close(S @ Symplectic.id(1))
    assert (1 @ S).n_modes == 2
    assert S.tensor(R, S).n_modes == 3
    assert ((S @ R) >> (R @ S)).is_close((S >> R) @ (R >> S))


def test_squeezer_transform():
    V = apply(squeezer_transform(1.), CovarianceMatrix.vacuum())
    assert np.allclose(V.entries, np.diag([.13534, 7.3891]), atol=1e-4)
    assert np.allclose(
        V.entries, np.diag([np.exp(-2), np.exp(2)]), rtol=1e-12, atol=0)
    with raises(ValueError):
        squeezer_transform(np.nan)
    with raises(ValueError):
        squeezer_transform(-.1)


def test_beam_splitter_twice():
    bs = beam_splitter_50_50()
    swap = np.block([[np.zeros((2, 2)), np.eye(2)],
                     [-np.eye(2), np.zeros((2, 2))]])
    assert np.allclose((bs >> bs).array, swap, rtol=0, atol=1e-15)
    state = apply(squeezer_transform(.8) @ squeezer_transform(.8),
                  CovarianceMatrix.vacuum(2))
    assert apply(bs >> bs, state).is_close(state)


def test_inverse():
    S = squeezer_transform(1.2, .4) @ beam_splitter_50_50().inverse()\
        @ rotation_transform(2.)
    assert (S >> S.inverse()).is_close(Symplectic.id(4))
    assert S.inverse().label.endswith("^-1")


@mark.parametrize("seed", range(5))
def test_random_compositions_are_symplectic(seed):
    rng = np.random.default_rng(seed)
    S = Symplectic.id(2)
    for _ in range(4):
        r, phi, theta = rng.uniform([0, 0, 0], [1.5, 2 * np.pi, 2 * np.pi])
        S = S >> (squeezer_transform(r, phi) @ rotation_transform(theta))\
            >> beam_splitter_50_50()
    assert S.is_symplectic()
    assert Symplectic(S.array).n_modes == 2


def test_call():
    S = squeezer_transform(.5)
    V = CovarianceMatrix.thermal(.2)
    assert S(V) == apply(S, V)
