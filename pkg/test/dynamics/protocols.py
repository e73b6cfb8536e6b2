from pytest import raises, mark
import numpy as np
from tmspy.dephasing import FilterSpec, sinc
from tmspy.jpa import JpaParams, tms_resource
from tmspy.protocols import *


@mark.parametrize("seed", range(5))
def test_rsp_without_delay_is_perfect(seed):
    rng = np.random.default_rng(seed)
    r, n = rng.uniform(.1, 1.5), rng.uniform(0, .5)
    j1, j2 = JpaParams(r, n), JpaParams(r, n, np.pi)
    for quadrature in "qp":
        result = rsp_fidelity(j1, j2, FilterSpec(1e6), 0, quadrature)
        assert abs(result.fidelity - 1) < 1e-12


def test_qt_fidelity():
    j1, j2 = tms_resource(5.7)
    filter = FilterSpec.from_bandwidth(430e3)
    fidelity = qt_fidelity(j1, j2, filter, 0).fidelity
    assert abs(fidelity - .78793) < 1e-5 and .77 < fidelity < .83
    assert qt_fidelity(j1, j2, filter, filter.first_zero).fidelity == .5


def test_qt_depends_on_nu_only():
    filter, r = FilterSpec(1e6), .6
    pure = JpaParams(r), JpaParams(r, phi=np.pi)
    shift = np.log(1.2) / 2
    noisy = JpaParams(r + shift, .1), JpaParams(r + shift, .1, np.pi)
    expected = 1 / (1 + np.exp(-2 * r))
    for j1, j2 in (pure, noisy):
        assert abs(qt_fidelity(j1, j2, filter, 0).fidelity - expected) < 1e-9


def test_fidelity_sweep():
    filter = FilterSpec(1e6)
    taus = np.linspace(0, filter.first_zero, 30)
    for protocol in PROTOCOLS:
        sweep = fidelity_sweep(protocol, *tms_resource(5.7), filter, taus)
        fidelities = np.array([result.fidelity for result in sweep])
        assert all(result.protocol == protocol for result in sweep)
        assert (np.diff(fidelities) <= 1e-12).all()
        assert ((0 <= fidelities) & (fidelities <= 1 + 1e-12)).all()
    with raises(ValueError):
        fidelity_sweep("teleport", *tms_resource(5.7), filter, taus)
    with raises(ValueError):
        fidelity_sweep("qt", *tms_resource(5.7), filter, [1e-6, 0])


def test_rsp_fidelity_at_sinc_zero():
    j1, j2 = tms_resource(8.)
    filter = FilterSpec(1e6)
    F = rsp_fidelity(j1, j2, filter, filter.first_zero).fidelity
    mu = np.cosh(2 * j1.r)
    assert abs(F - np.sqrt(2 / (1 + mu ** 2))) < 1e-12


def test_fidelity_drop_delay():
    j1, j2 = tms_resource(5.7)
    filter = FilterSpec(1e6)
    tau = fidelity_drop_delay("qt", j1, j2, filter, .6)
    assert 0 < tau < filter.first_zero
    assert abs(qt_fidelity(j1, j2, filter, tau).fidelity - .6) < 1e-9
    nu = 1 / .6 - 1
    mu, c = np.cosh(2 * j1.r), np.sinh(2 * j1.r)
    assert abs(sinc(filter.omega * tau) - (mu - nu) / c) < 1e-9
    assert fidelity_drop_delay("qt", j1, j2, filter, .9) == 0
    with raises(ValueError):
        fidelity_drop_delay("qt", j1, j2, filter, .4)
    with raises(ValueError):
        fidelity_drop_delay("x", j1, j2, filter, .6)


def test_ProtocolResult_to_tree():
    j1, j2 = tms_resource(5.7)
    tree = qt_fidelity(j1, j2, FilterSpec(1e6), 1e-7).to_tree()
    assert tree['factory'] == "protocols.ProtocolResult"
    assert tree['protocol'] == "qt" and tree['tau'] == 1e-7
    assert tree['resource'][0] == j1.to_tree()
