import io

from pytest import raises, mark
import numpy as np
from scipy.optimize import bisect
from tmspy.dephasing import *
from tmspy.jpa import JpaParams, tms_resource
from tmspy.utils import InputError, dumps, loads


def random_pair(rng):
    r1, r2 = rng.uniform(0, 1.5, 2)
    n1, n2 = rng.uniform(0, .5, 2)
    return JpaParams(r1, n1), JpaParams(r2, n2, np.pi)


def test_FilterSpec():
    filter = FilterSpec.from_bandwidth(430e3)
    assert abs(filter.omega - np.pi * 430e3) < 1e-9
    assert abs(filter.first_zero - 1 / 430e3) < 1e-20
    assert loads(dumps(filter)) == filter
    for omega in (0, -1, np.inf, np.nan):
        with raises(ValueError):
            FilterSpec(omega)


def test_sinc():
    x = np.linspace(-10, 10, 1001)
    assert np.allclose(sinc(x), np.sinc(x / np.pi), rtol=0, atol=1e-15)
    assert abs(sinc(np.pi)) < 1e-15
    assert sinc(0) == 1
    assert abs(sinc(1e-8) / (1 - 1e-16 / 6) - 1) < 1e-12
    assert isinstance(sinc(.5), float) and sinc([.5]).shape == (1, )


def test_sinc_derivative():
    x, h = np.linspace(-7, 7, 141), 1e-6
    finite_difference = (sinc(x + h) - sinc(x - h)) / (2 * h)
    assert np.allclose(sinc_derivative(x), finite_difference, atol=1e-9)
    assert abs(sinc_derivative(1e-5) + 1e-5 / 3) < 1e-15


def test_g2_closed_form():
    filter = FilterSpec(1e6)
    g2 = g2_closed_form(JpaParams(1.), filter, 0)
    assert abs(g2 - (3 + 1 / np.sinh(1) ** 2)) < 1e-9
    assert abs(g2_closed_form(JpaParams(0, .7), filter, 0) - 2) < 1e-12
    assert g2_closed_form(JpaParams(1.), filter, filter.first_zero) == 1
    taus = np.linspace(-3e-6, 3e-6, 11)
    g2 = g2_closed_form(JpaParams(.5, .1), filter, taus)
    assert np.allclose(g2, g2[::-1]) and (g2 >= 1).all()
    for vacuum in (JpaParams(), JpaParams(phi=1.)):
        with raises(DegenerateStateError):
            g2_closed_form(vacuum, filter, 0)
        with raises(DegenerateStateError):
            g2_wick_oracle(vacuum, filter, 0)


def test_g2_wick_oracle():
    rng = np.random.default_rng(0)
    for _ in range(1000):
        params = JpaParams(rng.uniform(.01, 1.5), rng.uniform(0, .5))
        filter = FilterSpec(1e6)
        tau = rng.uniform(0, 3 * np.pi) / filter.omega
        closed = g2_closed_form(params, filter, tau)
        oracle = g2_wick_oracle(params, filter, tau)
        assert abs(closed - oracle) <= 1e-10 * oracle
    params = JpaParams(1., .2)
    assert abs(g2_closed_form(params, filter, 0)
               - g2_wick_oracle(params, filter, 0)) < 1e-12


def test_mean_photon_number():
    assert mean_photon_number(JpaParams(0, .3)) == .3
    assert abs(mean_photon_number(JpaParams(1.)) - np.sinh(1) ** 2) < 1e-12


def test_delayed_tms_cov():
    j1, j2 = JpaParams(.7, .05), JpaParams(.5, .12, np.pi)
    filter = FilterSpec(1e6)
    V0 = delayed_tms_cov(j1, j2, filter, 0)
    for x in (.3, 1., np.pi, 4.):
        V = delayed_tms_cov(j1, j2, filter, x / filter.omega)
        assert (V.block(0, 0) == V0.block(0, 0)).all()
        assert (V.block(1, 1) == V0.block(1, 1)).all()
        assert np.allclose(V.block(0, 1), sinc(x) * V0.block(0, 1),
                           rtol=1e-12, atol=1e-15)
    with raises(ValueError):
        delayed_tms_cov(j1, j2, filter, [0, 1e-6])
    with raises(TypeError):
        delayed_tms_cov(j1, (.5, .12), filter, 0)


def test_nk_bracket():
    r, n = .8, .1
    mu, c = (1 + 2 * n) * np.cosh(2 * r), (1 + 2 * n) * np.sinh(2 * r)
    s = np.linspace(-.3, 1, 27)
    bracket = nk_bracket(JpaParams(r, n), JpaParams(r, n, np.pi), s)
    assert np.allclose(bracket, (mu - c * np.abs(s)) ** 2, rtol=1e-12)


def test_nk_closed_form():
    r = .65624
    j1, j2 = JpaParams(r), JpaParams(r, phi=np.pi)
    filter = FilterSpec.from_bandwidth(430e3)
    nk0 = nk_closed_form(j1, j2, filter, 0)
    assert abs(nk0 - np.expm1(2 * r) / 2) < 1e-12
    assert abs(nk0 - 1.3577) < 1e-4
    nk = nk_closed_form(j1, j2, filter, np.linspace(0, filter.first_zero, 50))
    assert (np.diff(nk) < 0).all()
    assert isinstance(nk_closed_form(j1, j2, filter, 0), float)


@mark.parametrize("j1, j2, x", [
    (JpaParams(.9, .1), JpaParams(), 0.),
    (JpaParams(.7, .05), JpaParams(.5, .12, np.pi), 1.2654),
    (JpaParams(), JpaParams(), 2.)])
def test_nk_numeric_oracle(j1, j2, x):
    filter = FilterSpec(2.5e6)
    tau = x / filter.omega
    assert abs(nk_closed_form(j1, j2, filter, tau)
               - nk_numeric_oracle(j1, j2, filter, tau)) < 1e-9


def test_nk_closed_form_matches_oracle_on_random_tuples():
    rng, filter = np.random.default_rng(1234), FilterSpec(1e6)
    for _ in range(1000):
        j1, j2 = random_pair(rng)
        tau = rng.uniform(0, 3 * np.pi) / filter.omega
        closed = nk_closed_form(j1, j2, filter, tau)
        assert abs(closed - nk_numeric_oracle(j1, j2, filter, tau)) < 1e-9


@mark.parametrize("seed", range(5))
def test_second_lobe_matches_first_lobe(seed):
    rng, filter = np.random.default_rng(seed), FilterSpec(1e6)
    j1, j2 = random_pair(rng)
    for x in np.linspace(np.pi, 2 * np.pi, 12)[1:-1]:
        matched = bisect(lambda y: sinc(y) + sinc(x), 0, np.pi, xtol=1e-14)
        nk = nk_numeric_oracle(j1, j2, filter, x / filter.omega)
        assert abs(nk - nk_closed_form(j1, j2, filter, x / filter.omega))\
            < 1e-9
        assert abs(nk - nk_closed_form(
            j1, j2, filter, matched / filter.omega)) < 1e-9


@mark.parametrize("r", np.linspace(.1, 1.5, 8))
def test_threshold_argument(r):
    j1, j2 = JpaParams(r), JpaParams(r, phi=np.pi)
    x = threshold_argument(j1, j2)
    assert abs(sinc(x) - np.tanh(r)) < 1e-9
    filter = FilterSpec(1e6)
    assert abs(nk_closed_form(j1, j2, filter, x / filter.omega)) < 1e-9


def test_dephasing_time():
    j1, j2 = tms_resource(5.7)
    filter = FilterSpec.from_bandwidth(430e3)
    assert abs(dephasing_time(j1, j2, filter) - 1.2716e-6) < 1e-9
    levels = np.linspace(1, 10, 10)
    times = [dephasing_time(*tms_resource(s), filter) for s in levels]
    assert (np.diff(times) < 0).all()
    noisy = [dephasing_time(*tms_resource(5.7, n), filter)
             for n in (0., .05, .1)]
    assert (np.diff(noisy) < 0).all()
    single = dephasing_time(JpaParams(.9, .1), JpaParams(), filter)
    assert 0 < single < filter.first_zero


def test_dephasing_time_of_weak_squeezing():
    filter = FilterSpec(1e6)
    gaps = []
    for r in (1e-2, 1e-3, 1e-4):
        tau_d = dephasing_time(JpaParams(r), JpaParams(r, phi=np.pi), filter)
        gaps.append(filter.first_zero - tau_d)
        assert 0 < gaps[-1] * filter.omega < 4 * r
    assert (np.diff(gaps) < 0).all()


def test_never_entangled():
    filter = FilterSpec(1e6)
    for j1, j2 in [(JpaParams(), JpaParams()),
                   (JpaParams(0, .2), JpaParams(0, .2, np.pi)),
                   (JpaParams(.1, .5), JpaParams(.1, .5, np.pi))]:
        with raises(DegenerateStateError):
            dephasing_time(j1, j2, filter)


def test_DephasingCurve():
    with raises(ValueError):
        DephasingCurve("g3", [0], [1])
    with raises(ValueError):
        DephasingCurve("g2", [0, 1], [1])
    with raises(ValueError):
        DephasingCurve("g2", [0, 0], [1, 1])
    with raises(ValueError):
        DephasingCurve("g2", [0, 1], [1, 1], [.1, -.1])
    with raises(ValueError):
        DephasingCurve("g2", [0, 1], [1, 1], [.1])
    curve = DephasingCurve("g2", [0, 1, 2], [3, 2, 1])
    assert repr(curve) == "DephasingCurve('g2', n_points=3)"
    assert list(curve.points())[2] == (2., 1., 0.)
    with raises(ValueError):
        curve.values[0] = 0
    assert len(curve.restrict(-1)) == 0
    assert curve.with_noise(0).stderr is None
    with raises(ValueError):
        curve.with_noise(-1)
    noisy = curve.with_noise(.1, seed=1)
    assert (noisy.values != curve.with_noise(.1, seed=2).values).any()


def test_DephasingCurve_csv(tmp_path):
    curve = nk_curve(*tms_resource(5.7), FilterSpec(1e6),
                     np.linspace(0, 3e-6, 7)).with_noise(.01, seed=0)
    path = str(tmp_path / "nk.csv")
    curve.to_csv(path, "nk")
    with open(path, newline='') as file:
        assert file.readline() == "tau_s,nk,stderr\n"
    loaded = DephasingCurve.from_csv(path, "nk")
    assert (loaded.taus == curve.taus).all()
    assert (loaded.values == curve.values).all()
    assert (loaded.stderr == curve.stderr).all()
    generic = io.StringIO("tau_s,value\n0,1\n")
    assert DephasingCurve.from_csv(generic, "g2").stderr is None


def test_DephasingCurve_malformed_csv():
    with raises(InputError) as error:
        DephasingCurve.from_csv(io.StringIO("tau,nk\n0,1\n"), "nk")
    assert error.value.line == 1
    with raises(InputError) as error:
        DephasingCurve.from_csv(io.StringIO("tau_s,nk\n0,1\n1e-6,x\n"), "nk")
    assert error.value.line == 3
    with raises(InputError):
        DephasingCurve.from_csv(io.StringIO(""), "nk")


def test_curves():
    filter = FilterSpec(1e6)
    taus = np.linspace(0, 2e-6, 5)
    curve = g2_curve(JpaParams(.5), filter, taus)
    assert curve.kind == "g2" and curve.params == (JpaParams(.5), filter)
    assert (curve.values == g2_closed_form(JpaParams(.5), filter, taus)).all()
    j1, j2 = tms_resource(3.)
    curve = nk_curve(j1, j2, filter, taus)
    assert curve.kind == "nk" and curve.stderr is None
    assert abs(curve.values[0] - nk_closed_form(j1, j2, filter, 0.)) < 1e-15


def test_noise_shortens_dephasing_time_at_fixed_r():
    filter = FilterSpec(1e6)
    times = [dephasing_time(JpaParams(.8, n), JpaParams(.8, n, np.pi), filter)
             for n in (0., .1, .2)]
    assert (np.diff(times) < 0).all()
