import json

from pytest import raises
import numpy as np
from tmspy import __version__
from tmspy.cli import *
from tmspy.dephasing import DephasingCurve
from tmspy.estimation import ConvergenceError, FitResult
from tmspy.jpa import r_from_level
from tmspy.utils import loads


def run(*argv):
    return main([str(arg) for arg in argv])


def test_sweep_nk_then_fit(tmp_path):
    curve_path, fit_path = tmp_path / "nk.csv", tmp_path / "fit.json"
    assert run("sweep-nk", "--s1-db", 5.7, "--s2-db", 5.7, "--n", .05,
               "--bandwidth-hz", 430e3, "--points", 40,
               "--out", curve_path) == 0
    curve = DephasingCurve.from_csv(str(curve_path), "nk")
    assert len(curve) == 40 and curve.stderr is None
    assert run("fit", "--model", "nk", "--input", curve_path,
               "--bandwidth-hz", 430e3, "--out", fit_path) == 0
    report = json.loads(fit_path.read_text())
    assert report['converged'] and report['symmetric']
    assert loads(fit_path.read_text()).to_tree() == report
    r = r_from_level(5.7, .05)
    assert abs(report['estimates']['r'] / r - 1) < 1e-6
    assert abs(report['estimates']['n'] / .05 - 1) < 1e-6
    assert abs(report['squeezing_db'] - 5.7) < 1e-5


def test_sweep_g2_then_fit(tmp_path, capsys):
    curve_path = tmp_path / "g2.csv"
    assert run("sweep-g2", "--r", 1, "--omega-rad-s", 2.7e6,
               "--tau-max-s", 2.3e-6, "--points", 50,
               "--out", curve_path) == 0
    assert curve_path.read_text().startswith("tau_s,g2\n")
    assert run("fit", "--model", "g2", "--input", curve_path) == 0
    report = json.loads(capsys.readouterr().out)
    assert abs(report['estimates']['omega'] / 2.7e6 - 1) < 1e-8


def test_sweep_with_noise(capsys):
    argv = ("sweep-g2", "--s-db", 3, "--omega-rad-s", 1e6, "--points", 5,
            "--noise-sigma", .01, "--seed", 3)
    assert run(*argv) == 0
    first = capsys.readouterr().out
    assert first.splitlines()[0] == "tau_s,g2,stderr"
    assert run(*argv) == 0
    assert capsys.readouterr().out == first


def test_exit_codes(tmp_path, capsys):
    assert run("sweep-nk", "--s1-db", 5.7, "--s2-db", 5.7) == 2
    assert "--omega-rad-s" in capsys.readouterr().err
    assert run("sweep-nk", "--r1", .5, "--s1-db", 5.7,
               "--omega-rad-s", 1e6) == 2
    assert run("sweep-nk", "--s1-db", -3, "--n", .2,
               "--omega-rad-s", 1e6) == 2
    assert run("sweep-g2", "--r", 0, "--omega-rad-s", 1e6) == 1
    assert run("dephasing-time", "--omega-rad-s", 1e6) == 1
    malformed = tmp_path / "bad.csv"
    malformed.write_text("tau,nk\n0,1\n")
    assert run("fit", "--model", "nk", "--input", malformed,
               "--omega-rad-s", 1e6) == 2
    assert "line 1" in capsys.readouterr().err
    assert run("fit", "--model", "nk", "--input", tmp_path / "missing.csv",
               "--omega-rad-s", 1e6) == 2
    unordered = tmp_path / "unordered.csv"
    unordered.write_text("tau_s,nk\n1e-6,1\n0,1\n2e-6,1\n3e-6,0\n4e-6,0\n")
    short = tmp_path / "short.csv"
    short.write_text("tau_s,nk\n0,1\n1e-6,.5\n")
    for path in (unordered, short):
        assert run("fit", "--model", "nk", "--input", path,
                   "--omega-rad-s", 1e6) == 2
    taus = np.arange(6) * 1e-7
    negative = tmp_path / "negative.csv"
    DephasingCurve("g2", taus, [2, 1.5, -1, 1, 1, 1]).to_csv(
        str(negative), "g2")
    exact = tmp_path / "exact.csv"
    DephasingCurve("nk", taus, np.ones(6), np.zeros(6)).to_csv(
        str(exact), "nk")
    assert run("fit", "--model", "g2", "--input", negative) == 2
    assert run("fit", "--model", "nk", "--input", exact,
               "--omega-rad-s", 1e6) == 2
    with raises(SystemExit) as exit:
        run("fit", "--model", "g3", "--input", malformed)
    assert exit.value.code == 2


def test_version(capsys):
    with raises(SystemExit) as exit:
        run("--version")
    assert exit.value.code == 0
    assert capsys.readouterr().out.strip() == __version__


def test_fit_not_converged(tmp_path, monkeypatch):
    partial = FitResult(
        "g2", {'amplitude': 1., 'omega': 1e6}, {}, np.eye(2), 1., .1, 10,
        200, False, 1e-3)

    def fit_g2(curve, init=None):
        raise ConvergenceError(partial)

    monkeypatch.setattr("tmspy.cli.fit_g2", fit_g2)
    curve_path, fit_path = tmp_path / "g2.csv", tmp_path / "fit.json"
    curve_path.write_text("tau_s,g2\n0,3\n1e-6,1\n")
    assert run("fit", "--model", "g2", "--input", curve_path,
               "--out", fit_path) == 3
    report = json.loads(fit_path.read_text())
    assert not report['converged'] and report['n_iterations'] == 200


def write_config(path, **changes):
    tree = {"j1": {"r": .3}, "j2": {"r": .3, "phi": np.pi},
            "bandwidth_hz": 1e6, "sample_rate_hz": 8e6, "n_samples": 4096,
            "n_records": 10, "seed": 11}
    tree.update(changes)
    path.write_text(json.dumps(tree))
    return path


def test_simulate(tmp_path):
    config_path = write_config(tmp_path / "sim.json")
    for threads in (1, 3):
        prefix = "{}/t{}_".format(tmp_path, threads)
        assert run("simulate", "--config", config_path, "--out-prefix",
                   prefix, "--tau-grid", "0,5e-7",
                   "--threads", threads) == 0
    for name in ("nk.csv", "covariance.json"):
        first = (tmp_path / ("t1_" + name)).read_text()
        assert first == (tmp_path / ("t3_" + name)).read_text()
    assert not (tmp_path / "t1_g2.csv").exists()
    text = (tmp_path / "t1_covariance.json").read_text()
    report = json.loads(text)
    assert report['factory'] == "simulation.CovarianceEstimate"
    assert report['convention'] == "vacuum_variance=1"
    assert len(report['entries']) == len(report['stderr']) == 16
    estimate = loads(text)
    assert estimate.config.seed == 11 and estimate.state.n_modes == 2
    assert estimate.stderr.shape == (4, 4) and (estimate.stderr > 0).all()
    curve = DephasingCurve.from_csv(str(tmp_path / "t1_nk.csv"), "nk")
    assert len(curve) == 2 and (curve.stderr > 0).all()


def test_simulate_single_jpa(tmp_path):
    config_path = write_config(
        tmp_path / "sim.json", j1={"r": .8}, j2={}, n_samples=16384)
    prefix = "{}/single_".format(tmp_path)
    assert run("simulate", "--config", config_path, "--out-prefix", prefix,
               "--tau-grid", "0,1e-6", "--seed", 5) == 0
    curve = DephasingCurve.from_csv(prefix + "g2.csv", "g2")
    assert curve.values[0] > curve.values[1]


def test_simulate_errors(tmp_path, capsys):
    few = write_config(tmp_path / "few.json", n_records=5)
    assert run("simulate", "--config", few) == 2
    assert "'/n_records'" in capsys.readouterr().err
    unknown = write_config(tmp_path / "unknown.json", colour="blue")
    assert run("simulate", "--config", unknown) == 2
    broken = tmp_path / "broken.json"
    broken.write_text("{")
    assert run("simulate", "--config", broken) == 2
    assert run("simulate", "--config", tmp_path / "missing.json") == 2


def test_marginals(tmp_path):
    prefix = "{}/m_".format(tmp_path)
    assert run("marginals", "--s1-db", 3, "--range", 2, "--step", .1,
               "--out-prefix", prefix) == 0
    for axes in ("q1p1", "q2p1"):
        with open(prefix + axes + ".csv") as file:
            header = file.readline().rstrip("\n").split(",")
            values = np.loadtxt(file, delimiter=",")
        assert header[0] == "{}\\{}".format(axes[:2], axes[2:])
        assert len(header) == 42 and values.shape == (41, 42)
        assert (values[:, 1:] >= 0).all()
    local = np.loadtxt(prefix + "q1p1.csv", delimiter=",", skiprows=1)
    assert np.abs(local[:, 1:] - local[:, 1:].T).max() < 1e-12
    assert run("marginals", "--s1-db", 3, "--axes", "q1x3") == 2
    assert run("marginals", "--s1-db", 3, "--range", 1, "--step", 3) == 2


def test_protocols(tmp_path):
    path = tmp_path / "qt.csv"
    assert run("protocols", "--protocol", "qt", "--s-db", 5.7,
               "--bandwidth-hz", 430e3, "--points", 10, "--out", path) == 0
    lines = path.read_text().splitlines()
    assert lines[0] == "tau_s,fidelity" and len(lines) == 11
    tau, fidelity = map(float, lines[1].split(","))
    assert tau == 0 and abs(fidelity - .78793) < 1e-5
    assert abs(float(lines[-1].split(",")[1]) - .5) < 1e-12
    assert run("protocols", "--protocol", "rsp", "--s-db", 5.7,
               "--omega-rad-s", 1e6, "--tau-grid", "1e-6,0") == 1


def test_dephasing_time(capsys):
    assert run("dephasing-time", "--s1-db", 5.7, "--s2-db", 5.7,
               "--bandwidth-hz", 430e3) == 0
    report = json.loads(capsys.readouterr().out)
    assert set(report) == {'omega_rad_s', 'tau_d_s', 'threshold_argument'}
    assert abs(report['tau_d_s'] - 1.2716e-6) < 1e-9
    assert abs(report['omega_rad_s'] - np.pi * 430e3) < 1e-6
