# -*- coding: utf-8 -*-

"""
The ``tmspy`` command line: dephasing sweeps, curve fits, Monte Carlo
simulation, Wigner marginals and protocol fidelities, with CSV and JSON
outputs.

Exit codes are 0 on success, 1 on numerical errors, 2 on invalid flags or
inputs and 3 when a fit does not converge.

Summary
-------

.. admonition:: Functions

    .. autosummary::
        :template: function.rst
        :nosignatures:
        :toctree:

        main
        build_parser
        cmd_sweep_nk
        cmd_sweep_g2
        cmd_fit
        cmd_simulate
        cmd_marginals
        cmd_protocols
        cmd_dephasing_time

Example
-------
>>> main(["dephasing-time", "--s1-db", "5.7", "--s2-db", "5.7",
...       "--bandwidth-hz", "430e3"])  # doctest: +ELLIPSIS
{...
  "tau_d_s": 1.27...e-06...
0
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace

import numpy

from tmspy import __version__, config, messages
from tmspy.cat import AxiomError
from tmspy.dephasing import (
    DephasingCurve, FilterSpec, delayed_tms_cov, g2_curve, nk_curve,
    threshold_argument)
from tmspy.estimation import ConvergenceError, CurveError, fit_g2, fit_nk
from tmspy.gaussian import QUADRATURES, wigner_marginal_grid
from tmspy.jpa import JpaParams
from tmspy.protocols import PROTOCOLS, fidelity_sweep
from tmspy.simulation import (
    CALIBRATION_STREAM, ConfigError, SimulationConfig, calibration_config,
    estimate_covariance, estimate_g2_curve, estimate_nk_curve,
    generate_records)
from tmspy.utils import InputError, dumps, write_csv

logger = logging.getLogger(__name__)

AXES = tuple(q + str(i) for i in (1, 2) for q in QUADRATURES)
SIMULATION_POINTS = 6


class UsageError(ValueError):
    """ Invalid command line flags. """


def _output(path: str):
    return sys.stdout if path == "-" else path


def _write_text(path: str, text: str):
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="ascii", newline="\n") as file:
            file.write(text)


def _write_json(path: str, obj):
    _write_text(path, dumps(obj, indent=2, sort_keys=True) + "\n")


def _float_list(raw: str) -> list[float]:
    try:
        return [float(x) for x in raw.split(",") if x.strip()]
    except ValueError as error:
        raise UsageError(messages.BAD_VALUE.format(raw)) from error


def _filter(args) -> FilterSpec:
    if args.omega_rad_s is not None:
        return FilterSpec(args.omega_rad_s)
    if args.bandwidth_hz is not None:
        return FilterSpec.from_bandwidth(args.bandwidth_hz)
    raise UsageError(messages.MISSING_FILTER)


def _jpa(r, s_db, n, phi) -> JpaParams:
    if r is not None and s_db is not None:
        raise UsageError(messages.BOTH_R_AND_LEVEL)
    try:
        if s_db is not None:
            return JpaParams.from_level(s_db, n or 0., phi)
        return JpaParams(r or 0., n or 0., phi)
    except ValueError as error:
        raise UsageError(str(error)) from error


def _pair(args) -> tuple[JpaParams, JpaParams]:
    n1 = args.n if args.n1 is None else args.n1
    n2 = args.n if args.n2 is None else args.n2
    return (_jpa(args.r1, args.s1_db, n1, 0.),
            _jpa(args.r2, args.s2_db, n2, numpy.pi))


def _tau_grid(args, filter: FilterSpec) -> numpy.ndarray:
    if getattr(args, "tau_grid", None):
        return numpy.array(_float_list(args.tau_grid))
    tau_max = filter.first_zero if args.tau_max_s is None else args.tau_max_s
    if not tau_max > 0 or args.points < 2:
        raise UsageError(messages.BAD_VALUE.format((tau_max, args.points)))
    return numpy.linspace(0, tau_max, args.points)


def cmd_sweep_nk(args) -> int:
    """ Write the closed-form negativity kernel as CSV ``tau_s,nk``. """
    filter, (j1, j2) = _filter(args), _pair(args)
    curve = nk_curve(j1, j2, filter, _tau_grid(args, filter))
    curve.with_noise(args.noise_sigma, args.seed).to_csv(
        _output(args.out), "nk")
    return 0


def cmd_sweep_g2(args) -> int:
    """ Write the closed-form second order coherence as CSV ``tau_s,g2``. """
    filter = _filter(args)
    params = _jpa(args.r, args.s_db, args.n, 0.)
    curve = g2_curve(params, filter, _tau_grid(args, filter))
    curve.with_noise(args.noise_sigma, args.seed).to_csv(
        _output(args.out), "g2")
    return 0


def cmd_fit(args) -> int:
    """
    Fit a CSV curve and write a JSON report, still written when the fit
    does not converge.
    """
    curve = DephasingCurve.from_csv(
        sys.stdin if args.input == "-" else args.input, args.model)
    try:
        if args.model == "g2":
            init = None if args.init_omega is None else {
                'omega': args.init_omega}
            result = fit_g2(curve, init)
        else:
            filter = _filter(args)
            result = fit_nk(curve, filter.omega, args.symmetric,
                            first_lobe_only=not args.full_range)
    except ConvergenceError as error:
        _write_json(args.out, error.result)
        raise
    _write_json(args.out, result)
    return 0


def _load_simulation(args) -> SimulationConfig:
    with open(args.config, encoding="utf-8") as file:
        tree = json.load(file)
    sim = SimulationConfig.from_tree(tree)
    if args.seed is not None:
        sim = replace(sim, seed=args.seed)
    if sim.n_records < config.MIN_BATCHES:
        raise ConfigError("/n_records", messages.TOO_FEW_RECORDS.format(
            config.MIN_BATCHES, sim.n_records))
    return sim


def cmd_simulate(args) -> int:
    """
    Simulate a configuration, then write the estimated curves with their
    standard errors and the reconstructed covariance at the configured
    delay. The coherence curve is only written for a single JPA.
    """
    sim = _load_simulation(args)
    taus = numpy.array(_float_list(args.tau_grid)) if args.tau_grid\
        else numpy.linspace(0, sim.filter.first_zero, SIMULATION_POINTS)
    prefix = args.out_prefix
    estimate_nk_curve(sim, taus, workers=args.threads).to_csv(
        prefix + "nk.csv", "nk")
    if sim.j2.is_vacuum and not sim.j1.is_vacuum:
        estimate_g2_curve(sim, taus, workers=args.threads).to_csv(
            prefix + "g2.csv", "g2")
    records = generate_records(sim, workers=args.threads)
    calibration = generate_records(
        calibration_config(sim), CALIBRATION_STREAM, args.threads)
    _write_json(prefix + "covariance.json",
                estimate_covariance(records, calibration))
    logger.info("wrote simulation outputs with prefix %r", prefix)
    return 0


def _axes(raw: str) -> list[tuple[str, str]]:
    pairs = []
    for token in raw.split(","):
        pair = (token.strip()[:2], token.strip()[2:])
        if not all(axis in AXES for axis in pair):
            raise UsageError(messages.UNKNOWN_AXIS.format(AXES, token))
        pairs.append(pair)
    return pairs


def cmd_marginals(args) -> int:
    """
    Write one CSV grid of the Wigner marginal per pair of quadratures of
    the two-mode squeezed state.
    """
    pairs = _axes(args.axes)
    s2_db = args.s1_db if args.s2_db is None else args.s2_db
    j1 = _jpa(None, args.s1_db, args.n, args.phi)
    j2 = _jpa(None, s2_db, args.n, args.phi + numpy.pi)
    if not 0 < args.step <= 2 * args.range:
        raise UsageError(messages.BAD_VALUE.format((args.range, args.step)))
    state = delayed_tms_cov(j1, j2, FilterSpec(1.), 0.)
    for pair in pairs:
        marginal = wigner_marginal_grid(
            state, pair, -args.range, args.range, args.step)
        path = "{}{}{}.csv".format(args.out_prefix, *pair)
        write_csv(path, marginal.header(), marginal.rows())
        logger.info("wrote %s", path)
    return 0


def cmd_protocols(args) -> int:
    """ Write the fidelity of a protocol as CSV ``tau_s,fidelity``. """
    filter = _filter(args)
    j1, j2 = _jpa(None, args.s_db, args.n, 0.), _jpa(
        None, args.s_db, args.n, numpy.pi)
    sweep = fidelity_sweep(
        args.protocol, j1, j2, filter, _tau_grid(args, filter))
    write_csv(_output(args.out), ["tau_s", "fidelity"],
              ((result.tau, result.fidelity) for result in sweep))
    return 0


def cmd_dephasing_time(args) -> int:
    """ Write the dephasing time and the threshold argument as JSON. """
    filter, (j1, j2) = _filter(args), _pair(args)
    x = threshold_argument(j1, j2)
    report = {'tau_d_s': x / filter.omega, 'threshold_argument': x,
              'omega_rad_s': filter.omega}
    _write_text(args.out, json.dumps(report, indent=2, sort_keys=True) + "\n")
    return 0


def _add_filter_flags(parser):
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--omega-rad-s", type=float,
                       help="filter rate Omega in rad/s")
    group.add_argument("--bandwidth-hz", type=float,
                       help="filter full width B in Hz, Omega = pi B")


def _add_grid_flags(parser, grid: bool = False):
    parser.add_argument("--tau-max-s", type=float,
                        help="largest delay, by default pi / Omega")
    parser.add_argument("--points", type=int, default=100)
    if grid:
        parser.add_argument("--tau-grid", help="comma-separated delays")


def _add_pair_flags(parser):
    for k in (1, 2):
        parser.add_argument("--r{}".format(k), type=float)
        parser.add_argument("--n{}".format(k), type=float)
        parser.add_argument("--s{}-db".format(k), type=float)
    parser.add_argument("--n", type=float, default=0.,
                        help="noise photons of both JPAs")


def _add_noise_flags(parser):
    parser.add_argument("--noise-sigma", type=float, default=0.)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--out", default="-")


def build_parser() -> argparse.ArgumentParser:
    """ The parser of the ``tmspy`` command line. """
    parser = argparse.ArgumentParser(
        prog="tmspy", description=__doc__.split("\n\n")[0].strip())
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="count", default=0)
    parser.add_argument("-q", "--quiet", action="store_true")
    commands = parser.add_subparsers(dest="subcommand", required=True)

    sweep_nk = commands.add_parser("sweep-nk", help="negativity kernel")
    _add_pair_flags(sweep_nk)
    _add_filter_flags(sweep_nk)
    _add_grid_flags(sweep_nk)
    _add_noise_flags(sweep_nk)
    sweep_nk.set_defaults(command=cmd_sweep_nk)

    sweep_g2 = commands.add_parser("sweep-g2", help="second order coherence")
    sweep_g2.add_argument("--r", type=float)
    sweep_g2.add_argument("--s-db", type=float)
    sweep_g2.add_argument("--n", type=float, default=0.)
    _add_filter_flags(sweep_g2)
    _add_grid_flags(sweep_g2)
    _add_noise_flags(sweep_g2)
    sweep_g2.set_defaults(command=cmd_sweep_g2)

    fit = commands.add_parser("fit", help="fit a curve")
    fit.add_argument("--model", choices=("g2", "nk"), required=True)
    fit.add_argument("--input", required=True)
    fit.add_argument("--symmetric", default=True,
                     action=argparse.BooleanOptionalAction)
    fit.add_argument("--full-range", action="store_true",
                     help="fit beyond the first lobe of the sinc")
    fit.add_argument("--init-omega", type=float)
    fit.add_argument("--out", default="-")
    _add_filter_flags(fit)
    fit.set_defaults(command=cmd_fit)

    simulate = commands.add_parser("simulate", help="Monte Carlo simulation")
    simulate.add_argument("--config", required=True)
    simulate.add_argument("--seed", type=int)
    simulate.add_argument("--out-prefix", default="")
    simulate.add_argument("--tau-grid", help="comma-separated delays")
    simulate.add_argument("--threads", type=int,
                          default=config.DEFAULT_WORKERS)
    simulate.set_defaults(command=cmd_simulate)

    marginals = commands.add_parser("marginals", help="Wigner marginals")
    marginals.add_argument("--s1-db", type=float, required=True)
    marginals.add_argument("--s2-db", type=float)
    marginals.add_argument("--n", type=float, default=0.)
    marginals.add_argument("--phi", type=float, default=numpy.pi / 2)
    marginals.add_argument("--axes", default="q1p1,q2p1")
    marginals.add_argument("--range", type=float, default=6.)
    marginals.add_argument("--step", type=float, default=.05)
    marginals.add_argument("--out-prefix", default="marginal_")
    marginals.set_defaults(command=cmd_marginals)

    protocols = commands.add_parser("protocols", help="protocol fidelities")
    protocols.add_argument("--protocol", choices=PROTOCOLS, required=True)
    protocols.add_argument("--s-db", type=float, required=True)
    protocols.add_argument("--n", type=float, default=0.)
    _add_filter_flags(protocols)
    _add_grid_flags(protocols, grid=True)
    protocols.add_argument("--out", default="-")
    protocols.set_defaults(command=cmd_protocols)

    dephasing = commands.add_parser("dephasing-time", help="dephasing time")
    _add_pair_flags(dephasing)
    _add_filter_flags(dephasing)
    dephasing.add_argument("--out", default="-")
    dephasing.set_defaults(command=cmd_dephasing_time)
    return parser


def _configure_logging(args):
    if args.quiet:
        level = logging.ERROR
    else:
        level = (logging.WARNING, logging.INFO, logging.DEBUG)[
            min(args.verbose, 2)]
    logging.basicConfig(
        level=level, stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s")


def _fail(error: Exception, code: int) -> int:
    sys.stderr.write("tmspy: error: {}\n".format(error))
    return code


def main(argv: list[str] = None) -> int:
    """
    Run the command line and return its exit code.

    Parameters:
        argv : The arguments, by default those of the process.
    """
    args = build_parser().parse_args(argv)
    _configure_logging(args)
    try:
        return args.command(args)
    except ConvergenceError as error:
        return _fail(error, 3)
    except (UsageError, InputError, CurveError, ConfigError,
            json.JSONDecodeError, OSError) as error:
        return _fail(error, 2)
    except (ValueError, ArithmeticError, RuntimeError, AxiomError,
            numpy.linalg.LinAlgError) as error:
        return _fail(error, 1)
