"""Command line interface for `immersa`

Every verb maps to one library operation. Numbers go to standard output
with Python's repr, larger results are written with `convert` in the format
named by --format or by the suffix of -o.

Contents:
    InputError: raised when input files or options cannot be used.
    build_parser: returns the argparse parser of the `immersa` command.
    execute: runs a parsed command and returns its exit status.
    main: entry point of the `immersa` script.

To Do:


"""
from __future__ import annotations

import argparse
import concurrent.futures
import itertools
import json
import logging
import pathlib
import sys
from typing import TYPE_CHECKING, Any

import numpy as np

from . import configuration, convert, geodesics, metrics, reparam, srv
from .clock import timer
from .curves import DiscreteCurve, PathOfCurves, validate_regular

if TYPE_CHECKING:
    from collections.abc import Callable, Sequence

logger = logging.getLogger(__name__)

FORMATS: tuple[str, ...] = ('json', 'csv', 'svg')
PARSE_FAILURE: int = 2
NUMERIC_FAILURE: int = 3


class InputError(ValueError):
    """Input files or options that cannot be used."""


""" Helpers """

def _write(text: str) -> None:
    sys.stdout.write(text if text.endswith('\n') else text + '\n')
    return

def _metric(text: str) -> metrics.MetricSpec:
    try:
        return metrics.parse_metric(text)
    except ValueError as error:
        raise InputError(str(error)) from error

def _curves(paths: Sequence[str], samples: int | None) -> list[DiscreteCurve]:
    curves = []
    for path in paths:
        try:
            curve = convert.load_curve(path, samples)
        except (OSError, ValueError) as error:
            raise InputError(f'cannot read {path}: {error}') from error
        if not isinstance(curve, DiscreteCurve):
            raise InputError(f'{path} holds an SRV curve, not a curve')
        curves.append(curve)
    return curves

def _field(path: str) -> np.ndarray:
    try:
        text = convert.pathlibify(path).read_text(encoding = 'utf-8')
        values = np.array(json.loads(text)['points'], dtype = float)
    except (OSError, ValueError, KeyError, TypeError) as error:
        raise InputError(f'cannot read velocity {path}: {error}') from error
    if values.ndim != 2:
        raise InputError(f'velocity in {path} must be a list of vectors')
    return values

def _format(command: argparse.Namespace) -> str | None:
    if command.format:
        return command.format
    if command.output:
        suffix = pathlib.Path(command.output).suffix.lstrip('.').lower()
        if suffix in FORMATS:
            return suffix
    return 'json' if command.output else None

def _emit(command: argparse.Namespace, item: Any) -> None:
    """Writes `item` to -o, if given, in the requested format."""
    form = _format(command)
    if not command.output:
        return
    if form == 'svg':
        if isinstance(item, srv.SrvGeodesic):
            item = item.path
        if isinstance(item, DiscreteCurve):
            item = [item]
        if not isinstance(item, (PathOfCurves, list)):
            raise InputError('svg output needs curves or a path of curves')
        convert.save_svg(item, command.output)
    elif form == 'csv':
        if isinstance(item, PathOfCurves):
            rows = [
                (float(t), i, *point)
                for t, c in zip(item.times, item)
                for i, point in enumerate(c.points.tolist())]
            convert.save_csv(rows, command.output, header = ('t', 'i', 'x', 'y'))
        elif isinstance(item, DiscreteCurve):
            convert.save_csv(item.points.tolist(), command.output)
        else:
            raise InputError('csv output needs a curve or a path of curves')
    else:
        convert.save_json(item, command.output)
    return

def _parallel(function: Callable[[Any], Any], items: Sequence[Any]) -> list[Any]:
    if configuration._THREADS > 1 and len(items) > 1:
        with concurrent.futures.ThreadPoolExecutor(
                max_workers = configuration._THREADS) as executor:
            return list(executor.map(function, items))
    return [function(item) for item in items]


""" Verbs """

@timer
def validate(command: argparse.Namespace) -> int:
    """Reports the regularity of each input curve."""
    status = 0
    curves = _curves(command.curves, command.samples or 0)
    for path, curve in zip(command.curves, curves):
        report = validate_regular(curve, command.epsilon)
        _write(
            f'{path}: {"ok" if report else "not regular"} '
            f'min_speed={report.min_speed!r}')
        status = status or (0 if report else NUMERIC_FAILURE)
    return status

@timer
def srvt(command: argparse.Namespace) -> int:
    """Writes the SRV representation of a curve."""
    curve = _curves([command.curve], command.samples)[0]
    q = srv.srvt(curve)
    if command.output:
        _emit(command, q)
    else:
        _write(json.dumps(convert.dictify(q)))
    return 0

@timer
def distance(command: argparse.Namespace) -> int:
    """Prints the distance of two curves, or a matrix for more."""
    spec = _metric(command.metric)
    curves = _curves(command.curves, command.samples)
    if len(curves) < 2:
        raise InputError('distance needs at least two curves')
    def measure(pair: tuple[int, int]) -> float:
        first, second = curves[pair[0]], curves[pair[1]]
        if command.shape:
            return geodesics.shape_distance(
                spec, first, second, steps = command.steps)[0]
        return geodesics.geodesic_distance(
            spec, first, second, steps = command.steps)
    if len(curves) == 2:
        _write(repr(measure((0, 1))))
        return 0
    pairs = list(itertools.combinations(range(len(curves)), 2))
    matrix = np.zeros((len(curves), len(curves)))
    for (i, j), value in zip(pairs, _parallel(measure, pairs)):
        matrix[i, j] = matrix[j, i] = value
    rows = [[path, *row] for path, row in zip(command.curves, matrix.tolist())]
    header = ('curve', *command.curves)
    if command.output:
        convert.save_csv(rows, command.output, header = header)
    else:
        _write(','.join(header))
        for row in rows:
            _write(','.join(str(value) for value in row))
    return 0

@timer
def geodesic(command: argparse.Namespace) -> int:
    """Computes the geodesic between two curves and prints its length."""
    first, second = _curves([command.start, command.end], command.samples)
    if command.metric == 'srv':
        result = srv.srv_geodesic(
            first, second, steps = command.steps, refine = command.refine)
        _write(repr(result.length))
        _emit(command, result)
        return 0
    spec = _metric(command.metric)
    straightened = geodesics.path_straighten(
        spec, first, second, steps = command.steps)
    _write(repr(geodesics.path_length(spec, straightened.path)))
    _emit(command, straightened.path)
    if not straightened.converged:
        logger.warning('path straightening stopped before converging')
    return 0

@timer
def match(command: argparse.Namespace) -> int:
    """Matches the second curve to the first and prints the distance."""
    first, second = _curves([command.start, command.end], command.samples)
    if command.joint:
        result = reparam.joint_match(
            first, second, seeds = command.seeds)
    elif first.closed:
        result = reparam.match_closed(
            first, second, seeds = command.seeds, coarse = command.coarse)
    else:
        result = reparam.dp_match(first, second)
    _write(repr(result.distance))
    _emit(command, result)
    return 0

@timer
def mean(command: argparse.Namespace) -> int:
    """Computes the Karcher mean of the input curves."""
    spec = _metric(command.metric)
    curves = _curves(command.curves, command.samples)
    result = geodesics.karcher_mean(spec, curves, steps = command.steps)
    if command.output:
        _emit(command, result)
    else:
        _write(json.dumps(convert.dictify(result)))
    return 0

@timer
def shoot(command: argparse.Namespace) -> int:
    """Integrates a geodesic from a curve and an initial velocity."""
    spec = _metric(command.metric)
    velocity = _field(command.velocity)
    curve = _curves([command.curve], len(velocity))[0]
    if velocity.shape != curve.points.shape:
        raise InputError(
            f'velocity of shape {velocity.shape} does not fit a curve of '
            f'shape {curve.points.shape}')
    path, report = geodesics.integrate_geodesic(
        spec, curve, velocity, dt = command.dt, horizon = command.horizon)
    _write(json.dumps(convert.dictify(report), indent = 2))
    _emit(command, path)
    return 0

@timer
def probe(command: argparse.Namespace) -> int:
    """Runs a completeness probe and prints its report."""
    coefficients = None
    if command.coefficients:
        try:
            coefficients = tuple(
                float(a) for a in command.coefficients.split(','))
        except ValueError as error:
            raise InputError(f'bad coefficients: {error}') from error
    report = geodesics.completeness_probe(
        command.scenario,
        coefficients = coefficients,
        horizon = command.horizon,
        samples = command.samples,
        dt = command.dt)
    _write(json.dumps(convert.dictify(report), indent = 2))
    if command.output:
        convert.save_json(report, command.output)
    return 0

@timer
def vanish_demo(command: argparse.Namespace) -> int:
    """Tabulates sawtooth path lengths against the number of teeth."""
    spec = _metric(command.metric)
    try:
        teeth = [int(k) for k in command.teeth.split(',')]
    except ValueError as error:
        raise InputError(f'bad teeth list: {error}') from error
    def lengths(k: int) -> tuple[int, float, float]:
        path = metrics.sawtooth_path(
            command.r0, command.r1, k, steps = command.steps)
        normal = metrics.path_functionals(spec, path, 'normal').length
        full = metrics.path_functionals(spec, path, 'full').length
        return k, normal, full
    rows = _parallel(lengths, teeth)
    header = ('teeth', 'normal_length', 'full_length')
    if command.output:
        convert.save_csv(rows, command.output, header = header)
    else:
        _write(','.join(header))
        for row in rows:
            _write(','.join(str(value) for value in row))
    return 0


""" Parser """

def build_parser() -> argparse.ArgumentParser:
    """Returns the parser of the `immersa` command.

    Returns:
        argparse.ArgumentParser: with one subparser per verb.

    """
    common = argparse.ArgumentParser(add_help = False)
    common.add_argument('--samples', '-n', type = int, default = None,
        help = 'samples per curve (default: 256)')
    common.add_argument('--steps', '-T', type = int, default = None,
        help = 'time steps of a path (default: 32)')
    common.add_argument('--output', '-o', default = None,
        help = 'output file')
    common.add_argument('--format', choices = FORMATS, default = None,
        help = 'output format (default: from the suffix of -o)')
    parser = argparse.ArgumentParser(
        prog = 'immersa',
        description = 'Riemannian shape analysis of curves.')
    parser.add_argument('--log-level', default = 'WARNING',
        choices = ['DEBUG', 'INFO', 'WARNING', 'ERROR'],
        help = 'logging level on standard error (default: WARNING)')
    verbs = parser.add_subparsers(dest = 'verb', required = True)
    sub = verbs.add_parser('validate', parents = [common],
        help = 'check that curves are regular')
    sub.add_argument('curves', nargs = '+')
    sub.add_argument('--epsilon', type = float, default = None)
    sub.set_defaults(handler = validate)
    sub = verbs.add_parser('srvt', parents = [common],
        help = 'square root velocity transform of a curve')
    sub.add_argument('curve')
    sub.set_defaults(handler = srvt)
    sub = verbs.add_parser('distance', parents = [common],
        help = 'geodesic distance, or a distance matrix')
    sub.add_argument('curves', nargs = '+')
    sub.add_argument('--metric', '-m', default = 'elastic:a=1,b=0.5')
    sub.add_argument('--shape', action = 'store_true',
        help = 'minimize over reparametrizations of the second curve')
    sub.set_defaults(handler = distance)
    sub = verbs.add_parser('geodesic', parents = [common],
        help = 'geodesic between two curves')
    sub.add_argument('start')
    sub.add_argument('end')
    sub.add_argument('--metric', '-m', default = 'srv',
        help = "'srv' for the SRV straight line, or a metric string")
    sub.add_argument('--refine', type = int, default = 0)
    sub.set_defaults(handler = geodesic)
    sub = verbs.add_parser('match', parents = [common],
        help = 'elastic matching by dynamic programming')
    sub.add_argument('start')
    sub.add_argument('end')
    sub.add_argument('--seeds', type = int, default = None)
    sub.add_argument('--coarse', type = int, default = None)
    sub.add_argument('--joint', action = 'store_true')
    sub.set_defaults(handler = match)
    sub = verbs.add_parser('mean', parents = [common],
        help = 'Karcher mean of curves')
    sub.add_argument('curves', nargs = '+')
    sub.add_argument('--metric', '-m', default = 'sobolev:1,0,1')
    sub.set_defaults(handler = mean)
    sub = verbs.add_parser('shoot', parents = [common],
        help = 'integrate a geodesic from an initial velocity')
    sub.add_argument('curve')
    sub.add_argument('--velocity', '-u', required = True,
        help = 'JSON file whose "points" hold the initial velocity')
    sub.add_argument('--metric', '-m', default = 'sobolev:1,0,1')
    sub.add_argument('--dt', type = float, default = None)
    sub.add_argument('--horizon', type = float, default = 1.0)
    sub.set_defaults(handler = shoot)
    sub = verbs.add_parser('probe', parents = [common],
        help = 'shrinking circle completeness experiment')
    sub.add_argument('--scenario', required = True,
        choices = ['l2-collapse', 'sobolev-longtime'])
    sub.add_argument('--coefficients', default = None)
    sub.add_argument('--horizon', type = float, default = None)
    sub.add_argument('--dt', type = float, default = None)
    sub.set_defaults(handler = probe)
    sub = verbs.add_parser('vanish-demo', parents = [common],
        help = 'sawtooth path lengths against the number of teeth')
    sub.add_argument('--metric', '-m', default = 'l2')
    sub.add_argument('--teeth', default = '4,16,64')
    sub.add_argument('--r0', type = float, default = 1.0)
    sub.add_argument('--r1', type = float, default = 2.0)
    sub.set_defaults(handler = vanish_demo)
    return parser

def execute(command: argparse.Namespace) -> int:
    """Runs a parsed command.

    Args:
        command: namespace produced by `build_parser`.

    Returns:
        int: 0 on success, 2 if inputs or options cannot be used, 3 if the
            computation fails.

    """
    try:
        return command.handler(command)
    except InputError as error:
        sys.stderr.write(f'immersa {command.verb}: {error}\n')
        return PARSE_FAILURE
    except (ValueError, ArithmeticError) as error:
        sys.stderr.write(f'immersa {command.verb}: {error}\n')
        return NUMERIC_FAILURE

def main(argv: Sequence[str] | None = None) -> int:
    """Parses `argv`, configures logging and runs the command.

    Args:
        argv: arguments without the program name. Defaults to sys.argv.

    Returns:
        int: exit status.

    """
    command = build_parser().parse_args(argv)
    logging.basicConfig(
        level = getattr(logging, command.log_level),
        format = '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream = sys.stderr)
    return execute(command)


if __name__ == '__main__':
    sys.exit(main())
