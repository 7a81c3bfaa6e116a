"""Geodesics, distances and means

Initial value problems are integrated in Hamiltonian form. For a Sobolev
metric with coefficients a₀, ..., a_n the discrete kinetic energy is
½ uᵀM(c)u, where M(c) is the quadrature form returned by
`metrics.sobolev_form`. The stored momentum is p = M(c)u divided by the
quadrature weights, which on closed curves is L_c c_t |c′| at every node.
Boundary value problems minimize the discrete path energy over the interior
curves of a path with L-BFGS-B.

Contents:
    GeodesicState: curve, momentum and time of a geodesic.
    BlowupReport: why and when an integration stopped.
    StraightenResult: path, convergence flag and energy history.
    velocity: recovers c_t from the momentum of a state.
    integrate_geodesic: integrates the geodesic equation from (c₀, u₀).
    exponential: returns the curve at time 1 of a geodesic.
    path_straighten: minimizes the path energy between two curves.
    path_length: Σ √G·Δt over the segments of a path.
    geodesic_distance: length of the straightened path.
    shape_distance: geodesic distance minimized over reparametrizations.
    log_map: shoots for the initial velocity of a geodesic.
    karcher_mean: minimizer of the sum of squared geodesic distances.
    completeness_probe: shrinking circle experiment under a metric.

To Do:
    Replace the dense open-curve solve with a banded one for large N.

"""
from __future__ import annotations

import dataclasses
import logging
import math
from typing import TYPE_CHECKING, NamedTuple

import numpy as np
import scipy.fft
import scipy.linalg
import scipy.optimize
import scipy.sparse.linalg

from . import configuration
from .curves import (
    CLOSED,
    DiscreteCurve,
    PathOfCurves,
    TangentField,
    fieldify,
    quadrature_weights,
    theta_derivative,
)
from .metrics import (
    L2,
    Elastic,
    MetricSpec,
    Sobolev,
    metric_eval,
    metric_gradient,
    sobolev_form,
)
from .reparam import MatchResult, Reparametrization, apply_reparam, dp_match
from .shapes import circle

if TYPE_CHECKING:
    from collections.abc import Sequence

logger = logging.getLogger(__name__)

SPEED_FLOOR: str = 'speed_floor'
CURVATURE_CEILING: str = 'curvature_ceiling'
STEP_FLOOR: str = 'step_floor'
NONE: str = 'none'
SCENARIOS: tuple[str, ...] = ('l2_collapse', 'sobolev_longtime')

# Largest relative change of |c′| allowed in one integration step.
_RATE = 0.05
# Largest relative change of the kinetic energy in one accepted step.
_ENERGY_JUMP = 0.01
# Smallest ratio of new to old |c′| at any node in one accepted step.
_SHRINK = 0.5
# Fourier modes below this fraction of the largest one are roundoff.
_NOISE = 1e-12


@dataclasses.dataclass(frozen = True, eq = False)
class GeodesicState(object):
    """Point of a geodesic in phase space.

    Args:
        curve: position c(t).
        momentum: L_c c_t |c′| per grid node.
        time: t. Defaults to 0.0.

    Raises:
        ValueError: if the momentum is not on the grid of the curve.

    """

    curve: DiscreteCurve
    momentum: TangentField
    time: float = 0.0

    def __post_init__(self) -> None:
        if not isinstance(self.momentum, TangentField):
            object.__setattr__(
                self, 'momentum', TangentField(values = self.momentum))
        if self.momentum.values.shape != self.curve.points.shape:
            raise ValueError('momentum must live on the grid of the curve')
        return


@dataclasses.dataclass(frozen = True, eq = False)
class BlowupReport(object):
    """Outcome of a geodesic integration.

    Args:
        blew_up: whether a floor or ceiling stopped the integration.
        t_stop: time reached.
        min_speed: smallest |c′| seen along the way.
        max_curvature: largest |κ| seen along the way.
        reason: 'speed_floor', 'curvature_ceiling', 'step_floor' or 'none'.
        energy_drift: relative change of the kinetic energy.
        final: state at `t_stop`.

    """

    blew_up: bool
    t_stop: float
    min_speed: float
    max_curvature: float
    reason: str
    energy_drift: float = 0.0
    final: GeodesicState | None = dataclasses.field(default = None, repr = False)


class StraightenResult(NamedTuple):
    """Result of `path_straighten`."""

    path: PathOfCurves
    converged: bool
    energies: list[float]


""" Hamiltonian """

def _as_sobolev(spec: MetricSpec) -> Sobolev:
    if isinstance(spec, Sobolev):
        sobolev = spec
    elif isinstance(spec, L2):
        sobolev = Sobolev(coefficients = (1.0,))
    else:
        raise TypeError(
            f'geodesic shooting supports l2 and sobolev metrics, not {spec}')
    if sobolev.coefficients[0] <= 0:
        raise ValueError('geodesic shooting needs a0 > 0')
    return sobolev

def _preconditioner(
    c: DiscreteCurve,
    coefficients: tuple[float, ...],
    shape: tuple[int, ...],
    mean_speed: float) -> scipy.sparse.linalg.LinearOperator:
    samples = shape[0]
    wavenumbers = np.arange(samples // 2 + 1) / mean_speed
    symbol = sum(a * wavenumbers**(2 * j) for j, a in enumerate(coefficients))
    symbol = c.spacing * mean_speed * np.asarray(symbol, dtype = float)
    if samples % 2 == 0:
        symbol[-1] = c.spacing * mean_speed * coefficients[0]
    def apply(x: np.ndarray) -> np.ndarray:
        spectrum = scipy.fft.rfft(x.reshape(shape), axis = 0)
        return scipy.fft.irfft(
            spectrum / symbol[:, None], n = samples, axis = 0).ravel()
    size = int(np.prod(shape))
    return scipy.sparse.linalg.LinearOperator(
        (size, size), matvec = apply, dtype = float)

def _solve(
    spec: Sobolev,
    c: DiscreteCurve,
    momentum: np.ndarray) -> np.ndarray:
    coefficients = spec.coefficients
    first = theta_derivative(c.points, c.topology)
    speeds = np.linalg.norm(first, axis = 1)
    if spec.order == 0:
        return momentum / (coefficients[0] * speeds[:, None])
    weights = quadrature_weights(c.samples, c.topology)
    rhs = weights[:, None] * momentum
    if not c.closed:
        matrix = sobolev_form(c, coefficients, np.eye(c.samples))
        return scipy.linalg.cho_solve(scipy.linalg.cho_factor(matrix), rhs)
    shape = rhs.shape
    operator = scipy.sparse.linalg.LinearOperator(
        (rhs.size, rhs.size),
        matvec = lambda x: sobolev_form(
            c, coefficients, x.reshape(shape)).ravel(),
        dtype = float)
    solution, info = scipy.sparse.linalg.cg(
        operator,
        rhs.ravel(),
        rtol = 1e-11,
        maxiter = 10 * rhs.size,
        M = _preconditioner(c, coefficients, shape, float(np.mean(speeds))))
    if info < 0:
        raise ArithmeticError('conjugate gradients broke down inverting L_c')
    if info > 0:
        logger.warning('conjugate gradients stopped after %d iterations', info)
    return solution.reshape(shape)

def _flow(
    spec: Sobolev,
    points: np.ndarray,
    momentum: np.ndarray,
    topology: str) -> tuple[np.ndarray, np.ndarray, float]:
    """Returns c_t, p_t and the kinetic energy at (points, momentum)."""
    c = DiscreteCurve(points = points, topology = topology)
    u = _solve(spec, c, momentum)
    value, gradient, _ = metric_gradient(spec, c, u)
    weights = quadrature_weights(c.samples, topology)
    return u, 0.5 * gradient / weights[:, None], 0.5 * value

def _drop_noise(values: np.ndarray) -> np.ndarray:
    """Zeroes the Fourier modes of a closed field that sit at roundoff level."""
    spectrum = scipy.fft.rfft(values, axis = 0)
    sizes = np.linalg.norm(spectrum, axis = 1)
    if sizes.size < 2 or not np.any(sizes[1:]):
        return values
    noise = sizes < _NOISE * np.max(sizes[1:])
    noise[0] = False
    if not np.any(noise):
        return values
    spectrum[noise] = 0.0
    return scipy.fft.irfft(spectrum, n = values.shape[0], axis = 0)

def _crosses_zero(old: np.ndarray, new: np.ndarray, topology: str) -> bool:
    """Whether a step shrinks |c′| too fast or reverses a tangent."""
    before = theta_derivative(old, topology)
    after = theta_derivative(new, topology)
    old_speeds = np.linalg.norm(before, axis = 1)
    new_speeds = np.linalg.norm(after, axis = 1)
    return bool(
        np.any(new_speeds < _SHRINK * old_speeds)
        or np.any(np.sum(before * after, axis = 1) <= 0))

def _speed_and_curvature(points: np.ndarray, topology: str) -> tuple[np.ndarray, np.ndarray]:
    first = theta_derivative(points, topology)
    second = theta_derivative(first, topology)
    speeds = np.linalg.norm(first, axis = 1)
    if points.shape[1] == 2:
        cross = np.abs(first[:, 0] * second[:, 1] - first[:, 1] * second[:, 0])
    else:
        cross = np.linalg.norm(np.cross(first, second), axis = 1)
    with np.errstate(divide = 'ignore', invalid = 'ignore'):
        curvature = np.where(speeds > 0, cross / speeds**3, np.inf)
    return speeds, curvature

def velocity(spec: MetricSpec, state: GeodesicState) -> TangentField:
    """Returns c_t, solving M(c)c_t = weights·momentum.

    Args:
        spec: an L2 or Sobolev metric with a₀ > 0.
        state: point in phase space.

    Raises:
        TypeError: if `spec` is neither L2 nor Sobolev.
        ValueError: if a₀ = 0 or the curve is not regular.

    Returns:
        TangentField: velocity on the grid of the state.

    """
    sobolev = _as_sobolev(spec)
    return TangentField(
        values = _solve(sobolev, state.curve, state.momentum.values))


""" Initial Value Problems """

def integrate_geodesic(
    spec: MetricSpec,
    c0: DiscreteCurve,
    u0: TangentField | np.ndarray,
    dt: float | None = None,
    horizon: float = 1.0,
    fixed: bool = False) -> tuple[PathOfCurves, BlowupReport]:
    """Integrates the geodesic equation from c₀ with initial velocity u₀.

    Classical fourth order Runge-Kutta steps of the Hamiltonian system
    (c, p) are taken between snapshots spaced `dt` apart, so no step is
    longer than `dt`. Unless `fixed`, each step is further limited so that
    |c′| changes by at most a few percent; the energy drift is then set by
    that limit and stays small for every `dt`, while with `fixed` it falls
    like dt⁴. A step is halved and retried when the state stops being finite
    or regular, when the kinetic energy jumps by more than 1%, when |c′|
    halves at some node, or when a tangent reverses direction. Under L² the
    Fourier modes of closed curves that sit at roundoff level are zeroed
    after every step. Integration stops early when min |c′| falls below the
    speed floor, when max |κ| exceeds the curvature ceiling, or when the step
    would fall below the step floor.

    Args:
        spec: an L2 or Sobolev metric with a₀ > 0.
        c0: regular initial curve.
        u0: initial velocity on the grid of `c0`.
        dt: spacing of the returned snapshots. Defaults to horizon/T.
        horizon: final time. Defaults to 1.0.
        fixed: if True, takes one step per snapshot unless a step is
            rejected, so the end point depends smoothly on `u0`. Defaults to
            False.

    Raises:
        TypeError: if `spec` is neither L2 nor Sobolev.
        ValueError: if `c0` is not regular, `u0` is off its grid or not
            finite, or a₀ = 0.

    Returns:
        tuple[PathOfCurves, BlowupReport]: snapshots at multiples of `dt` up
            to the stopping time, and the report.

    """
    sobolev = _as_sobolev(spec)
    u0 = fieldify(u0)
    if u0.shape != c0.points.shape or not np.all(np.isfinite(u0)):
        raise ValueError('initial velocity must be finite and on the curve grid')
    weights = quadrature_weights(c0.samples, c0.topology)
    momentum = sobolev_form(c0, sobolev.coefficients, u0) / weights[:, None]
    topology = c0.topology
    steps = max(1, round(horizon / dt)) if dt else configuration._STEPS
    interval = horizon / steps
    speeds, curvature = _speed_and_curvature(c0.points, topology)
    length0 = float(np.sum(weights * speeds))
    speed_floor = configuration._REGULARITY * length0 / (2 * np.pi)
    # L² shooting amplifies roundoff in the high modes of closed curves.
    filtered = sobolev.order == 0 and topology == CLOSED
    points = np.array(c0.points)
    u, flow, energy = _flow(sobolev, points, momentum, topology)
    energy0 = energy
    min_speed, max_curvature = float(np.min(speeds)), float(np.max(curvature))
    snapshots = [c0]
    time, trial, reason = 0.0, interval, NONE
    while time < horizon - 1e-12 * horizon:
        target = interval * len(snapshots)
        allowed = trial
        if not fixed:
            rate = float(np.max(
                np.linalg.norm(theta_derivative(u, topology), axis = 1) / speeds))
            if rate > 0:
                allowed = min(allowed, _RATE / rate)
        if allowed < configuration._STEP_FLOOR:
            reason = STEP_FLOOR
            break
        limit = min(allowed, target - time)
        try:
            k1 = (u, flow)
            k2 = _flow(sobolev, points + 0.5 * limit * k1[0],
                momentum + 0.5 * limit * k1[1], topology)
            k3 = _flow(sobolev, points + 0.5 * limit * k2[0],
                momentum + 0.5 * limit * k2[1], topology)
            k4 = _flow(sobolev, points + limit * k3[0],
                momentum + limit * k3[1], topology)
            new_points = points + limit / 6 * (
                k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
            new_momentum = momentum + limit / 6 * (
                k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
            if filtered:
                new_points = _drop_noise(new_points)
                new_momentum = _drop_noise(new_momentum)
            new_u, new_flow, new_energy = _flow(
                sobolev, new_points, new_momentum, topology)
            accepted = (
                np.isfinite(new_energy)
                and abs(new_energy - energy) <= _ENERGY_JUMP * abs(energy)
                and not _crosses_zero(points, new_points, topology))
        except (ValueError, ArithmeticError, np.linalg.LinAlgError):
            accepted = False
        if not accepted:
            trial = 0.5 * limit
            continue
        points, momentum, time = new_points, new_momentum, time + limit
        u, flow, energy = new_u, new_flow, new_energy
        trial = 2 * limit
        speeds, curvature = _speed_and_curvature(points, topology)
        min_speed = min(min_speed, float(np.min(speeds)))
        max_curvature = max(max_curvature, float(np.max(curvature)))
        length = float(np.sum(weights * speeds))
        if np.min(speeds) < speed_floor:
            reason = SPEED_FLOOR
            break
        if np.max(curvature) > configuration._CURVATURE_CEILING / length:
            reason = CURVATURE_CEILING
            break
        if time >= target - 1e-12 * horizon:
            snapshots.append(DiscreteCurve(points = points, topology = topology))
    final = GeodesicState(
        curve = DiscreteCurve(points = points, topology = topology),
        momentum = TangentField(values = momentum),
        time = time)
    if len(snapshots) >= 2:
        path = PathOfCurves(
            curves = tuple(snapshots),
            duration = interval * (len(snapshots) - 1))
    else:
        path = PathOfCurves(
            curves = (c0, final.curve),
            duration = max(time, configuration._STEP_FLOOR))
    drift = abs(energy - energy0) / energy0 if energy0 > 0 else 0.0
    if reason != NONE:
        logger.info('geodesic stopped at t=%.6g: %s', time, reason)
    return path, BlowupReport(
        blew_up = reason != NONE,
        t_stop = time,
        min_speed = min_speed,
        max_curvature = max_curvature,
        reason = reason,
        energy_drift = drift,
        final = final)

def exponential(
    spec: MetricSpec,
    c: DiscreteCurve,
    u: TangentField | np.ndarray,
    steps: int | None = None) -> DiscreteCurve:
    """Returns exp_c(u), the curve at time 1 of the geodesic from (c, u).

    Args:
        spec: an L2 or Sobolev metric with a₀ > 0.
        c: regular curve.
        u: initial velocity on the grid of `c`.
        steps: number of snapshots. Defaults to the configured T.

    Raises:
        ArithmeticError: if the geodesic blows up before time 1.

    Returns:
        DiscreteCurve: exp_c(u).

    """
    steps = steps or configuration._STEPS
    _, report = integrate_geodesic(
        spec, c, u, dt = 1.0 / steps, horizon = 1.0, fixed = True)
    if report.blew_up:
        raise ArithmeticError(
            f'geodesic blew up at t={report.t_stop:.6g} ({report.reason})')
    return report.final.curve


""" Boundary Value Problems """

def _check_pair(c0: DiscreteCurve, c1: DiscreteCurve) -> None:
    if not c0.matches(c1):
        raise ValueError(
            'curves must share topology, sample count and dimension')
    return

def _segments(
    spec: MetricSpec,
    stack: np.ndarray,
    topology: str) -> tuple[float, np.ndarray, np.ndarray]:
    """Path energy at segment midpoints, its gradient and segment norms."""
    steps = stack.shape[0] - 1
    dt = 1.0 / steps
    energy = 0.0
    gradient = np.zeros_like(stack)
    norms = np.empty(steps)
    for k in range(steps):
        midpoint = DiscreteCurve(
            points = 0.5 * (stack[k] + stack[k + 1]),
            topology = topology)
        tangent = (stack[k + 1] - stack[k]) / dt
        value, gradient_c, gradient_h = metric_gradient(spec, midpoint, tangent)
        norms[k] = value
        energy += dt * value
        gradient[k] += 0.5 * dt * gradient_c - gradient_h
        gradient[k + 1] += 0.5 * dt * gradient_c + gradient_h
    return energy, gradient, norms

def path_straighten(
    spec: MetricSpec,
    c0: DiscreteCurve,
    c1: DiscreteCurve,
    steps: int | None = None,
    max_iter: int = 200,
    tol: float = 1e-9) -> StraightenResult:
    """Minimizes Σ G_{m_k}(Δc_k/Δt, Δc_k/Δt)Δt over the interior curves.

    m_k is the midpoint of segment k. The endpoints stay fixed, the
    descent starts from the linear interpolation and the energy gradient is
    assembled from `metric_gradient`.

    Args:
        spec: any metric description.
        c0: regular initial curve.
        c1: regular final curve on the grid of `c0`.
        steps: number T >= 2 of time intervals. Defaults to the configured T.
        max_iter: iteration limit of L-BFGS-B. Defaults to 200.
        tol: relative energy and gradient tolerance. Defaults to 1e-9.

    Raises:
        ValueError: if the curves do not share a grid or T < 2.

    Returns:
        StraightenResult: the best path, whether the descent converged, and
            the energy after each accepted iteration.

    """
    _check_pair(c0, c1)
    steps = steps or configuration._STEPS
    if steps < 2:
        raise ValueError('path straightening needs at least 2 time steps')
    times = np.linspace(0.0, 1.0, steps + 1)[:, None, None]
    stack = (1 - times) * c0.points + times * c1.points
    shape = stack[1:-1].shape
    def objective(interior: np.ndarray) -> tuple[float, np.ndarray]:
        stack[1:-1] = interior.reshape(shape)
        try:
            energy, gradient, _ = _segments(spec, stack, c0.topology)
        except ValueError:
            return np.inf, np.zeros(interior.size)
        return energy, gradient[1:-1].ravel()
    start = stack[1:-1].ravel().copy()
    energies = [objective(start)[0]]
    def record(intermediate_result: scipy.optimize.OptimizeResult) -> None:
        energies.append(float(intermediate_result.fun))
        return
    result = scipy.optimize.minimize(
        objective,
        start,
        jac = True,
        method = 'L-BFGS-B',
        callback = record,
        options = {'maxiter': max_iter, 'ftol': tol, 'gtol': tol})
    best = result.x if result.fun <= energies[0] else start
    stack[1:-1] = best.reshape(shape)
    if not result.success:
        logger.warning('path straightening did not converge: %s', result.message)
    logger.debug(
        'path straightening: %d iterations, energy %.6e',
        result.nit, min(result.fun, energies[0]))
    path = PathOfCurves.from_points(stack, topology = c0.topology)
    return StraightenResult(
        path = path,
        converged = bool(result.success),
        energies = energies)

def path_length(spec: MetricSpec, path: PathOfCurves) -> float:
    """Returns the length of `path` with midpoint segments under `spec`."""
    _, _, norms = _segments(spec, path.points, path.topology)
    return float(np.sum(np.sqrt(np.maximum(norms, 0.0))) / path.steps)

def geodesic_distance(
    spec: MetricSpec,
    c0: DiscreteCurve,
    c1: DiscreteCurve,
    steps: int | None = None) -> float:
    """Returns Σ √G(m_k, Δc_k/Δt, Δc_k/Δt)·Δt on the straightened path.

    Args:
        spec: any metric description.
        c0: regular curve.
        c1: regular curve on the grid of `c0`.
        steps: number T >= 2 of time intervals. Defaults to the configured T.

    Raises:
        ValueError: if the curves do not share a grid or T < 2.

    Returns:
        float: length of the approximate minimizing path.

    """
    result = path_straighten(spec, c0, c1, steps = steps)
    return path_length(spec, result.path)

def _blend(phi: Reparametrization, weight: float = 1e-3) -> Reparametrization:
    identity = Reparametrization.identity(phi.samples, phi.topology)
    return Reparametrization(
        values = (1 - weight) * phi.values + weight * identity.values,
        topology = phi.topology)

def _knotted(
    phi: Reparametrization,
    knots: np.ndarray,
    values: np.ndarray) -> Reparametrization | None:
    if np.any(np.diff(values) <= 0):
        return None
    theta = phi.theta
    if phi.topology == CLOSED:
        if values[-1] >= values[0] + 2 * np.pi:
            return None
        extended = np.append(knots, 2 * np.pi)
        targets = np.append(values, values[0] + 2 * np.pi)
        return Reparametrization(
            values = np.interp(theta, extended, targets),
            topology = phi.topology)
    return Reparametrization(
        values = np.interp(theta, knots, values),
        topology = phi.topology)

def _reparametrized_distance(
    spec: MetricSpec,
    c0: DiscreteCurve,
    c1: DiscreteCurve,
    phi: Reparametrization,
    steps: int | None) -> tuple[float, DiscreteCurve | None]:
    try:
        moved = apply_reparam(c1, phi)
        return geodesic_distance(spec, c0, moved, steps = steps), moved
    except ValueError:
        return np.inf, None

def _knot_descent(
    spec: MetricSpec,
    c0: DiscreteCurve,
    c1: DiscreteCurve,
    best: float,
    steps: int | None,
    rounds: int,
    knots: int,
    tol: float) -> tuple[float, DiscreteCurve]:
    """Coordinate descent over `knots` values of a piecewise linear φ."""
    identity = Reparametrization.identity(c1.samples, c1.topology)
    positions = np.linspace(0.0, 2 * np.pi, knots, endpoint = not c0.closed)
    values = positions.copy()
    free = range(knots) if c0.closed else range(1, knots - 1)
    width = 2 * np.pi / knots
    current = c1
    for sweep in range(rounds):
        start = best
        delta = 0.25 * width / 2**sweep
        for index in free:
            for sign in (1.0, -1.0):
                trial = values.copy()
                trial[index] += sign * delta
                knotted = _knotted(identity, positions, trial)
                if knotted is None:
                    continue
                distance, moved = _reparametrized_distance(
                    spec, c0, c1, knotted, steps)
                if distance < best:
                    best, values, current = distance, trial, moved
                    break
        logger.debug('shape distance sweep %d: %.6e', sweep, best)
        if start - best <= tol * start:
            break
    return best, current

def shape_distance(
    spec: MetricSpec,
    c0: DiscreteCurve,
    c1: DiscreteCurve,
    steps: int | None = None,
    rounds: int = 2,
    knots: int = 8,
    tol: float = 1e-3,
    max_iter: int = 5) -> tuple[float, MatchResult]:
    """Returns inf over φ of the geodesic distance from c₀ to c₁∘φ.

    Alternates two moves on the current reparametrization of c₁ until an
    alternation improves the distance by no more than `tol` relative, or
    for at most `max_iter` alternations. The first move is the SRV match of
    `reparam`, kept only when it shortens the geodesic; maps with flat parts
    are blended with the identity by a factor 1e-3 before acting. The second
    move, skipped for elastic specs, is coordinate descent over `knots`
    values of a piecewise linear φ, each candidate scored by path
    straightening, for at most `rounds` sweeps. The identity is the starting
    point, so the result never exceeds `geodesic_distance`.

    Args:
        spec: any metric description.
        c0: regular curve.
        c1: regular curve on the grid of `c0`.
        steps: number T >= 2 of time intervals. Defaults to the configured T.
        rounds: coordinate descent sweeps per alternation. Defaults to 2.
        knots: number of free values of φ. Defaults to 8.
        tol: relative improvement that ends the alternations and the sweeps.
            Defaults to 1e-3.
        max_iter: largest number of alternations. Defaults to 5.

    Raises:
        ValueError: if the curves do not share a grid.

    Returns:
        tuple[float, MatchResult]: the distance and the last SRV match that
            was accepted, or the first one tried if none was.

    """
    _check_pair(c0, c1)
    best = geodesic_distance(spec, c0, c1, steps = steps)
    current, match = c1, None
    for iteration in range(max_iter):
        start = best
        found = dp_match(c0, current)
        match = match or found
        phi = found.phi if found.phi.strictly_monotone else _blend(found.phi)
        distance, moved = _reparametrized_distance(spec, c0, current, phi, steps)
        if distance < best:
            best, current, match = distance, moved, found
        if not isinstance(spec, Elastic) and knots >= 2:
            best, current = _knot_descent(
                spec, c0, current, best, steps, rounds, knots, tol)
        logger.debug('shape distance alternation %d: %.6e', iteration, best)
        if start - best <= tol * start:
            break
    return best, match


""" Shooting and Means """

def log_map(
    spec: MetricSpec,
    c0: DiscreteCurve,
    c1: DiscreteCurve,
    tol: float | None = None,
    steps: int | None = None,
    initial: TangentField | np.ndarray | None = None) -> TangentField:
    """Returns u₀ with exp_{c₀}(u₀) ≈ c₁.

    Newton-Krylov iteration on the residual exp_{c₀}(u₀) − c₁, started from
    the first segment of the straightened path unless `initial` is given.

    Args:
        spec: an L2 or Sobolev metric with a₀ > 0.
        c0: regular base curve.
        c1: regular target curve on the grid of `c0`.
        tol: bound on the L² norm of the residual. Defaults to 1e-6·ℓ_{c₀}.
        steps: time steps for shooting and straightening. Defaults to the
            configured T.
        initial: starting velocity. Defaults to None.

    Raises:
        ArithmeticError: if shooting does not reach `tol`.

    Returns:
        TangentField: the initial velocity u₀.

    """
    _check_pair(c0, c1)
    _as_sobolev(spec)
    weights = quadrature_weights(c0.samples, c0.topology)
    first = theta_derivative(c0.points, c0.topology)
    length = float(np.sum(weights * np.linalg.norm(first, axis = 1)))
    tol = tol or 1e-6 * length
    if np.allclose(c0.points, c1.points, rtol = 0, atol = 1e-14 * length):
        return TangentField(values = np.zeros_like(c0.points))
    steps = steps or configuration._STEPS
    if initial is None:
        path = path_straighten(spec, c0, c1, steps = max(steps, 2)).path
        initial = (path[1].points - path[0].points) / path.dt
    shape = c0.points.shape
    def residual(u: np.ndarray) -> np.ndarray:
        try:
            reached = exponential(spec, c0, u.reshape(shape), steps = steps)
        except (ArithmeticError, ValueError):
            return np.full(u.size, 1e3 * length)
        return (reached.points - c1.points).ravel()
    def norm(difference: np.ndarray) -> float:
        squares = np.sum(difference.reshape(shape)**2, axis = 1)
        return float(np.sqrt(np.sum(weights * squares)))
    solution = scipy.optimize.root(
        residual,
        fieldify(initial).ravel(),
        method = 'krylov',
        options = {
            'fatol': tol / math.sqrt(2 * np.pi * shape[1]),
            'maxiter': 30})
    error = norm(residual(solution.x))
    if error >= tol:
        raise ArithmeticError(
            f'shooting did not converge: residual {error:.3e} >= {tol:.3e}')
    logger.debug('shooting converged: residual %.3e', error)
    return TangentField(values = solution.x.reshape(shape))

def karcher_mean(
    spec: MetricSpec,
    curves: Sequence[DiscreteCurve],
    max_iter: int = 20,
    tol: float | None = None,
    steps: int | None = None) -> DiscreteCurve:
    """Returns the minimizer of Σ d(c, cᵢ)².

    Starts from the pointwise average and iterates c ← exp_c(s·ū), ū the
    average of the log maps, halving s whenever Σ d² would grow.

    Args:
        spec: an L2 or Sobolev metric with a₀ > 0.
        curves: at least one curve, all on one grid.
        max_iter: iteration limit. Defaults to 20.
        tol: bound on √G(ū, ū) that stops the iteration. Defaults to
            1e-5·ℓ of the starting curve.
        steps: time steps of every geodesic. Defaults to the configured T.

    Raises:
        ValueError: if `curves` is empty or the curves do not share a grid.
        ArithmeticError: if a log map fails; the message names the iteration
            and the current Σ d².

    Returns:
        DiscreteCurve: the Karcher mean.

    """
    if not curves:
        raise ValueError('the Karcher mean needs at least one curve')
    for other in curves[1:]:
        _check_pair(curves[0], other)
    if len(curves) == 1:
        return curves[0]
    mean = curves[0].replace(np.mean([c.points for c in curves], axis = 0))
    weights = quadrature_weights(mean.samples, mean.topology)
    first = theta_derivative(mean.points, mean.topology)
    length = float(np.sum(weights * np.linalg.norm(first, axis = 1)))
    tol = tol or 1e-5 * length
    def logs_at(
        base: DiscreteCurve,
        iteration: int,
        guesses: list[np.ndarray] | None = None) -> tuple[list[TangentField], float]:
        guesses = guesses or [None] * len(curves)
        try:
            logs = [
                log_map(spec, base, c, steps = steps, initial = g)
                for c, g in zip(curves, guesses)]
        except ArithmeticError as error:
            raise ArithmeticError(
                f'Karcher mean aborted at iteration {iteration} with '
                f'Σd² = {cost:.6e}: {error}') from error
        total = sum(metric_eval(spec, base, u, u) for u in logs)
        return logs, total
    cost = np.inf
    logs, cost = logs_at(mean, 0)
    for iteration in range(1, max_iter + 1):
        direction = np.mean([u.values for u in logs], axis = 0)
        size = math.sqrt(max(metric_eval(spec, mean, direction, direction), 0.0))
        if size < tol:
            break
        scale = 1.0
        while scale >= 1 / 64:
            candidate = exponential(spec, mean, scale * direction, steps = steps)
            guesses = [u.values - scale * direction for u in logs]
            trial_logs, trial_cost = logs_at(candidate, iteration, guesses)
            if trial_cost <= cost:
                mean, logs, cost = candidate, trial_logs, trial_cost
                break
            logger.warning(
                'Karcher step %.4g rejected: Σd² %.6e > %.6e',
                scale, trial_cost, cost)
            scale *= 0.5
        else:
            break
        logger.debug('Karcher iteration %d: Σd² = %.6e', iteration, cost)
    return mean

def completeness_probe(
    scenario: str,
    coefficients: tuple[float, ...] | None = None,
    horizon: float | None = None,
    samples: int | None = None,
    dt: float | None = None) -> BlowupReport:
    """Shoots the unit circle inward at unit speed and reports the outcome.

    'l2_collapse' runs under the L² metric, where the circle shrinks to a
    point at t = 2/3. 'sobolev_longtime' runs under the Sobolev metric with
    `coefficients`.

    Args:
        scenario: 'l2_collapse' or 'sobolev_longtime' (dashes accepted).
        coefficients: Sobolev coefficients. Defaults to (1, 0, 1).
        horizon: final time. Defaults to 1 for 'l2_collapse' and 10 for
            'sobolev_longtime'.
        samples: samples on the circle. Defaults to the configured N.
        dt: snapshot spacing. Defaults to horizon/T.

    Raises:
        ValueError: if `scenario` is not recognized.

    Returns:
        BlowupReport: the outcome of the integration.

    """
    scenario = scenario.replace('-', '_')
    if scenario not in SCENARIOS:
        raise ValueError(f'scenario must be one of {SCENARIOS}, not {scenario}')
    if scenario == 'l2_collapse':
        spec: MetricSpec = L2()
        horizon = horizon or 1.0
    else:
        spec = Sobolev(coefficients = coefficients or (1.0, 0.0, 1.0))
        horizon = horizon or 10.0
    start = circle(radius = 1.0, samples = samples)
    _, report = integrate_geodesic(
        spec, start, -start.points, dt = dt, horizon = horizon)
    logger.info(
        '%s under %s: blew_up=%s t_stop=%.6g min_speed=%.3e',
        scenario, spec, report.blew_up, report.t_stop, report.min_speed)
    return report
