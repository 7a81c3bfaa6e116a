"""Square root velocity representation and the elastic metric family

The square root velocity transform R(c) = c′/√|c′| is an isometry between
curves modulo translations carrying the elastic metric with weights
(a, b) = (1, 1/2) and the flat L²(dθ) space. Open curves are therefore joined
by straight lines in q-space; closed curves additionally need the image
constraint ∫ q|q| dθ = 0, enforced by `project_closed`.

Contents:
    SrvCurve: sampled q = R(c) values plus the basepoint c(0).
    ElasticCoefficients: normal weight a and tangential weight b.
    SrvGeodesic: path, length and singularities of an SRV geodesic.
    srvt: returns the SRV representation of a regular curve.
    srvt_inverse: reconstructs a curve from its SRV representation.
    closure_defect: returns ∫ q|q| dθ, the gap c(2π) − c(0).
    project_closed: returns the nearest q satisfying the closure constraint.
    srv_geodesic: geodesic between two curves through q-space.
    srv_distance: SRV distance between two curves.
    elastic_metric: evaluates the elastic metric with coefficients (a, b).
    singularity_scan: lists where the curves of a path stop being regular.

To Do:


"""
from __future__ import annotations

import dataclasses
import logging

import numpy as np
import scipy.fft
import scipy.interpolate

from . import configuration
from .curves import (
    CLOSED,
    MINIMUM_SAMPLES,
    DiscreteCurve,
    PathOfCurves,
    TangentField,
    arc_calculus,
    ds_derivative,
    grid,
    quadrature_weights,
    require_regular,
    speed,
    theta_derivative,
)

logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen = True, eq = False)
class SrvCurve(object):
    """Square root velocity representation of a curve.

    Args:
        q: N×d array of SRV values.
        basepoint: the point c(0) lost by differentiation.
        topology: either 'closed' or 'open'. Defaults to 'closed'.

    Raises:
        ValueError: if the arrays have incompatible shapes.

    """

    q: np.ndarray
    basepoint: np.ndarray
    topology: str = CLOSED

    def __post_init__(self) -> None:
        q = np.array(self.q, dtype = float)
        basepoint = np.array(self.basepoint, dtype = float)
        if q.ndim != 2 or q.shape[0] < MINIMUM_SAMPLES:
            raise ValueError(f'q must be an N×d array, not shape {q.shape}')
        if basepoint.shape != (q.shape[1],):
            raise ValueError('basepoint must have the dimension of q')
        q.setflags(write = False)
        basepoint.setflags(write = False)
        object.__setattr__(self, 'q', q)
        object.__setattr__(self, 'basepoint', basepoint)
        return

    @property
    def samples(self) -> int:
        """Returns the number of samples N."""
        return self.q.shape[0]

    @property
    def norms(self) -> np.ndarray:
        """Returns the pointwise magnitudes |q|."""
        return np.linalg.norm(self.q, axis = 1)


@dataclasses.dataclass(frozen = True)
class ElasticCoefficients(object):
    """Weights of the elastic metric family.

    The default (1, 1/2) is the metric made flat by the SRV transform.

    Args:
        a: weight of the normal part of D_s h. Defaults to 1.0.
        b: weight of the tangential part of D_s h. Defaults to 0.5.

    Raises:
        ValueError: if either weight is not strictly positive.

    """

    a: float = 1.0
    b: float = 0.5

    def __post_init__(self) -> None:
        if not (self.a > 0 and self.b > 0):
            raise ValueError('elastic weights a and b must be positive')
        return


@dataclasses.dataclass(frozen = True, eq = False)
class SrvGeodesic(object):
    """Geodesic computed in the SRV representation.

    Args:
        path: the curves at T + 1 uniformly spaced times.
        length: SRV-metric length of the path.
        singularities: (t, θ) pairs where an intermediate curve is not
            regular.
        projected: whether the closure projection changed any time sample.

    """

    path: PathOfCurves
    length: float
    singularities: tuple[tuple[float, float], ...]
    projected: bool


""" Transform """

def _inner(a: np.ndarray, b: np.ndarray, topology: str) -> float:
    weights = quadrature_weights(a.shape[0], topology)
    return float(np.sum(weights * np.sum(a * b, axis = 1)))

def _antiderivative(values: np.ndarray, topology: str) -> np.ndarray:
    samples = values.shape[0]
    theta = grid(samples, topology)
    if topology == CLOSED:
        mean = np.mean(values, axis = 0)
        coefficients = scipy.fft.rfft(values - mean, axis = 0)
        wavenumbers = np.arange(coefficients.shape[0]).astype(float)
        wavenumbers[0] = 1.0
        coefficients = coefficients / (1j * wavenumbers[:, None])
        coefficients[0] = 0.0
        if samples % 2 == 0:
            coefficients[-1] = 0.0
        periodic = scipy.fft.irfft(coefficients, n = samples, axis = 0)
        return periodic - periodic[0] + np.outer(theta, mean)
    spline = scipy.interpolate.CubicSpline(theta, values, axis = 0)
    return spline.antiderivative()(theta)

def _reconstruct(
    q: np.ndarray,
    basepoint: np.ndarray,
    topology: str) -> DiscreteCurve:
    velocity = q * np.linalg.norm(q, axis = 1)[:, None]
    points = basepoint + _antiderivative(velocity, topology)
    return DiscreteCurve(points = points, topology = topology)

def srvt(c: DiscreteCurve) -> SrvCurve:
    """Returns q = c′/√|c′| and the basepoint c(0).

    Args:
        c: regular curve.

    Raises:
        ValueError: if `c` is not regular.

    Returns:
        SrvCurve: SRV representation of `c`.

    """
    require_regular(c)
    derivative = theta_derivative(c.points, c.topology)
    speeds = np.linalg.norm(derivative, axis = 1)
    return SrvCurve(
        q = derivative / np.sqrt(speeds)[:, None],
        basepoint = c.points[0],
        topology = c.topology)

def srvt_inverse(q: SrvCurve) -> DiscreteCurve:
    """Returns the curve θ ↦ basepoint + ∫₀^θ q|q| dσ.

    Closed data is integrated spectrally. If ∫ q|q| dθ does not vanish the
    reconstruction keeps the resulting linear drift, so c(2π) − c(0) equals
    the closure defect.

    Args:
        q: SRV representation without zero samples.

    Raises:
        ValueError: if some sample of `q` is zero.

    Returns:
        DiscreteCurve: reconstructed curve on the grid of `q`.

    """
    if np.any(q.norms == 0):
        raise ValueError('SRV values must be nonzero to invert the transform')
    return _reconstruct(q.q, q.basepoint, q.topology)

def closure_defect(q: SrvCurve) -> np.ndarray:
    """Returns ∫ q|q| dθ.

    Args:
        q: SRV representation.

    Returns:
        np.ndarray: d-vector, zero exactly when the curve closes up.

    """
    weights = quadrature_weights(q.samples, q.topology)
    return np.sum(weights[:, None] * q.q * q.norms[:, None], axis = 0)


""" Closed Curves """

def _closure_gradients(values: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(values, axis = 1)
    safe = np.where(norms > 0, norms, 1.0)
    dimension = values.shape[1]
    gradients = np.empty((dimension, *values.shape))
    for i in range(dimension):
        gradients[i] = values[:, [i]] * values / safe[:, None]
        gradients[i][:, i] += norms
    return gradients

def project_closed(
    q: SrvCurve,
    tol: float | None = None,
    max_iter: int = 100) -> SrvCurve:
    """Returns the nearest q̃ with |closure_defect(q̃)| < tol.

    A damped Gauss-Newton iteration on the d Lagrange multipliers of the
    constraint: each step moves along the span of the L² gradients of the
    closure functional by the minimal-norm amount that cancels the linearized
    defect, halving the step while the defect does not shrink.

    Args:
        q: closed SRV representation without zero samples.
        tol: tolerance on |closure_defect|. Defaults to the configured closure
            factor times √ℓ_c.
        max_iter: iteration limit. Defaults to 100.

    Raises:
        ValueError: if `q` is not closed or has zero samples.
        ArithmeticError: if the iteration does not reach `tol` or the
            projected values reach zero.

    Returns:
        SrvCurve: projected representation with the basepoint of `q`.

    """
    if q.topology != CLOSED:
        raise ValueError('only closed SRV curves carry a closure constraint')
    if np.any(q.norms == 0):
        raise ValueError('SRV values must be nonzero to project them')
    weights = quadrature_weights(q.samples, CLOSED)
    if tol is None:
        length = float(np.sum(weights * q.norms**2))
        tol = configuration._CLOSURE * np.sqrt(length)
    values = q.q.copy()
    floor = 1e-3 * np.sqrt(np.mean(q.norms**2))
    defect = closure_defect(q)
    for iteration in range(max_iter):
        residual = float(np.linalg.norm(defect))
        if residual < tol:
            break
        gradients = _closure_gradients(values)
        gram = np.einsum('n,inj,knj->ik', weights, gradients, gradients)
        multipliers = np.linalg.solve(gram, -defect)
        step = np.tensordot(multipliers, gradients, axes = (0, 0))
        scale = 1.0
        for _ in range(30):
            trial = values + scale * step
            trial_defect = np.sum(
                weights[:, None] * trial
                * np.linalg.norm(trial, axis = 1)[:, None],
                axis = 0)
            if np.linalg.norm(trial_defect) < residual:
                break
            scale *= 0.5
        values, defect = trial, trial_defect
        logger.debug(
            'closure projection iteration %d: defect %.3e', iteration, residual)
    else:
        residual = float(np.linalg.norm(defect))
        if residual >= tol:
            raise ArithmeticError(
                f'closure projection did not converge in {max_iter} '
                f'iterations; residual {residual:.3e}')
    if np.min(np.linalg.norm(values, axis = 1)) < floor:
        raise ArithmeticError(
            f'closure projection collapsed q to zero; residual '
            f'{np.linalg.norm(defect):.3e}')
    return SrvCurve(q = values, basepoint = q.basepoint, topology = CLOSED)


""" Geodesics and Distances """

def _check_pair(c0: DiscreteCurve, c1: DiscreteCurve) -> None:
    if not c0.matches(c1):
        raise ValueError(
            'curves must share topology, sample count and dimension')
    return

def _path_energy(values: list[np.ndarray], dt: float) -> float:
    return sum(
        _inner(b - a, b - a, CLOSED) for a, b in zip(values, values[1:])) / dt

def _near_zero(values: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(values, axis = 1)
    return np.flatnonzero(norms < 1e-3 * np.sqrt(np.mean(norms**2)))

def _try_project(values: np.ndarray, basepoint: np.ndarray) -> np.ndarray | None:
    if _near_zero(values).size:
        return None
    try:
        return project_closed(SrvCurve(
            q = values, basepoint = basepoint, topology = CLOSED)).q
    except (ArithmeticError, ValueError) as error:
        logger.debug('closure projection skipped: %s', error)
        return None

def _refine_closed(values: list[np.ndarray], rounds: int) -> list[np.ndarray]:
    dt = 1.0 / (len(values) - 1)
    energy = _path_energy(values, dt)
    origin = np.zeros(values[0].shape[1])
    for _ in range(rounds):
        trial = [values[0]]
        for k in range(1, len(values) - 1):
            smoothed = 0.5 * (values[k] + 0.5 * (values[k - 1] + values[k + 1]))
            projected = _try_project(smoothed, origin)
            trial.append(values[k] if projected is None else projected)
        trial.append(values[-1])
        trial_energy = _path_energy(trial, dt)
        if trial_energy >= energy:
            break
        values, energy = trial, trial_energy
    return values

def srv_geodesic(
    c0: DiscreteCurve,
    c1: DiscreteCurve,
    steps: int | None = None,
    refine: int = 0) -> SrvGeodesic:
    """Returns the SRV geodesic from `c0` to `c1`.

    Open curves are joined by R⁻¹((1 − t)q₀ + tq₁), the exact minimizer.
    Closed curves project every interior time sample of that straight line
    onto the closure constraint and then optionally run `refine` rounds of
    path energy descent, each followed by the projection. Time samples whose
    straight-line q comes within 1e-3 of zero relative to its RMS value, or
    whose projection fails, are left unprojected and reported as singular.

    Args:
        c0: initial regular curve.
        c1: final regular curve on the same grid.
        steps: number T of time intervals. Defaults to the configured T.
        refine: rounds of constrained energy descent for closed curves.
            Defaults to 0.

    Raises:
        ValueError: if the curves do not share a grid or are not regular.

    Returns:
        SrvGeodesic: path, SRV length and singularity report.

    """
    _check_pair(c0, c1)
    steps = steps or configuration._STEPS
    start, end = srvt(c0), srvt(c1)
    times = np.linspace(0.0, 1.0, steps + 1)
    values = [(1 - t) * start.q + t * end.q for t in times]
    projected = False
    degenerate = []
    if c0.closed:
        for k in range(1, steps):
            result = _try_project(values[k], c0.points[0])
            if result is None:
                logger.warning(
                    'straight SRV line is too close to zero at t=%.3f; '
                    'leaving it unprojected', times[k])
                near = _near_zero(values[k])
                if not near.size:
                    near = [int(np.argmin(np.linalg.norm(values[k], axis = 1)))]
                degenerate.extend(
                    (float(times[k]), float(c0.theta[i])) for i in near)
                continue
            projected = projected or not np.allclose(result, values[k])
            values[k] = result
        if refine:
            values = _refine_closed(values, refine)
    curves = [c0]
    for k in range(1, steps):
        basepoint = (1 - times[k]) * c0.points[0] + times[k] * c1.points[0]
        curves.append(_reconstruct(values[k], basepoint, c0.topology))
    curves.append(c1)
    path = PathOfCurves(curves = tuple(curves))
    length = sum(
        np.sqrt(max(_inner(b - a, b - a, c0.topology), 0.0))
        for a, b in zip(values, values[1:]))
    singularities = sorted(set(singularity_scan(path)) | set(degenerate))
    if singularities:
        logger.warning(
            'SRV geodesic is singular at %d (t, θ) samples', len(singularities))
    return SrvGeodesic(
        path = path,
        length = float(length),
        singularities = tuple(singularities),
        projected = projected)

def srv_distance(c0: DiscreteCurve, c1: DiscreteCurve) -> float:
    """Returns the SRV distance between `c0` and `c1`.

    Open curves: ‖q₀ − q₁‖ in L²(dθ). Closed curves: the length of
    `srv_geodesic`.

    Args:
        c0: regular curve.
        c1: regular curve on the same grid.

    Raises:
        ValueError: if the curves do not share a grid or are not regular.

    Returns:
        float: distance modulo translations.

    """
    _check_pair(c0, c1)
    if c0.closed:
        return srv_geodesic(c0, c1).length
    difference = srvt(c0).q - srvt(c1).q
    return float(np.sqrt(_inner(difference, difference, c0.topology)))

def elastic_metric(
    c: DiscreteCurve,
    h: TangentField | np.ndarray,
    k: TangentField | np.ndarray,
    coefficients: ElasticCoefficients | None = None) -> float:
    """Returns ∫ a²⟨(D_s h)⊥, (D_s k)⊥⟩ + b²⟨D_s h, v⟩⟨D_s k, v⟩ ds.

    Args:
        c: regular curve.
        h: first tangent vector.
        k: second tangent vector.
        coefficients: weights (a, b). Defaults to (1, 1/2).

    Raises:
        ValueError: if `c` is not regular.

    Returns:
        float: value of the elastic metric at `c`.

    """
    coefficients = coefficients or ElasticCoefficients()
    tangent = arc_calculus(c).unit_tangent
    dh = ds_derivative(c, h, 1).values
    dk = ds_derivative(c, k, 1).values
    along_h = np.sum(dh * tangent, axis = 1)
    along_k = np.sum(dk * tangent, axis = 1)
    normal_h = dh - along_h[:, None] * tangent
    normal_k = dk - along_k[:, None] * tangent
    density = (
        coefficients.a**2 * np.sum(normal_h * normal_k, axis = 1)
        + coefficients.b**2 * along_h * along_k)
    weights = quadrature_weights(c.samples, c.topology)
    return float(np.sum(weights * density * speed(c)))

def singularity_scan(
    path: PathOfCurves,
    epsilon: float | None = None) -> list[tuple[float, float]]:
    """Returns every (t, θ) where a curve of `path` has |c′| <= ε.

    Args:
        path: path of curves, regular or not.
        epsilon: speed threshold. Defaults to the configured regularity
            factor times the largest mean speed along the path.

    Returns:
        list[tuple[float, float]]: time and parameter of each failure.

    """
    speeds = [speed(c) for c in path]
    if epsilon is None:
        scale = max(float(np.mean(s)) for s in speeds)
        epsilon = configuration._REGULARITY * scale
    theta = path[0].theta
    failures = []
    for t, values in zip(path.times, speeds):
        for index in np.flatnonzero(values <= epsilon):
            failures.append((float(t), float(theta[index])))
    return failures
