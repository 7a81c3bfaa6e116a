"""Discrete regular curves and their arc length calculus

Curves are stored as N samples over the parameter domain [0, 2π]: uniformly
spaced over [0, 2π) for closed curves and including both endpoints for open
curves. Closed curves are differentiated spectrally and open curves through a
not-a-knot cubic spline, so every metric in `immersa` is assembled from the
same two θ-derivative operators.

Contents:
    CLOSED: name of the closed topology.
    OPEN: name of the open topology.
    DiscreteCurve: N uniformly sampled points in ℝᵈ with a topology flag.
    TangentField: vector field sampled on the grid of a DiscreteCurve.
    ArcData: speed, unit tangent, curvature and length of a curve.
    RegularityReport: result of `validate_regular`.
    PathOfCurves: time-discretized path of curves sharing one grid.
    fieldify: returns the raw array stored in a TangentField or array.
    grid: returns the parameter values of a sampled domain.
    quadrature_weights: returns the trapezoid weights of a sampled domain.
    theta_derivative: differentiates sampled values with respect to θ.
    theta_derivative_adjoint: transpose of `theta_derivative` of order 1.
    evaluate: interpolates sampled values at arbitrary parameters.
    speed: returns |c′| without checking regularity.
    regularity_threshold: returns the scale-aware threshold ε_reg.
    validate_regular: reports where a curve fails to be regular.
    arc_calculus: returns the ArcData of a regular curve.
    ds_derivative: applies D_s = (1/|c′|)∂_θ to a field repeatedly.
    integrate_ds: integrates a scalar field against arc length.
    resample: returns a curve interpolated onto a different sample count.

To Do:
    Add a nonuniform-in-θ variant for curves with corners.

"""
from __future__ import annotations

import dataclasses
import functools
from collections.abc import Sequence
from typing import TYPE_CHECKING, Any

import numpy as np
import scipy.fft
import scipy.interpolate

from . import configuration

if TYPE_CHECKING:
    from collections.abc import Iterator


CLOSED: str = 'closed'
OPEN: str = 'open'
TOPOLOGIES: tuple[str, ...] = (CLOSED, OPEN)
MINIMUM_SAMPLES: int = 8


@dataclasses.dataclass(frozen = True, eq = False)
class DiscreteCurve(object):
    """Uniformly sampled curve c: [0, 2π] → ℝᵈ.

    Regularity is not required at construction, since intermediate curves of
    a path may pass through singular configurations. Operations that need a
    regular curve call `validate_regular` themselves.

    Args:
        points: N×d array of coordinates.
        topology: either 'closed' or 'open'. Defaults to 'closed'.

    Raises:
        ValueError: if `points` is not an N×d array with N >= 8, d in {2, 3},
            finite entries, or if `topology` is not recognized.

    """

    points: np.ndarray
    topology: str = CLOSED

    def __post_init__(self) -> None:
        points = np.array(self.points, dtype = float)
        if points.ndim != 2:
            raise ValueError(
                f'points must be an N×d array, not shape {points.shape}')
        if points.shape[0] < MINIMUM_SAMPLES:
            raise ValueError(
                f'curves need at least {MINIMUM_SAMPLES} samples, not '
                f'{points.shape[0]}')
        if points.shape[1] not in (2, 3):
            raise ValueError(
                f'curves must live in 2 or 3 dimensions, not {points.shape[1]}')
        if not np.all(np.isfinite(points)):
            raise ValueError('points must be finite')
        if self.topology not in TOPOLOGIES:
            raise ValueError(
                f'topology must be one of {TOPOLOGIES}, not {self.topology}')
        points.setflags(write = False)
        object.__setattr__(self, 'points', points)
        return

    """ Properties """

    @property
    def samples(self) -> int:
        """Returns the number of samples N."""
        return self.points.shape[0]

    @property
    def dimension(self) -> int:
        """Returns the dimension d of the ambient space."""
        return self.points.shape[1]

    @property
    def closed(self) -> bool:
        """Returns whether the curve is closed."""
        return self.topology == CLOSED

    @property
    def spacing(self) -> float:
        """Returns the uniform parameter spacing Δθ."""
        return spacing(self.samples, self.topology)

    @property
    def theta(self) -> np.ndarray:
        """Returns the parameter values of the samples."""
        return grid(self.samples, self.topology)

    """ Instance Methods """

    def replace(self, points: np.ndarray) -> DiscreteCurve:
        """Returns a curve with `points` on the same topology.

        Args:
            points: new N×d array of coordinates.

        Returns:
            DiscreteCurve: with the topology of this curve.

        """
        return DiscreteCurve(points = points, topology = self.topology)

    def matches(self, other: DiscreteCurve) -> bool:
        """Returns whether `other` shares this curve's grid and topology."""
        return (
            self.topology == other.topology
            and self.points.shape == other.points.shape)


@dataclasses.dataclass(frozen = True, eq = False)
class TangentField(object):
    """Vector field h sampled on the grid of a DiscreteCurve.

    Args:
        values: N×d array of vectors.

    """

    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype = float)
        if values.ndim != 2:
            raise ValueError(
                f'values must be an N×d array, not shape {values.shape}')
        values.setflags(write = False)
        object.__setattr__(self, 'values', values)
        return


@dataclasses.dataclass(frozen = True, eq = False)
class ArcData(object):
    """Arc length quantities of a regular curve.

    Args:
        speed: N-array |c′|.
        unit_tangent: N×d array v = c′/|c′|.
        curvature: N-array κ, signed for planar curves.
        length: total length ℓ_c.

    """

    speed: np.ndarray
    unit_tangent: np.ndarray
    curvature: np.ndarray
    length: float


@dataclasses.dataclass(frozen = True, eq = False)
class RegularityReport(object):
    """Outcome of a regularity check.

    Args:
        ok: whether min |c′| > threshold.
        min_speed: smallest sampled speed.
        indices: sample indices where the speed is at or below threshold.
        threshold: the ε the speeds were compared against.

    """

    ok: bool
    min_speed: float
    indices: tuple[int, ...]
    threshold: float

    def __bool__(self) -> bool:
        return self.ok


@dataclasses.dataclass(frozen = True, eq = False)
class PathOfCurves(Sequence):
    """Time-discretized path t ↦ γ(t) of curves on a shared grid.

    Args:
        curves: T + 1 curves at uniformly spaced times.
        duration: length of the time interval. Defaults to 1.0.

    Raises:
        ValueError: if fewer than 2 curves are passed or the curves do not
            share their grid and topology.

    """

    curves: tuple[DiscreteCurve, ...]
    duration: float = 1.0

    def __post_init__(self) -> None:
        curves = tuple(self.curves)
        if len(curves) < 2:
            raise ValueError('a path needs at least 2 curves')
        if not all(curves[0].matches(c) for c in curves[1:]):
            raise ValueError('curves in a path must share grid and topology')
        object.__setattr__(self, 'curves', curves)
        return

    """ Properties """

    @property
    def steps(self) -> int:
        """Returns the number of time intervals T."""
        return len(self.curves) - 1

    @property
    def dt(self) -> float:
        """Returns the time step."""
        return self.duration / self.steps

    @property
    def times(self) -> np.ndarray:
        """Returns the T + 1 sample times."""
        return np.linspace(0.0, self.duration, self.steps + 1)

    @property
    def topology(self) -> str:
        """Returns the shared topology."""
        return self.curves[0].topology

    @property
    def points(self) -> np.ndarray:
        """Returns the (T + 1)×N×d array of all samples."""
        return np.stack([c.points for c in self.curves])

    """ Class Methods """

    @classmethod
    def from_points(
        cls,
        points: np.ndarray,
        topology: str = CLOSED,
        duration: float = 1.0) -> PathOfCurves:
        """Builds a path from a (T + 1)×N×d array.

        Args:
            points: stacked samples of every curve.
            topology: shared topology. Defaults to 'closed'.
            duration: length of the time interval. Defaults to 1.0.

        Returns:
            PathOfCurves: with one curve per leading index of `points`.

        """
        curves = tuple(
            DiscreteCurve(points = p, topology = topology) for p in points)
        return cls(curves = curves, duration = duration)

    """ Dunder Methods """

    def __getitem__(self, index: Any) -> Any:
        return self.curves[index]

    def __iter__(self) -> Iterator[DiscreteCurve]:
        return iter(self.curves)

    def __len__(self) -> int:
        return len(self.curves)


""" Grid Tools """

def fieldify(item: TangentField | np.ndarray | Sequence[Any]) -> np.ndarray:
    """Returns the raw array of a field.

    Args:
        item: a TangentField or anything numpy can turn into an array.

    Returns:
        np.ndarray: float array of the field values.

    """
    if isinstance(item, TangentField):
        return item.values
    else:
        return np.asarray(item, dtype = float)

def spacing(samples: int, topology: str) -> float:
    """Returns Δθ for `samples` points of `topology`."""
    if topology == CLOSED:
        return 2 * np.pi / samples
    else:
        return 2 * np.pi / (samples - 1)

def grid(samples: int, topology: str) -> np.ndarray:
    """Returns the parameter values θᵢ of a sampled domain.

    Args:
        samples: number of samples N.
        topology: 'closed' for [0, 2π) or 'open' for [0, 2π].

    Returns:
        np.ndarray: the N uniformly spaced parameter values.

    """
    return np.arange(samples) * spacing(samples, topology)

def quadrature_weights(samples: int, topology: str) -> np.ndarray:
    """Returns trapezoid weights for integrating over [0, 2π].

    Args:
        samples: number of samples N.
        topology: 'closed' or 'open'.

    Returns:
        np.ndarray: N weights summing to 2π.

    """
    weights = np.full(samples, spacing(samples, topology))
    if topology == OPEN:
        weights[[0, -1]] *= 0.5
    return weights

@functools.lru_cache(maxsize = 32)
def _spline_derivative_matrix(samples: int) -> np.ndarray:
    theta = grid(samples, OPEN)
    spline = scipy.interpolate.CubicSpline(
        theta,
        np.eye(samples),
        axis = 0,
        bc_type = 'not-a-knot')
    matrix = spline.derivative()(theta)
    matrix.setflags(write = False)
    return matrix

def _spectral_derivative(values: np.ndarray, order: int) -> np.ndarray:
    samples = values.shape[0]
    coefficients = scipy.fft.rfft(values, axis = 0)
    multiplier = (1j * np.arange(coefficients.shape[0])) ** order
    if order % 2 == 1 and samples % 2 == 0:
        multiplier[-1] = 0.0
    shape = (-1,) + (1,) * (values.ndim - 1)
    return scipy.fft.irfft(
        coefficients * multiplier.reshape(shape),
        n = samples,
        axis = 0)

def theta_derivative(
    values: np.ndarray,
    topology: str,
    order: int = 1) -> np.ndarray:
    """Differentiates sampled values with respect to θ.

    Args:
        values: array whose first axis runs over the samples.
        topology: 'closed' uses the FFT derivative, 'open' the derivative of
            the not-a-knot cubic spline through the samples.
        order: number of derivatives to take. Defaults to 1.

    Returns:
        np.ndarray: derivative with the shape of `values`.

    """
    values = np.asarray(values, dtype = float)
    if order == 0:
        return values.copy()
    if topology == CLOSED:
        return _spectral_derivative(values, order)
    matrix = _spline_derivative_matrix(values.shape[0])
    for _ in range(order):
        values = np.tensordot(matrix, values, axes = (1, 0))
    return values

def theta_derivative_adjoint(values: np.ndarray, topology: str) -> np.ndarray:
    """Applies the transpose of the first order `theta_derivative`.

    Args:
        values: array whose first axis runs over the samples.
        topology: 'closed' or 'open'.

    Returns:
        np.ndarray: Dᵀ applied to `values`.

    """
    values = np.asarray(values, dtype = float)
    if topology == CLOSED:
        return -_spectral_derivative(values, 1)
    matrix = _spline_derivative_matrix(values.shape[0])
    return np.tensordot(matrix.T, values, axes = (1, 0))

def evaluate(
    values: np.ndarray,
    topology: str,
    points: np.ndarray) -> np.ndarray:
    """Interpolates sampled values at arbitrary parameters.

    Closed data is evaluated through its trigonometric interpolant, with
    `points` read modulo 2π; open data through the not-a-knot cubic spline.

    Args:
        values: array whose first axis runs over the samples.
        topology: 'closed' or 'open'.
        points: parameter values to evaluate at.

    Returns:
        np.ndarray: interpolated values, one row per entry of `points`.

    """
    values = np.asarray(values, dtype = float)
    points = np.asarray(points, dtype = float)
    samples = values.shape[0]
    if topology == OPEN:
        spline = scipy.interpolate.CubicSpline(
            grid(samples, OPEN),
            values,
            axis = 0,
            bc_type = 'not-a-knot')
        return spline(points)
    coefficients = scipy.fft.rfft(values, axis = 0) / samples
    weights = np.full(coefficients.shape[0], 2.0)
    weights[0] = 1.0
    if samples % 2 == 0:
        weights[-1] = 1.0
    phases = np.exp(1j * np.outer(points, np.arange(coefficients.shape[0])))
    return np.real(
        np.tensordot(phases * weights, coefficients, axes = (1, 0)))


""" Arc Length Calculus """

def speed(c: DiscreteCurve) -> np.ndarray:
    """Returns the sampled speed |c′| without checking regularity."""
    derivative = theta_derivative(c.points, c.topology)
    return np.linalg.norm(derivative, axis = 1)

def regularity_threshold(c: DiscreteCurve, factor: float | None = None) -> float:
    """Returns ε_reg = factor·ℓ_c/(2π).

    Args:
        c: curve to compute a threshold for.
        factor: scale-free factor. Defaults to the configured regularity.

    Returns:
        float: speed threshold in the length units of `c`.

    """
    factor = configuration._REGULARITY if factor is None else factor
    weights = quadrature_weights(c.samples, c.topology)
    length = float(np.sum(weights * speed(c)))
    return factor * length / (2 * np.pi)

def validate_regular(
    c: DiscreteCurve,
    epsilon: float | None = None) -> RegularityReport:
    """Reports whether min |c′| > ε and where that fails.

    Args:
        c: curve to check.
        epsilon: speed threshold. Defaults to `regularity_threshold(c)`.

    Returns:
        RegularityReport: whose `indices` list the offending samples.

    """
    speeds = speed(c)
    threshold = regularity_threshold(c) if epsilon is None else epsilon
    offending = np.flatnonzero(speeds <= threshold)
    return RegularityReport(
        ok = offending.size == 0,
        min_speed = float(np.min(speeds)),
        indices = tuple(int(i) for i in offending),
        threshold = float(threshold))

def require_regular(c: DiscreteCurve, epsilon: float | None = None) -> None:
    """Raises ValueError if `c` is not regular.

    Args:
        c: curve to check.
        epsilon: speed threshold. Defaults to `regularity_threshold(c)`.

    Raises:
        ValueError: if the speed drops to or below the threshold.

    """
    report = validate_regular(c, epsilon)
    if not report.ok:
        raise ValueError(
            f'curve is not regular: min speed {report.min_speed:.3e} <= '
            f'{report.threshold:.3e} at {len(report.indices)} samples')
    return

def arc_calculus(c: DiscreteCurve) -> ArcData:
    """Returns |c′|, v, κ and ℓ_c of a regular curve.

    Args:
        c: regular curve.

    Raises:
        ValueError: if `c` is not regular.

    Returns:
        ArcData: arc length quantities of `c`.

    """
    require_regular(c)
    first = theta_derivative(c.points, c.topology)
    second = theta_derivative(first, c.topology)
    speeds = np.linalg.norm(first, axis = 1)
    if c.dimension == 2:
        cross = first[:, 0] * second[:, 1] - first[:, 1] * second[:, 0]
    else:
        cross = np.linalg.norm(np.cross(first, second), axis = 1)
    weights = quadrature_weights(c.samples, c.topology)
    return ArcData(
        speed = speeds,
        unit_tangent = first / speeds[:, None],
        curvature = cross / speeds**3,
        length = float(np.sum(weights * speeds)))

def ds_derivative(
    c: DiscreteCurve,
    h: TangentField | np.ndarray,
    order: int = 1) -> TangentField:
    """Returns D_s^j h, iterating D_s h = h′/|c′|.

    Args:
        c: regular curve carrying the field.
        h: field on the grid of `c`.
        order: number j >= 0 of arc length derivatives. Defaults to 1.

    Raises:
        ValueError: if `c` is not regular, `order` is negative or `h` is not on
            the grid of `c`.

    Returns:
        TangentField: D_s^j h on the grid of `c`.

    """
    if order < 0:
        raise ValueError('order must be >= 0')
    values = fieldify(h)
    if values.shape[0] != c.samples:
        raise ValueError('field is not on the grid of the curve')
    require_regular(c)
    speeds = speed(c)
    shape = (-1,) + (1,) * (values.ndim - 1)
    for _ in range(order):
        values = theta_derivative(values, c.topology) / speeds.reshape(shape)
    return TangentField(values = values)

def integrate_ds(c: DiscreteCurve, f: np.ndarray | float) -> float:
    """Returns the quadrature of ∫ f |c′| dθ.

    Args:
        c: regular curve.
        f: scalar field on the grid of `c` or a constant.

    Raises:
        ValueError: if `c` is not regular.

    Returns:
        float: integral of `f` against arc length.

    """
    require_regular(c)
    values = np.broadcast_to(np.asarray(f, dtype = float), (c.samples,))
    weights = quadrature_weights(c.samples, c.topology)
    return float(np.sum(weights * values * speed(c)))

def resample(c: DiscreteCurve, samples: int) -> DiscreteCurve:
    """Returns `c` interpolated onto `samples` uniformly spaced samples.

    Closed curves use trigonometric interpolation, which passes through the
    original points whenever `samples` is a multiple of N. Open curves use a
    not-a-knot cubic spline.

    Args:
        c: regular curve.
        samples: new sample count M >= 8.

    Raises:
        ValueError: if `c` is not regular or `samples` < 8.

    Returns:
        DiscreteCurve: with M samples and the topology of `c`.

    """
    if samples < MINIMUM_SAMPLES:
        raise ValueError(f'samples must be >= {MINIMUM_SAMPLES}')
    require_regular(c)
    if samples == c.samples:
        return c
    points = evaluate(c.points, c.topology, grid(samples, c.topology))
    return DiscreteCurve(points = points, topology = c.topology)
