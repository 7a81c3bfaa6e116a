"""Riemannian metrics on the space of curves

Every metric is described by a frozen MetricSpec. Evaluation and the
gradient used by path straightening dispatch on the metric type, so adding a
metric means adding a spec class and registering it with `metric_eval` and
`metric_gradient`.

Contents:
    MetricSpec: base class of every metric description.
    L2: the metric ∫⟨h, k⟩ ds.
    AlmostLocal: base class of the L² metrics weighted by Φ(ℓ_c, κ).
    Conformal: almost-local metric with Φ = ℓ_c^p.
    CurvatureWeighted: almost-local metric with Φ = 1 + Aκ².
    ScaleInvariant: almost-local metric with Φ = ℓ_c⁻³ + κ²ℓ_c.
    Elastic: first order elastic metric with weights (a, b).
    Sobolev: Sobolev metric with constant coefficients a₀, ..., a_n.
    PathFunctionals: energy and length of a path of curves.
    parse_metric: returns the MetricSpec described by a compact string.
    metric_eval: evaluates G_c(h, k) for any MetricSpec.
    metric_gradient: returns G_c(h, h) and its gradients in c and h.
    sobolev_form: applies the quadrature form of a Sobolev metric to h.
    apply_operator_L: applies L_c = Σ (−1)ʲ aⱼ D_s^{2j}.
    normal_projection: splits a field into normal and tangential parts.
    path_functionals: energy and length of a path, full or normal-only.
    sawtooth_path: path of sawtooth curves between two concentric circles.

To Do:
    Allow user-supplied Φ(ℓ) for conformal metrics once specs carry a
    serialization for arbitrary callables.

"""
from __future__ import annotations

import abc
import dataclasses
import functools
import logging
from typing import NamedTuple

import numpy as np
import scipy.ndimage

from . import configuration
from .curves import (
    CLOSED,
    ArcData,
    DiscreteCurve,
    PathOfCurves,
    TangentField,
    arc_calculus,
    ds_derivative,
    fieldify,
    grid,
    quadrature_weights,
    require_regular,
    speed,
    theta_derivative,
    theta_derivative_adjoint,
)
from .srv import ElasticCoefficients, elastic_metric

logger = logging.getLogger(__name__)


def _number(value: float) -> str:
    value = float(value)
    return str(int(value)) if value.is_integer() else repr(value)


@dataclasses.dataclass(frozen = True)
class MetricSpec(abc.ABC):
    """Base class for metric descriptions.

    Subclasses are immutable and render themselves as the compact string that
    `parse_metric` reads back.

    """

    @property
    def degenerate(self) -> bool:
        """Returns whether constant fields lie in the kernel of the metric."""
        return False

    @abc.abstractmethod
    def __str__(self) -> str:
        """Returns the compact string form of the metric description."""


@dataclasses.dataclass(frozen = True)
class L2(MetricSpec):
    """The L² metric G_c(h, k) = ∫⟨h, k⟩ ds."""

    def __str__(self) -> str:
        return 'l2'


@dataclasses.dataclass(frozen = True)
class AlmostLocal(MetricSpec):
    """Base class for metrics ∫ Φ(ℓ_c, κ)⟨h, k⟩ ds."""

    @abc.abstractmethod
    def weight(self, arc: ArcData) -> np.ndarray:
        """Returns Φ(ℓ_c, κ) at every sample.

        Args:
            arc: arc length data of the base curve.

        Returns:
            np.ndarray: N-array of positive weights.

        """


@dataclasses.dataclass(frozen = True)
class Conformal(AlmostLocal):
    """Almost-local metric with Φ = ℓ_c^p.

    Args:
        power: exponent p. Defaults to 1.0.

    """

    power: float = 1.0

    def weight(self, arc: ArcData) -> np.ndarray:
        return np.full(arc.speed.shape, arc.length**self.power)

    def __str__(self) -> str:
        return f'almost:conformal:p={_number(self.power)}'


@dataclasses.dataclass(frozen = True)
class CurvatureWeighted(AlmostLocal):
    """Almost-local metric with Φ = 1 + Aκ².

    Args:
        strength: the curvature weight A > 0. Defaults to 1.0.

    Raises:
        ValueError: if `strength` is not positive.

    """

    strength: float = 1.0

    def __post_init__(self) -> None:
        if not self.strength > 0:
            raise ValueError('curvature weight A must be positive')
        return

    def weight(self, arc: ArcData) -> np.ndarray:
        return 1.0 + self.strength * arc.curvature**2

    def __str__(self) -> str:
        return f'almost:curv:A={_number(self.strength)}'


@dataclasses.dataclass(frozen = True)
class ScaleInvariant(AlmostLocal):
    """Almost-local metric with Φ = ℓ_c⁻³ + κ²ℓ_c."""

    def weight(self, arc: ArcData) -> np.ndarray:
        return arc.length**-3 + arc.curvature**2 * arc.length

    def __str__(self) -> str:
        return 'almost:scaleinv'


@dataclasses.dataclass(frozen = True)
class Elastic(MetricSpec):
    """Elastic metric ∫ a²|(D_s h)⊥|² + b²⟨D_s h, v⟩² ds.

    Args:
        a: normal weight. Defaults to 1.0.
        b: tangential weight. Defaults to 0.5, the SRV case.

    Raises:
        ValueError: if either weight is not positive.

    """

    a: float = 1.0
    b: float = 0.5

    def __post_init__(self) -> None:
        ElasticCoefficients(a = self.a, b = self.b)
        return

    @property
    def coefficients(self) -> ElasticCoefficients:
        """Returns the weights as ElasticCoefficients."""
        return ElasticCoefficients(a = self.a, b = self.b)

    @property
    def degenerate(self) -> bool:
        return True

    def __str__(self) -> str:
        return f'elastic:a={_number(self.a)},b={_number(self.b)}'


@dataclasses.dataclass(frozen = True)
class Sobolev(MetricSpec):
    """Sobolev metric Σ aⱼ ∫⟨D_sʲh, D_sʲk⟩ ds with constant coefficients.

    Args:
        coefficients: a₀, ..., a_n with every aⱼ >= 0 and a_n > 0.

    Raises:
        ValueError: if the coefficients are empty, negative or end in zero.

    """

    coefficients: tuple[float, ...] = (1.0, 0.0, 1.0)

    def __post_init__(self) -> None:
        coefficients = tuple(float(a) for a in self.coefficients)
        if not coefficients:
            raise ValueError('a Sobolev metric needs at least one coefficient')
        if any(a < 0 for a in coefficients):
            raise ValueError('Sobolev coefficients must be nonnegative')
        if coefficients[-1] <= 0:
            raise ValueError('the leading Sobolev coefficient must be positive')
        object.__setattr__(self, 'coefficients', coefficients)
        return

    @property
    def order(self) -> int:
        """Returns the order n of the metric."""
        return len(self.coefficients) - 1

    @property
    def degenerate(self) -> bool:
        return self.coefficients[0] == 0

    def __str__(self) -> str:
        return 'sobolev:' + ','.join(_number(a) for a in self.coefficients)


class PathFunctionals(NamedTuple):
    """Energy and length of a path of curves."""

    energy: float
    length: float


""" Parsing """

def _parameters(text: str, allowed: tuple[str, ...]) -> dict[str, float]:
    parameters = {}
    for item in filter(None, text.split(',')):
        key, separator, value = item.partition('=')
        if not separator:
            raise ValueError(f'expected key=value, not {item!r}')
        key = key.strip()
        if key not in allowed:
            raise ValueError(
                f'unknown parameter {key!r}; expected one of {allowed}')
        parameters[key] = float(value)
    return parameters

def parse_metric(text: str) -> MetricSpec:
    """Returns the MetricSpec described by `text`.

    Recognized forms are 'l2', 'almost:conformal:p=P', 'almost:curv:A=A',
    'almost:scaleinv', 'elastic:a=A,b=B' and 'sobolev:a0,a1,...,an'.

    Args:
        text: compact metric string, as produced by `str(spec)`.

    Raises:
        ValueError: if `text` does not describe a metric.

    Returns:
        MetricSpec: the described metric.

    """
    head, _, tail = text.strip().lower().partition(':')
    try:
        if head == 'l2' and not tail:
            return L2()
        elif head == 'elastic':
            return Elastic(**_parameters(tail, ('a', 'b')))
        elif head == 'sobolev':
            return Sobolev(
                coefficients = tuple(float(a) for a in tail.split(',')))
        elif head == 'almost':
            kind, _, rest = tail.partition(':')
            if kind == 'conformal':
                return Conformal(
                    power = _parameters(rest, ('p',)).get('p', 1.0))
            elif kind == 'curv':
                return CurvatureWeighted(
                    strength = _parameters(rest, ('a',)).get('a', 1.0))
            elif kind == 'scaleinv' and not rest:
                return ScaleInvariant()
    except TypeError as error:
        raise ValueError(f'bad parameters in metric {text!r}: {error}') from error
    raise ValueError(f'unrecognized metric {text!r}')


""" Evaluation """

def _check_field(c: DiscreteCurve, values: np.ndarray) -> np.ndarray:
    if values.shape != c.points.shape:
        raise ValueError(
            f'field of shape {values.shape} is not on a curve of shape '
            f'{c.points.shape}')
    return values

def _flag_constant(spec: MetricSpec, values: np.ndarray) -> None:
    if spec.degenerate and np.allclose(values, values[0]):
        logger.warning(
            'metric %s vanishes on constant fields; value is 0 on the '
            'quotient by translations', spec)
    return

@functools.singledispatch
def metric_eval(
    spec: MetricSpec,
    c: DiscreteCurve,
    h: TangentField | np.ndarray,
    k: TangentField | np.ndarray) -> float:
    """Returns G_c(h, k) for the metric described by `spec`.

    Args:
        spec: metric description.
        c: regular base curve.
        h: first tangent vector on the grid of `c`.
        k: second tangent vector on the grid of `c`.

    Raises:
        TypeError: if `spec` is not a registered MetricSpec.
        ValueError: if `c` is not regular or a field is off its grid.

    Returns:
        float: value of the symmetric bilinear form.

    """
    raise TypeError(f'metric_eval is not implemented for {type(spec)}')

@metric_eval.register
def _(spec: L2, c: DiscreteCurve, h, k) -> float:
    require_regular(c)
    h, k = _check_field(c, fieldify(h)), _check_field(c, fieldify(k))
    weights = quadrature_weights(c.samples, c.topology)
    return float(np.sum(weights * speed(c) * np.sum(h * k, axis = 1)))

@metric_eval.register
def _(spec: AlmostLocal, c: DiscreteCurve, h, k) -> float:
    arc = arc_calculus(c)
    h, k = _check_field(c, fieldify(h)), _check_field(c, fieldify(k))
    weights = quadrature_weights(c.samples, c.topology)
    density = spec.weight(arc) * np.sum(h * k, axis = 1)
    return float(np.sum(weights * arc.speed * density))

@metric_eval.register
def _(spec: Elastic, c: DiscreteCurve, h, k) -> float:
    h, k = _check_field(c, fieldify(h)), _check_field(c, fieldify(k))
    _flag_constant(spec, h)
    return elastic_metric(c, h, k, spec.coefficients)

@metric_eval.register
def _(spec: Sobolev, c: DiscreteCurve, h, k) -> float:
    h, k = _check_field(c, fieldify(h)), _check_field(c, fieldify(k))
    _flag_constant(spec, h)
    return float(np.sum(h * sobolev_form(c, spec.coefficients, k)))

def sobolev_form(
    c: DiscreteCurve,
    coefficients: tuple[float, ...],
    h: TangentField | np.ndarray) -> np.ndarray:
    """Returns M(c)h, the quadrature form of Σ aⱼ∫⟨D_sʲ·, D_sʲ·⟩ ds.

    G_c(h, k) = Σᵢ ⟨k(θᵢ), (M(c)h)(θᵢ)⟩. On closed curves M(c)h equals
    Δθ·|c′|·L_c h exactly.

    Args:
        c: regular base curve.
        coefficients: a₀, ..., a_n.
        h: field on the grid of `c`.

    Raises:
        ValueError: if `c` is not regular.

    Returns:
        np.ndarray: N×d array.

    """
    require_regular(c)
    values = fieldify(h)
    speeds = speed(c)
    weights = quadrature_weights(c.samples, c.topology) * speeds
    derivatives = [values]
    for _ in range(len(coefficients) - 1):
        derivatives.append(
            theta_derivative(derivatives[-1], c.topology) / speeds[:, None])
    result = np.zeros_like(values)
    for j in reversed(range(len(coefficients))):
        result = result + coefficients[j] * weights[:, None] * derivatives[j]
        if j > 0:
            result = theta_derivative_adjoint(result / speeds[:, None], c.topology)
    return result


""" Gradients """

def _sobolev_gradient(
    c: DiscreteCurve,
    coefficients: tuple[float, ...],
    h: np.ndarray) -> tuple[float, np.ndarray, np.ndarray]:
    first = theta_derivative(c.points, c.topology)
    speeds = np.linalg.norm(first, axis = 1)
    tangent = first / speeds[:, None]
    weights = quadrature_weights(c.samples, c.topology)
    derivatives = [h]
    for _ in range(len(coefficients) - 1):
        derivatives.append(
            theta_derivative(derivatives[-1], c.topology) / speeds[:, None])
    value = 0.0
    speed_bar = np.zeros(c.samples)
    adjoint = np.zeros_like(h)
    for j in reversed(range(len(coefficients))):
        squares = np.sum(derivatives[j]**2, axis = 1)
        value += coefficients[j] * float(np.sum(weights * speeds * squares))
        adjoint = adjoint + 2 * coefficients[j] * (
            weights * speeds)[:, None] * derivatives[j]
        speed_bar += coefficients[j] * weights * squares
        if j > 0:
            speed_bar -= np.sum(adjoint * derivatives[j], axis = 1) / speeds
            adjoint = theta_derivative_adjoint(
                adjoint / speeds[:, None], c.topology)
    gradient_c = theta_derivative_adjoint(speed_bar[:, None] * tangent, c.topology)
    return value, gradient_c, adjoint

@functools.singledispatch
def metric_gradient(
    spec: MetricSpec,
    c: DiscreteCurve,
    h: TangentField | np.ndarray) -> tuple[float, np.ndarray, np.ndarray]:
    """Returns G_c(h, h) with its gradients in the samples of c and of h.

    Args:
        spec: metric description.
        c: regular base curve.
        h: tangent vector on the grid of `c`.

    Raises:
        TypeError: if `spec` is not a registered MetricSpec.
        ValueError: if `c` is not regular or `h` is off its grid.

    Returns:
        tuple[float, np.ndarray, np.ndarray]: the squared norm, ∂/∂c and
            ∂/∂h, both N×d arrays.

    """
    raise TypeError(f'metric_gradient is not implemented for {type(spec)}')

@metric_gradient.register
def _(spec: L2, c: DiscreteCurve, h) -> tuple[float, np.ndarray, np.ndarray]:
    require_regular(c)
    return _sobolev_gradient(c, (1.0,), _check_field(c, fieldify(h)))

@metric_gradient.register
def _(spec: Sobolev, c: DiscreteCurve, h) -> tuple[float, np.ndarray, np.ndarray]:
    require_regular(c)
    return _sobolev_gradient(c, spec.coefficients, _check_field(c, fieldify(h)))

@metric_gradient.register
def _(spec: Elastic, c: DiscreteCurve, h) -> tuple[float, np.ndarray, np.ndarray]:
    require_regular(c)
    h = _check_field(c, fieldify(h))
    weights = quadrature_weights(c.samples, c.topology)
    y = theta_derivative(c.points, c.topology)
    z = theta_derivative(h, c.topology)
    s = np.linalg.norm(y, axis = 1)
    zz = np.sum(z * z, axis = 1)
    zy = np.sum(z * y, axis = 1)
    a2, b2 = spec.a**2, spec.b**2
    value = float(np.sum(weights * (a2 * zz / s + (b2 - a2) * zy**2 / s**3)))
    dz = weights[:, None] * (
        2 * a2 * z / s[:, None]
        + 2 * (b2 - a2) * (zy / s**3)[:, None] * y)
    dy = weights[:, None] * (
        -a2 * (zz / s**3)[:, None] * y
        + (b2 - a2) * (
            2 * (zy / s**3)[:, None] * z
            - 3 * (zy**2 / s**5)[:, None] * y))
    return (
        value,
        theta_derivative_adjoint(dy, c.topology),
        theta_derivative_adjoint(dz, c.topology))

@metric_gradient.register
def _(spec: AlmostLocal, c: DiscreteCurve, h) -> tuple[float, np.ndarray, np.ndarray]:
    h = _check_field(c, fieldify(h))
    squares = np.sum(h * h, axis = 1)
    weights = quadrature_weights(c.samples, c.topology)
    def energy(points: np.ndarray) -> float:
        arc = arc_calculus(c.replace(points))
        return float(np.sum(weights * spec.weight(arc) * arc.speed * squares))
    arc = arc_calculus(c)
    density = weights * spec.weight(arc) * arc.speed
    step = 1e-6 * max(1.0, arc.length / (2 * np.pi))
    gradient_c = np.zeros_like(h)
    points = np.array(c.points)
    for index in np.ndindex(*points.shape):
        original = points[index]
        points[index] = original + step
        forward = energy(points)
        points[index] = original - step
        backward = energy(points)
        points[index] = original
        gradient_c[index] = (forward - backward) / (2 * step)
    return (
        float(np.sum(density * squares)),
        gradient_c,
        2 * density[:, None] * h)


""" Operators """

def apply_operator_L(
    c: DiscreteCurve,
    coefficients: tuple[float, ...],
    h: TangentField | np.ndarray) -> TangentField:
    """Returns L_c h = Σ (−1)ʲ aⱼ D_s^{2j} h.

    On closed curves ∫⟨L_c h, k⟩ ds equals the Sobolev metric with the same
    coefficients for every k.

    Args:
        c: regular base curve.
        coefficients: a₀, ..., a_n.
        h: field on the grid of `c`.

    Raises:
        ValueError: if `c` is not regular.

    Returns:
        TangentField: L_c h on the grid of `c`.

    """
    values = _check_field(c, fieldify(h))
    result = np.zeros_like(values)
    for j, a in enumerate(coefficients):
        if a:
            term = ds_derivative(c, values, 2 * j).values
            result = result + (-1)**j * a * term
    return TangentField(values = result)

def normal_projection(
    c: DiscreteCurve,
    h: TangentField | np.ndarray) -> tuple[TangentField, np.ndarray]:
    """Splits `h` into h⊥ = h − ⟨h, v⟩v and the coefficient ⟨h, v⟩.

    Args:
        c: regular base curve.
        h: field on the grid of `c`.

    Raises:
        ValueError: if `c` is not regular.

    Returns:
        tuple[TangentField, np.ndarray]: the normal part and the N-array of
            tangential coefficients.

    """
    values = _check_field(c, fieldify(h))
    tangent = arc_calculus(c).unit_tangent
    along = np.sum(values * tangent, axis = 1)
    return TangentField(values = values - along[:, None] * tangent), along


""" Paths """

def path_functionals(
    spec: MetricSpec,
    path: PathOfCurves,
    mode: str = 'full') -> PathFunctionals:
    """Returns the energy ∫ G(γ_t, γ_t) dt and length ∫ √G(γ_t, γ_t) dt.

    Velocities are central differences in time, one-sided at the ends; the
    time integrals use the trapezoid rule.

    Args:
        spec: metric description.
        path: path of regular curves.
        mode: 'full' measures the whole velocity, 'normal' only its normal
            part. Defaults to 'full'.

    Raises:
        ValueError: if `mode` is not recognized or a curve is not regular.

    Returns:
        PathFunctionals: energy and length; length² <= duration·energy.

    """
    if mode not in ('full', 'normal'):
        raise ValueError(f"mode must be 'full' or 'normal', not {mode!r}")
    points = path.points
    if np.all(points == points[0]):
        require_regular(path[0])
        return PathFunctionals(energy = 0.0, length = 0.0)
    velocities = np.gradient(
        points,
        path.dt,
        axis = 0,
        edge_order = 2 if path.steps >= 2 else 1)
    norms = np.zeros(len(path))
    for index, (curve, velocity) in enumerate(zip(path, velocities)):
        if mode == 'normal':
            velocity = normal_projection(curve, velocity)[0].values
        norms[index] = max(metric_eval(spec, curve, velocity, velocity), 0.0)
    weights = np.full(len(path), path.dt)
    weights[[0, -1]] *= 0.5
    return PathFunctionals(
        energy = float(np.sum(weights * norms)),
        length = float(np.sum(weights * np.sqrt(norms))))

def sawtooth_path(
    r0: float,
    r1: float,
    teeth: int,
    steps: int | None = None,
    samples: int | None = None) -> PathOfCurves:
    """Returns a path from the circle of radius r0 to that of radius r1.

    Each intermediate curve is the polar graph of ρ(t, θ) = r0 + (r1 − r0)·g,
    where g is clip(S·w(kθ) + (S + 1)t − S, 0, 1) convolved with a periodic
    Gaussian two samples wide, w is the triangle wave with values in [0, 1]
    and S the configured steepness. The convolution keeps g in [0, 1] and
    leaves the end circles untouched while removing the corners that spectral
    differentiation cannot resolve. Tips of the `teeth` reach the outer circle
    first and the teeth then widen until they fill it. As k grows the normal
    velocity of the path shrinks while its tangential velocity does not.

    Args:
        r0: inner radius, > 0.
        r1: outer radius, > r0.
        teeth: number k >= 1 of teeth.
        steps: number T of time intervals. Defaults to the configured T.
        samples: samples per curve. Defaults to max(N, 32k).

    Raises:
        ValueError: if the radii are not ordered and positive or k < 1.

    Returns:
        PathOfCurves: closed curves over t in [0, 1].

    """
    if not 0 < r0 < r1:
        raise ValueError('sawtooth radii must satisfy 0 < r0 < r1')
    if teeth < 1:
        raise ValueError('sawtooth needs at least one tooth')
    steps = steps or configuration._STEPS
    samples = samples or max(configuration._SAMPLES, 32 * teeth)
    steepness = configuration._SAWTOOTH_STEEPNESS
    theta = grid(samples, CLOSED)
    wave = 1.0 - np.abs(np.mod(teeth * theta / np.pi, 2.0) - 1.0)
    directions = np.column_stack([np.cos(theta), np.sin(theta)])
    curves = []
    for t in np.linspace(0.0, 1.0, steps + 1):
        growth = np.clip(steepness * wave + (steepness + 1) * t - steepness, 0, 1)
        if np.ptp(growth) > 0:
            growth = np.clip(
                scipy.ndimage.gaussian_filter1d(
                    growth, 2.0, mode = 'wrap', truncate = 8.0),
                0, 1)
        radius = r0 + (r1 - r0) * growth
        curves.append(
            DiscreteCurve(points = radius[:, None] * directions, topology = CLOSED))
    return PathOfCurves(curves = tuple(curves))
