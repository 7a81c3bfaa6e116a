"""Reference curves and fields

Contents:
    circle: closed circle of a given radius.
    ellipse: closed axis-aligned ellipse.
    segment: open straight segment (scale·θ, 0), optionally reversed.
    folded_ellipse: ellipse with a Z-shaped fold near its top.
    random_curve: band-limited closed curve, regular by construction.
    random_field: band-limited tangent field on the grid of a curve.

To Do:


"""
from __future__ import annotations

import numpy as np

from . import configuration
from .curves import CLOSED, OPEN, DiscreteCurve, TangentField, grid


def circle(
    radius: float = 1.0,
    samples: int | None = None,
    center: tuple[float, float] = (0.0, 0.0)) -> DiscreteCurve:
    """Returns the counterclockwise circle of `radius` about `center`.

    Args:
        radius: positive radius. Defaults to 1.0.
        samples: number of samples. Defaults to the configured N.
        center: planar center. Defaults to the origin.

    Returns:
        DiscreteCurve: closed circle starting at angle 0.

    """
    samples = samples or configuration._SAMPLES
    theta = grid(samples, CLOSED)
    points = radius * np.column_stack([np.cos(theta), np.sin(theta)])
    return DiscreteCurve(points = points + np.asarray(center), topology = CLOSED)

def ellipse(
    a: float = 2.0,
    b: float = 1.0,
    samples: int | None = None) -> DiscreteCurve:
    """Returns the ellipse (a cos θ, b sin θ).

    Args:
        a: horizontal semi-axis. Defaults to 2.0.
        b: vertical semi-axis. Defaults to 1.0.
        samples: number of samples. Defaults to the configured N.

    Returns:
        DiscreteCurve: closed ellipse.

    """
    samples = samples or configuration._SAMPLES
    theta = grid(samples, CLOSED)
    points = np.column_stack([a * np.cos(theta), b * np.sin(theta)])
    return DiscreteCurve(points = points, topology = CLOSED)

def segment(
    samples: int | None = None,
    scale: float = 1.0,
    reverse: bool = False) -> DiscreteCurve:
    """Returns the open segment θ ↦ (scale·θ, 0) or its reversal.

    Args:
        samples: number of samples. Defaults to the configured N.
        scale: constant speed of the segment. Defaults to 1.0.
        reverse: if True, returns θ ↦ (scale·(2π − θ), 0). Defaults to False.

    Returns:
        DiscreteCurve: open segment.

    """
    samples = samples or configuration._SAMPLES
    theta = grid(samples, OPEN)
    if reverse:
        theta = 2 * np.pi - theta
    points = np.column_stack([scale * theta, np.zeros_like(theta)])
    return DiscreteCurve(points = points, topology = OPEN)

def folded_ellipse(
    samples: int | None = None,
    depth: float = 1.0,
    width: float = 0.25) -> DiscreteCurve:
    """Returns an ellipse (2 cos θ, sin θ) carrying a Z-shaped fold.

    Near the top of the ellipse the horizontal coordinate is pushed forward
    by a Gaussian-derivative bump, so that a middle layer of the fold runs
    against the tangent of the ellipse. A smaller vertical bump keeps the
    three layers apart. With the default parameters the curve stays regular.

    Args:
        samples: number of samples. Defaults to the configured N.
        depth: strength of the fold; it reverses the tangent once
            depth/width > 2. Defaults to 1.0.
        width: angular width of the fold. Defaults to 0.25.

    Returns:
        DiscreteCurve: closed folded ellipse.

    """
    samples = samples or configuration._SAMPLES
    theta = grid(samples, CLOSED)
    offset = np.angle(np.exp(1j * (theta - np.pi / 2))) / width
    bump = offset * np.exp(-offset**2)
    x = 2 * np.cos(theta) + depth * bump
    y = np.sin(theta) + 0.3 * depth * bump
    return DiscreteCurve(points = np.column_stack([x, y]), topology = CLOSED)

def random_curve(
    samples: int | None = None,
    modes: int = 4,
    amplitude: float = 0.1,
    seed: int = 0) -> DiscreteCurve:
    """Returns a unit circle perturbed by decaying random Fourier modes.

    Mode k receives normal coefficients scaled by amplitude/k², which keeps
    the perturbation of the unit-speed tangent well below 1 for the defaults.

    Args:
        samples: number of samples. Defaults to the configured N.
        modes: highest Fourier mode. Defaults to 4.
        amplitude: size of the first mode. Defaults to 0.1.
        seed: seed of the random generator. Defaults to 0.

    Returns:
        DiscreteCurve: closed band-limited curve.

    """
    samples = samples or configuration._SAMPLES
    generator = np.random.default_rng(seed)
    theta = grid(samples, CLOSED)
    points = np.column_stack([np.cos(theta), np.sin(theta)])
    for k in range(2, modes + 1):
        coefficients = generator.normal(size = (2, 2)) * amplitude / k**2
        points += np.outer(np.cos(k * theta), coefficients[0])
        points += np.outer(np.sin(k * theta), coefficients[1])
    return DiscreteCurve(points = points, topology = CLOSED)

def random_field(
    curve: DiscreteCurve,
    modes: int = 3,
    seed: int = 0) -> TangentField:
    """Returns a band-limited random tangent field on the grid of `curve`.

    Args:
        curve: curve whose grid the field lives on.
        modes: highest Fourier mode (in θ for both topologies). Defaults to 3.
        seed: seed of the random generator. Defaults to 0.

    Returns:
        TangentField: smooth random field.

    """
    generator = np.random.default_rng(seed)
    theta = curve.theta
    values = np.zeros((curve.samples, curve.dimension))
    for k in range(modes + 1):
        coefficients = generator.normal(size = (2, curve.dimension))
        values += np.outer(np.cos(k * theta), coefficients[0])
        values += np.outer(np.sin(k * theta), coefficients[1])
    return TangentField(values = values)
