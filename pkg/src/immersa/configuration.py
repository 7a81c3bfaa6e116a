"""Settings for `immersa`

Contents:
    set_samples: sets the default number of samples per curve.
    set_steps: sets the default number of time steps in a path of curves.
    set_regularity: sets the factor of the scale-aware regularity threshold.
    set_closure: sets the factor of the closure tolerance for SRV curves.
    set_collapse: sets the slope threshold for collapse intervals.
    set_curvature_ceiling: sets the factor of the curvature blowup ceiling.
    set_step_floor: sets the smallest time step a geodesic integrator may take.
    set_slope_limit: sets the bound of the dynamic programming slope set.
    set_sawtooth_steepness: sets the tooth steepness of sawtooth paths.
    set_threads: sets the number of workers for independent sub-tasks.

To Do:
    Allow loading these settings from a toml file in a project directory.

"""
from __future__ import annotations

import logging
import os

logger = logging.getLogger(__name__)

_SAMPLES: int = 256
_STEPS: int = 32
_REGULARITY: float = 1e-6
_CLOSURE: float = 1e-9
_COLLAPSE: float = 0.05
_CURVATURE_CEILING: float = 1e4
_STEP_FLOOR: float = 1e-12
_SLOPE_LIMIT: int = 5
# Tooth steepness of the sawtooth construction.
_SAWTOOTH_STEEPNESS: float = 4.0


def _threads_from(text: str | None) -> int:
    """Reads a worker count from an environment value, falling back to 1."""
    if text is None:
        return 1
    try:
        threads = int(text)
    except ValueError:
        logger.warning(
            'ignoring IMMERSA_THREADS=%r: not an integer', text)
        return 1
    if threads < 1:
        logger.warning(
            'ignoring IMMERSA_THREADS=%r: must be at least 1', text)
        return 1
    return threads

_THREADS: int = _threads_from(os.environ.get('IMMERSA_THREADS'))


def _check_count(value: int, minimum: int, name: str) -> None:
    if isinstance(value, bool) or not isinstance(value, int):
        raise TypeError(f'{name} argument must be an int')
    if value < minimum:
        raise ValueError(f'{name} argument must be >= {minimum}')
    return

def _check_positive(value: float, name: str) -> None:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise TypeError(f'{name} argument must be a float')
    if value <= 0:
        raise ValueError(f'{name} argument must be positive')
    return

def set_samples(samples: int) -> None:
    """Sets the global default number of samples per curve.

    Args:
        samples: number of uniformly spaced samples, at least 8.

    Raises:
        TypeError: if 'samples' is not an int.
        ValueError: if 'samples' is less than 8.

    """
    _check_count(samples, 8, 'samples')
    globals()['_SAMPLES'] = samples
    return

def set_steps(steps: int) -> None:
    """Sets the global default number of time steps in a path of curves.

    Args:
        steps: number of time intervals, at least 1.

    Raises:
        TypeError: if 'steps' is not an int.
        ValueError: if 'steps' is less than 1.

    """
    _check_count(steps, 1, 'steps')
    globals()['_STEPS'] = steps
    return

def set_regularity(factor: float) -> None:
    """Sets the factor of the regularity threshold ε_reg = factor·ℓ_c/(2π).

    Args:
        factor: positive scale-free threshold.

    Raises:
        TypeError: if 'factor' is not a number.
        ValueError: if 'factor' is not positive.

    """
    _check_positive(factor, 'factor')
    globals()['_REGULARITY'] = float(factor)
    return

def set_closure(factor: float) -> None:
    """Sets the factor of the closure tolerance factor·√ℓ_c.

    Args:
        factor: positive scale-free tolerance.

    Raises:
        TypeError: if 'factor' is not a number.
        ValueError: if 'factor' is not positive.

    """
    _check_positive(factor, 'factor')
    globals()['_CLOSURE'] = float(factor)
    return

def set_collapse(threshold: float) -> None:
    """Sets the slope below which a reparametrization counts as collapsed.

    Args:
        threshold: positive slope threshold.

    Raises:
        TypeError: if 'threshold' is not a number.
        ValueError: if 'threshold' is not positive.

    """
    _check_positive(threshold, 'threshold')
    globals()['_COLLAPSE'] = float(threshold)
    return

def set_curvature_ceiling(factor: float) -> None:
    """Sets the factor of the curvature ceiling κ_max = factor/ℓ_c.

    Args:
        factor: positive scale-free ceiling.

    Raises:
        TypeError: if 'factor' is not a number.
        ValueError: if 'factor' is not positive.

    """
    _check_positive(factor, 'factor')
    globals()['_CURVATURE_CEILING'] = float(factor)
    return

def set_step_floor(floor: float) -> None:
    """Sets the smallest time step a geodesic integrator may take.

    Args:
        floor: positive time step.

    Raises:
        TypeError: if 'floor' is not a number.
        ValueError: if 'floor' is not positive.

    """
    _check_positive(floor, 'floor')
    globals()['_STEP_FLOOR'] = float(floor)
    return

def set_slope_limit(limit: int) -> None:
    """Sets the bound p, q <= limit of the dynamic programming slope set.

    Args:
        limit: largest numerator or denominator of a slope, at least 1.

    Raises:
        TypeError: if 'limit' is not an int.
        ValueError: if 'limit' is less than 1.

    """
    _check_count(limit, 1, 'limit')
    globals()['_SLOPE_LIMIT'] = limit
    return

def set_threads(threads: int) -> None:
    """Sets the number of workers used for independent sub-tasks.

    Args:
        threads: number of worker threads, at least 1.

    Raises:
        TypeError: if 'threads' is not an int.
        ValueError: if 'threads' is less than 1.

    """
    _check_count(threads, 1, 'threads')
    globals()['_THREADS'] = threads
    return

def set_sawtooth_steepness(steepness: float) -> None:
    """Sets the tooth steepness S of `metrics.sawtooth_path`.

    Args:
        steepness: positive steepness; larger values give narrower teeth.

    Raises:
        TypeError: if 'steepness' is not a number.
        ValueError: if 'steepness' is not positive.

    """
    _check_positive(steepness, 'steepness')
    globals()['_SAWTOOTH_STEEPNESS'] = float(steepness)
    return
