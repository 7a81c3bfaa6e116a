"""Reparametrizations and elastic matching

Matching is done in the SRV representation, where the cost of aligning c₁
to c₀ by φ is ∫ |q₀ − √φ′ q₁∘φ|² dθ. The cost is pointwise, so a dynamic
program over a K×K grid of parameter nodes finds the best piecewise linear φ
whose slopes come from a finite set. Besides the rational slopes p/q, two
degenerate moves are allowed: a flat move (φ′ = 0, c₀ matched against a
single point of c₁) and a jump move (φ′ = ∞, a piece of c₁ matched against a
single point of c₀). Optimal alignments of curves with opposing tangents
collapse onto these moves.

Contents:
    Reparametrization: sampled nondecreasing map of the parameter domain.
    MatchResult: result of a one-sided match.
    JointMatch: result of a two-sided match.
    CollapseReport: cells where a reparametrization is (nearly) constant.
    apply_reparam: returns c∘φ on the uniform grid.
    pointwise_optimal_scale: minimizes |q₀ − s q₁|² over s >= 0.
    dp_match: one-sided dynamic programming match of two curves.
    match_closed: dp_match over a set of starting offsets for closed curves.
    joint_match: two-sided dynamic programming match of two curves.
    collapse_report: lists the cells where φ′ falls below a threshold.

To Do:


"""
from __future__ import annotations

import concurrent.futures
import dataclasses
import logging
import math
from typing import TYPE_CHECKING, NamedTuple

import numpy as np

from . import configuration
from .curves import CLOSED, OPEN, DiscreteCurve, evaluate, grid, resample, spacing
from .srv import srvt

if TYPE_CHECKING:
    from collections.abc import Sequence

logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen = True, eq = False)
class Reparametrization(object):
    """Sampled nondecreasing map φ of the parameter domain.

    Open maps fix the endpoints: φ(0) = 0 and φ(2π) = 2π. Closed maps satisfy
    φ(θ + 2π) = φ(θ) + 2π, so only φ on [0, 2π) is stored and φ(0) is the
    seed offset. Maps that are constant on some cells are allowed, since
    optimal matches may degenerate; only `apply_reparam` needs a bijection.

    Args:
        values: M-array of φ(θᵢ) on the uniform grid of `topology`.
        topology: either 'closed' or 'open'. Defaults to 'open'.

    Raises:
        ValueError: if `values` decreases or breaks the boundary condition.

    """

    values: np.ndarray
    topology: str = OPEN

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype = float)
        if values.ndim != 1 or values.size < 2:
            raise ValueError('a reparametrization needs a 1-D array of values')
        if self.topology not in (CLOSED, OPEN):
            raise ValueError(f'unknown topology {self.topology}')
        if np.any(np.diff(self._extended(values)) < -1e-12):
            raise ValueError('a reparametrization must be nondecreasing')
        if self.topology == OPEN and not (
                np.isclose(values[0], 0.0, atol = 1e-9)
                and np.isclose(values[-1], 2 * np.pi, atol = 1e-9)):
            raise ValueError('open reparametrizations must fix 0 and 2π')
        values.setflags(write = False)
        object.__setattr__(self, 'values', values)
        return

    """ Properties """

    @property
    def samples(self) -> int:
        """Returns the number of stored values M."""
        return self.values.size

    @property
    def theta(self) -> np.ndarray:
        """Returns the grid the values are sampled on."""
        return grid(self.samples, self.topology)

    @property
    def seed(self) -> float:
        """Returns φ(0)."""
        return float(self.values[0])

    @property
    def slopes(self) -> np.ndarray:
        """Returns the discrete derivative on each cell.

        Closed maps include the cell that wraps from the last node to 2π.

        """
        step = spacing(self.samples, self.topology)
        return np.diff(self._extended(self.values)) / step

    @property
    def strictly_monotone(self) -> bool:
        """Returns whether every cell has a positive slope."""
        return bool(np.all(self.slopes > 0))

    """ Instance Methods """

    def _extended(self, values: np.ndarray) -> np.ndarray:
        if self.topology == CLOSED:
            return np.append(values, values[0] + 2 * np.pi)
        return values

    """ Class Methods """

    @classmethod
    def identity(cls, samples: int, topology: str = OPEN) -> Reparametrization:
        """Returns φ(θ) = θ on `samples` grid points."""
        return cls(values = grid(samples, topology), topology = topology)

    """ Dunder Methods """

    def __call__(self, theta: np.ndarray | float) -> np.ndarray:
        """Evaluates the piecewise linear interpolant of φ at `theta`.

        Args:
            theta: parameter values. Closed maps accept any real value.

        Returns:
            np.ndarray: φ(theta).

        """
        theta = np.asarray(theta, dtype = float)
        if self.topology == OPEN:
            return np.interp(theta, self.theta, self.values)
        nodes = np.append(self.theta, 2 * np.pi)
        turns = np.floor(theta / (2 * np.pi))
        base = theta - 2 * np.pi * turns
        return np.interp(base, nodes, self._extended(self.values)) + (
            2 * np.pi * turns)


@dataclasses.dataclass(frozen = True)
class CollapseReport(object):
    """Cells on which a reparametrization is (nearly) constant.

    Args:
        intervals: maximal [start, stop) ranges of cell indices.
        mass: total parameter length of the collapsed cells.

    """

    intervals: tuple[tuple[int, int], ...]
    mass: float

    def __bool__(self) -> bool:
        return bool(self.intervals)


@dataclasses.dataclass(frozen = True, eq = False)
class MatchResult(object):
    """Best on-grid alignment of c₁ to c₀.

    Args:
        phi: reparametrization with c₁∘φ ≈ c₀.
        distance: square root of the minimal matching cost.
        collapse_intervals: cells of φ with slope below the collapse
            threshold.
        seed: φ(0); always 0 for open curves.

    """

    phi: Reparametrization
    distance: float
    collapse_intervals: tuple[tuple[int, int], ...]
    seed: float = 0.0


class JointMatch(NamedTuple):
    """Two-sided alignment with c₀∘φ₁ ≈ c₁∘φ₂."""

    first: Reparametrization
    second: Reparametrization
    distance: float


""" Actions """

def apply_reparam(c: DiscreteCurve, phi: Reparametrization) -> DiscreteCurve:
    """Returns c∘φ sampled on the grid of `c`.

    Args:
        c: curve to reparametrize.
        phi: strictly monotone map with the topology of `c`.

    Raises:
        ValueError: if `phi` is not strictly monotone or its topology differs.

    Returns:
        DiscreteCurve: the reparametrized curve.

    """
    if phi.topology != c.topology:
        raise ValueError('reparametrization and curve topologies differ')
    if not phi.strictly_monotone:
        raise ValueError('only strictly monotone maps act on curves')
    if phi.samples == c.samples:
        values = phi.values
    else:
        values = phi(c.theta)
    return c.replace(evaluate(c.points, c.topology, values))

def pointwise_optimal_scale(q0: np.ndarray, q1: np.ndarray) -> np.ndarray | float:
    """Returns s* = max(⟨q₀, q₁⟩, 0)/|q₁|², the minimizer of |q₀ − s q₁|².

    s* vanishes exactly when q₁ points into the closed half space opposite
    to q₀, where the best local reparametrization has √φ′ = 0.

    Args:
        q0: d-vector, or array of them along the last axis.
        q1: nonzero d-vector of the same shape.

    Raises:
        ValueError: if `q1` vanishes.

    Returns:
        np.ndarray | float: the optimal scale(s).

    """
    q0 = np.asarray(q0, dtype = float)
    q1 = np.asarray(q1, dtype = float)
    squares = np.sum(q1 * q1, axis = -1)
    if np.any(squares == 0):
        raise ValueError('q1 must be nonzero')
    scale = np.maximum(np.sum(q0 * q1, axis = -1), 0.0) / squares
    return float(scale) if np.ndim(scale) == 0 else scale


""" Dynamic Programming """

def _slope_set(limit: int) -> list[tuple[int, int]]:
    return [
        (p, q)
        for p in range(1, limit + 1)
        for q in range(1, limit + 1)
        if math.gcd(p, q) == 1]

def _interpolate(values: np.ndarray, start: int, offset: float, count: int) -> np.ndarray:
    """Rows start + k + offset for k < count, linearly interpolated."""
    whole = int(math.floor(offset))
    fraction = offset - whole
    lower = values[start + whole:start + whole + count]
    if fraction == 0:
        return lower
    upper = values[start + whole + 1:start + whole + 1 + count]
    return (1 - fraction) * lower + fraction * upper

def _forward_cost(
    q0: np.ndarray,
    q1: np.ndarray,
    p: int,
    q: int,
    row: int,
    step: float) -> np.ndarray:
    count = q0.shape[0] - p
    scale = math.sqrt(q / p)
    total = np.zeros(count)
    previous = None
    for r in range(p + 1):
        target = _interpolate(q1, row - q, r * q / p, 1)[0]
        current = np.sum((q0[r:r + count] - scale * target)**2, axis = 1)
        if previous is not None:
            total += 0.5 * step * (previous + current)
        previous = current
    return total

def _swapped_cost(
    q0: np.ndarray,
    q1: np.ndarray,
    p: int,
    q: int,
    row: int,
    step: float) -> np.ndarray:
    count = q0.shape[0] - p
    scale = math.sqrt(p / q)
    total = np.zeros(count)
    previous = None
    for r in range(q + 1):
        source = _interpolate(q0, 0, r * p / q, count)
        current = np.sum((q1[row - q + r] - scale * source)**2, axis = 1)
        if previous is not None:
            total += 0.5 * step * (previous + current)
        previous = current
    return total

def _grid_path(
    q0: np.ndarray,
    q1: np.ndarray,
    step: float,
    limit: int,
    joint: bool,
    stride: int = 1) -> tuple[float, np.ndarray]:
    """Returns the minimal cost and its node path from (0, 0) to (K, K).

    Nodes are (i, j) pairs: i indexes every `stride`-th row of `q0`, j those
    of `q1`. Edge costs are trapezoid sums over all rows in between, so the
    cost of a path does not depend on `stride` and a coarse path costs the
    same on every grid that nests it. Rows of the table are processed in
    increasing j; within a row the chain of flat moves is resolved by a
    running minimum.

    """
    last = (q0.shape[0] - 1) // stride
    columns = np.arange(last + 1)
    moves = _slope_set(limit)
    squares0 = np.sum(q0**2, axis = 1)
    squares1 = np.sum(q1**2, axis = 1)
    flat = (0.5 * step * (squares0[:-1] + squares0[1:])).reshape(last, stride).sum(axis = 1)
    jump = (0.5 * step * (squares1[:-1] + squares1[1:])).reshape(last, stride).sum(axis = 1)
    prefix = np.concatenate([[0.0], np.cumsum(flat)])
    energy = np.full((last + 1, last + 1), np.inf)
    back_row = np.zeros((last + 1, last + 1), dtype = int)
    back_column = np.zeros((last + 1, last + 1), dtype = int)
    for row in range(last + 1):
        candidate = np.full(last + 1, np.inf)
        source_row = np.full(last + 1, -1)
        source_column = np.full(last + 1, -1)
        if row == 0:
            candidate[0] = 0.0
        else:
            candidate = energy[row - 1] + jump[row - 1]
            source_row[:] = row - 1
            source_column = columns.copy()
            for p, q in moves:
                if q > row or p > last:
                    continue
                arguments = (q0, q1, p * stride, q * stride, row * stride, step)
                cost = _forward_cost(*arguments)[::stride]
                if joint:
                    cost = np.minimum(cost, _swapped_cost(*arguments)[::stride])
                trial = energy[row - q, :last + 1 - p] + cost
                better = trial < candidate[p:]
                candidate[p:] = np.where(better, trial, candidate[p:])
                source_row[p:] = np.where(better, row - q, source_row[p:])
                source_column[p:] = np.where(
                    better, columns[:last + 1 - p], source_column[p:])
        shifted = candidate - prefix
        running = np.minimum.accumulate(shifted)
        origin = np.maximum.accumulate(np.where(shifted == running, columns, 0))
        energy[row] = prefix + running
        along = origin < columns
        back_row[row] = np.where(along, row, source_row)
        back_column[row] = np.where(along, columns - 1, source_column)
    nodes = [(last, last)]
    while nodes[-1] != (0, 0):
        i, j = nodes[-1]
        nodes.append((int(back_column[j, i]), int(back_row[j, i])))
    return float(energy[last, last]), _flats_first(np.array(nodes[::-1]))

def _flats_first(nodes: np.ndarray) -> np.ndarray:
    """Reorders every run of flat and jump moves so that its flats come first.

    Flat moves cost the same in every row and jump moves in every column, so
    the reordered path has the same cost.

    """
    moves = np.diff(nodes, axis = 0)
    result = [tuple(nodes[0])]
    k = 0
    while k < len(moves):
        if np.min(moves[k]) > 0:
            i, j = result[-1]
            result.append((i + int(moves[k][0]), j + int(moves[k][1])))
            k += 1
            continue
        end = k
        while end < len(moves) and np.min(moves[end]) == 0:
            end += 1
        flats, jumps = np.sum(moves[k:end], axis = 0)
        i, j = result[-1]
        result.extend((i + a, j) for a in range(1, int(flats) + 1))
        result.extend((i + int(flats), j + b) for b in range(1, int(jumps) + 1))
        k = end
    return np.array(result)

def _first_values(nodes: np.ndarray, last: int) -> np.ndarray:
    """φ at every column: the first row the node path reaches there."""
    order = np.lexsort((nodes[:, 1], nodes[:, 0]))
    ordered = nodes[order]
    columns, first = np.unique(ordered[:, 0], return_index = True)
    return np.interp(np.arange(last + 1), columns, ordered[first, 1])

def _node_values(curve: DiscreteCurve, shift: int = 0) -> np.ndarray:
    q = srvt(curve).q
    if curve.closed:
        q = np.roll(q, -shift, axis = 0)
        q = np.vstack([q, q[:1]])
    return q

def _prepare(
    c0: DiscreteCurve,
    c1: DiscreteCurve,
    samples: int | None) -> tuple[DiscreteCurve, DiscreteCurve, int]:
    """Returns the curves to match on a grid of `samples` and its stride.

    A grid whose cells are unions of the sample cells of the curves is
    matched in place with every `stride`-th sample as a node. Other grid
    sizes resample the curves.

    """
    if not c0.matches(c1):
        raise ValueError(
            'curves must share topology, sample count and dimension')
    if not samples or samples == c0.samples:
        return c0, c1, 1
    cells = c0.samples if c0.closed else c0.samples - 1
    wanted = samples if c0.closed else samples - 1
    if 0 < wanted < cells and cells % wanted == 0:
        return c0, c1, cells // wanted
    return resample(c0, samples), resample(c1, samples), 1

def _size(c: DiscreteCurve, stride: int) -> int:
    if c.closed:
        return c.samples // stride
    return (c.samples - 1) // stride + 1

def _match_seed(
    c0: DiscreteCurve,
    c1: DiscreteCurve,
    shift: int,
    limit: int,
    stride: int = 1,
    joint: bool = False) -> tuple[float, np.ndarray]:
    q0 = _node_values(c0)
    q1 = _node_values(c1, shift * stride)
    cost, nodes = _grid_path(q0, q1, c0.spacing, limit, joint, stride)
    logger.debug('grid match with shift %d: cost %.6e', shift, cost)
    return max(cost, 0.0), nodes

def _one_sided(
    c0: DiscreteCurve,
    c1: DiscreteCurve,
    shift: int,
    limit: int,
    stride: int = 1) -> MatchResult:
    cost, nodes = _match_seed(c0, c1, shift, limit, stride)
    last = nodes[-1, 0]
    step = c0.spacing * stride
    values = _first_values(nodes, last) * step
    if c0.closed:
        values = values[:-1] + shift * step
    else:
        # A jump in the last column still ends at φ(2π) = 2π.
        values[-1] = 2 * np.pi
    phi = Reparametrization(values = values, topology = c0.topology)
    return MatchResult(
        phi = phi,
        distance = math.sqrt(cost),
        collapse_intervals = collapse_report(phi).intervals,
        seed = phi.seed)

def _shifts(samples: int, seeds: int | None) -> list[int]:
    seeds = min(seeds or samples, samples)
    return sorted(set(
        int(s) % samples
        for s in np.round(np.linspace(0, samples, seeds, endpoint = False))))

def _best(results: Sequence[MatchResult]) -> MatchResult:
    return min(results, key = lambda result: result.distance)

def _over_shifts(
    c0: DiscreteCurve,
    c1: DiscreteCurve,
    shifts: Sequence[int],
    limit: int,
    stride: int = 1) -> list[MatchResult]:
    if configuration._THREADS > 1 and len(shifts) > 1:
        with concurrent.futures.ThreadPoolExecutor(
                max_workers = configuration._THREADS) as executor:
            return list(executor.map(
                lambda shift: _one_sided(c0, c1, shift, limit, stride), shifts))
    return [_one_sided(c0, c1, shift, limit, stride) for shift in shifts]

def dp_match(
    c0: DiscreteCurve,
    c1: DiscreteCurve,
    samples: int | None = None,
    slope_limit: int | None = None,
    seed: int | None = None) -> MatchResult:
    """Returns the on-grid φ minimizing ∫ |q₀ − √φ′ q₁∘φ|² dθ.

    Open curves are matched on a single grid. Closed curves are matched with
    the starting offset φ(0) = seed·Δθ, or through `match_closed` over every
    offset when `seed` is None. When the cells of the K-grid are unions of
    the sample cells of the curves, costs are summed over the samples, so
    refining such a grid never raises the matching distance.

    Args:
        c0: regular reference curve.
        c1: regular curve to reparametrize, on the grid of `c0`.
        samples: grid size K. Defaults to the sample count of the curves.
        slope_limit: bound on p, q in the slope set. Defaults to the
            configured limit.
        seed: integer offset for closed curves. Defaults to None.

    Raises:
        ValueError: if the curves are not regular or do not share a grid.

    Returns:
        MatchResult: best alignment found on the grid.

    """
    if c0.closed and seed is None:
        return match_closed(c0, c1, samples = samples, slope_limit = slope_limit)
    c0, c1, stride = _prepare(c0, c1, samples)
    limit = slope_limit or configuration._SLOPE_LIMIT
    return _one_sided(
        c0, c1, (seed or 0) % _size(c0, stride), limit, stride)

def match_closed(
    c0: DiscreteCurve,
    c1: DiscreteCurve,
    seeds: int | None = None,
    samples: int | None = None,
    slope_limit: int | None = None,
    coarse: int | None = None) -> MatchResult:
    """Returns the best one-sided match of closed curves over many offsets.

    With `coarse`, every offset is first tried on a grid `coarse` times
    smaller, and only the neighborhoods of the three best coarse offsets are
    searched on the full grid.

    Args:
        c0: regular closed reference curve.
        c1: regular closed curve to reparametrize.
        seeds: number of uniformly spaced offsets. Defaults to K.
        samples: grid size K. Defaults to the sample count of the curves.
        slope_limit: bound on p, q in the slope set. Defaults to the
            configured limit.
        coarse: coarsening factor of a first pass. Defaults to None.

    Raises:
        ValueError: if the curves are not closed, not regular or do not
            share a grid.

    Returns:
        MatchResult: alignment with the smallest distance; ties go to the
            smaller offset.

    """
    if not (c0.closed and c1.closed):
        raise ValueError('match_closed needs closed curves')
    c0, c1, stride = _prepare(c0, c1, samples)
    limit = slope_limit or configuration._SLOPE_LIMIT
    size = _size(c0, stride)
    shifts = _shifts(size, seeds)
    if coarse and coarse > 1 and size // coarse >= 8:
        small = size // coarse
        rough_c0, rough_c1, rough_stride = _prepare(c0, c1, small)
        rough = _over_shifts(
            rough_c0,
            rough_c1,
            _shifts(small, seeds),
            limit,
            rough_stride)
        ranked = sorted(rough, key = lambda result: result.distance)[:3]
        centers = [round(r.seed / spacing(size, CLOSED)) for r in ranked]
        shifts = sorted(set(
            (center + offset) % size
            for center in centers
            for offset in range(-coarse, coarse + 1)))
        logger.debug('coarse pass kept %d of %d offsets', len(shifts), size)
    return _best(_over_shifts(c0, c1, shifts, limit, stride))

def joint_match(
    c0: DiscreteCurve,
    c1: DiscreteCurve,
    samples: int | None = None,
    slope_limit: int | None = None,
    seeds: int | None = None) -> JointMatch:
    """Returns continuous φ₁, φ₂ minimizing the distance of c₀∘φ₁ and c₁∘φ₂.

    Runs the dynamic program of `dp_match` with every edge costed by the
    better of the two one-sided quadratures, which makes the result symmetric
    in its inputs and never worse than the one-sided match. Flat and jump
    moves become waiting segments of one of the two curves, so both maps are
    continuous functions of the arc parameter of the grid path.

    Args:
        c0: regular curve.
        c1: regular curve on the grid of `c0`.
        samples: grid size K. Defaults to the sample count of the curves.
        slope_limit: bound on p, q in the slope set. Defaults to the
            configured limit.
        seeds: number of offsets tried for closed curves. Defaults to K.

    Raises:
        ValueError: if the curves are not regular or do not share a grid.

    Returns:
        JointMatch: φ₁ for `c0`, φ₂ for `c1` and the distance.

    """
    c0, c1, stride = _prepare(c0, c1, samples)
    limit = slope_limit or configuration._SLOPE_LIMIT
    size = _size(c0, stride)
    shifts = _shifts(size, seeds) if c0.closed else [0]
    best = None
    for shift in shifts:
        cost, nodes = _match_seed(c0, c1, shift, limit, stride, joint = True)
        if best is None or cost < best[0]:
            best = (cost, nodes, shift)
    cost, nodes, shift = best
    step = spacing(size, c0.topology)
    lengths = np.concatenate(
        [[0.0], np.cumsum(np.sum(np.diff(nodes, axis = 0), axis = 1))])
    tau = grid(size, c0.topology) * lengths[-1] / (2 * np.pi)
    first = np.interp(tau, lengths, nodes[:, 0]) * step
    second = (np.interp(tau, lengths, nodes[:, 1]) + shift) * step
    return JointMatch(
        first = Reparametrization(values = first, topology = c0.topology),
        second = Reparametrization(values = second, topology = c0.topology),
        distance = math.sqrt(cost))

def collapse_report(
    phi: Reparametrization,
    epsilon: float | None = None) -> CollapseReport:
    """Returns the maximal runs of cells where φ′ < ε.

    Args:
        phi: reparametrization to inspect.
        epsilon: slope threshold. Defaults to the configured collapse
            threshold.

    Returns:
        CollapseReport: [start, stop) cell ranges and their parameter mass.

    """
    epsilon = configuration._COLLAPSE if epsilon is None else epsilon
    collapsed = phi.slopes < epsilon
    edges = np.diff(np.concatenate([[0], collapsed.astype(int), [0]]))
    starts = np.flatnonzero(edges == 1)
    stops = np.flatnonzero(edges == -1)
    mass = float(np.sum(collapsed)) * spacing(phi.samples, phi.topology)
    return CollapseReport(
        intervals = tuple((int(a), int(b)) for a, b in zip(starts, stops)),
        mass = mass)
