"""Functions that convert `immersa` objects to and from files

Curve files are JSON objects {"topology": "closed" | "open", "points":
[[x, y], ...]}. SRV curves add "srv": true and a "basepoint". Floats are
written with Python's shortest round-trip repr, so output is byte-identical
across runs and independent of the locale.

Contents:
    dictify: converts an `immersa` object to a JSON-ready dict.
    curvify: converts a parsed curve file to a DiscreteCurve or SrvCurve.
    pathlibify: converts to or validates a pathlib.Path.
    load_curve: reads a curve file, resampled to a sample count.
    save_json: writes the dictified form of an object.
    save_csv: writes rows of values with an optional header.
    save_svg: draws curves as polylines in a static SVG file.

To Do:


"""
from __future__ import annotations

import csv
import dataclasses
import functools
import json
import pathlib
from collections.abc import Mapping
from typing import TYPE_CHECKING, Any

import miller
import numpy as np
import svgwrite

from . import configuration
from .curves import CLOSED, DiscreteCurve, PathOfCurves, resample
from .geodesics import BlowupReport
from .reparam import CollapseReport, JointMatch, MatchResult, Reparametrization
from .srv import SrvCurve, SrvGeodesic

if TYPE_CHECKING:
    from collections.abc import Iterable, Sequence

# Stroke colors cycled over the curves of an SVG file.
PALETTE: tuple[str, ...] = (
    '#1b9e77', '#d95f02', '#7570b3', '#e7298a', '#66a61e', '#e6ab02')


""" Serialization """

@functools.singledispatch
def dictify(item: Any, /) -> dict[str, Any]:
    """Converts `item` to a dict of JSON types.

    Args:
        item: an `immersa` object.

    Raises:
        TypeError: if `item` is a type that is not registered.

    Returns:
        dict[str, Any]: derived from `item`.

    """
    raise TypeError(
        f'item cannot be converted because it is an unsupported type: '
        f'{type(item).__name__}')

@dictify.register
def _(item: DiscreteCurve, /) -> dict[str, Any]:
    return {'topology': item.topology, 'points': item.points.tolist()}

@dictify.register
def _(item: SrvCurve, /) -> dict[str, Any]:
    return {
        'srv': True,
        'topology': item.topology,
        'basepoint': item.basepoint.tolist(),
        'points': item.q.tolist()}

@dictify.register
def _(item: PathOfCurves, /) -> dict[str, Any]:
    return {
        'duration': item.duration,
        'curves': [
            {'time': float(t), **dictify(c)}
            for t, c in zip(item.times, item.curves)]}

@dictify.register
def _(item: SrvGeodesic, /) -> dict[str, Any]:
    return {
        'length': item.length,
        'projected': item.projected,
        'singularities': [list(s) for s in item.singularities],
        **dictify(item.path)}

@dictify.register
def _(item: Reparametrization, /) -> dict[str, Any]:
    return {'topology': item.topology, 'values': item.values.tolist()}

@dictify.register
def _(item: CollapseReport, /) -> dict[str, Any]:
    return {'intervals': [list(i) for i in item.intervals], 'mass': item.mass}

@dictify.register
def _(item: MatchResult, /) -> dict[str, Any]:
    return {
        'distance': item.distance,
        'seed': item.seed,
        'collapse_intervals': [list(i) for i in item.collapse_intervals],
        'phi': dictify(item.phi)}

@dictify.register
def _(item: JointMatch, /) -> dict[str, Any]:
    return {
        'distance': item.distance,
        'first': dictify(item.first),
        'second': dictify(item.second)}

@dictify.register
def _(item: BlowupReport, /) -> dict[str, Any]:
    return {
        field.name: _plain(getattr(item, field.name))
        for field in dataclasses.fields(item)
        if field.name != 'final'}

def _plain(value: Any) -> Any:
    if isinstance(value, (np.floating, np.integer, np.bool_)):
        return value.item()
    return value

@functools.singledispatch
def pathlibify(item: str | pathlib.Path, /) -> pathlib.Path:
    """Converts `item` to a pathlib.Path.

    Args:
        item: either a str path or a pathlib.Path.

    Raises:
        TypeError: if `item` is neither a str nor a pathlib.Path.

    Returns:
        pathlib.Path: derived from `item`.

    """
    if isinstance(item, str):
        return pathlib.Path(item)
    elif isinstance(item, pathlib.Path):
        return item
    else:
        raise TypeError('item must be str or pathlib.Path type')


""" Parsing """

def curvify(
    data: Mapping[str, Any],
    samples: int | None = None) -> DiscreteCurve | SrvCurve:
    """Converts a parsed curve file to a curve.

    Args:
        data: mapping with 'points' and optionally 'topology', 'srv' and
            'basepoint'.
        samples: sample count to resample plain curves to. Defaults to None,
            which keeps the file's samples.

    Raises:
        ValueError: if `data` does not follow the curve schema.

    Returns:
        DiscreteCurve | SrvCurve: the described curve.

    """
    if not isinstance(data, Mapping):
        raise ValueError('a curve file must hold a JSON object')
    points = data.get('points')
    if not miller.is_sequence(item = type(points)) or not all(
            miller.is_sequence(item = type(p)) for p in points):
        raise ValueError("'points' must be a list of coordinate lists")
    topology = data.get('topology', CLOSED)
    try:
        values = np.array(points, dtype = float)
    except (TypeError, ValueError) as error:
        raise ValueError(f'points are not numeric: {error}') from error
    if data.get('srv', False):
        basepoint = data.get('basepoint')
        if not miller.is_sequence(item = type(basepoint)):
            raise ValueError("SRV curves need a 'basepoint' list")
        return SrvCurve(q = values, basepoint = basepoint, topology = topology)
    curve = DiscreteCurve(points = values, topology = topology)
    if samples:
        curve = resample(curve, samples)
    return curve

def load_curve(
    path: str | pathlib.Path,
    samples: int | None = None) -> DiscreteCurve | SrvCurve:
    """Reads a curve file.

    Args:
        path: location of the JSON file.
        samples: sample count of the returned curve. Defaults to the
            configured N. 0 keeps the samples of the file.

    Raises:
        OSError: if the file cannot be read.
        ValueError: if the file is not JSON or breaks the curve schema.

    Returns:
        DiscreteCurve | SrvCurve: the stored curve.

    """
    text = pathlibify(path).read_text(encoding = 'utf-8')
    if samples is None:
        samples = configuration._SAMPLES
    return curvify(json.loads(text), samples)


""" Output """

def save_json(item: Any, path: str | pathlib.Path) -> None:
    """Writes `item` as indented JSON.

    Args:
        item: an object `dictify` accepts, or a dict of JSON types.
        path: destination.

    """
    data = item if isinstance(item, dict) else dictify(item)
    text = json.dumps(data, indent = 2) + '\n'
    pathlibify(path).write_text(text, encoding = 'utf-8')
    return

def save_csv(
    rows: Iterable[Sequence[Any]],
    path: str | pathlib.Path,
    header: Sequence[str] | None = None) -> None:
    """Writes `rows` as comma separated values.

    Args:
        rows: rows of numbers or strings.
        path: destination.
        header: optional first row. Defaults to None.

    """
    with pathlibify(path).open('w', newline = '', encoding = 'utf-8') as stream:
        writer = csv.writer(stream, lineterminator = '\n')
        if header:
            writer.writerow(header)
        for row in rows:
            writer.writerow([_plain(value) for value in row])
    return

def save_svg(
    curves: Iterable[DiscreteCurve],
    path: str | pathlib.Path,
    size: int = 480,
    margin: float = 0.05) -> None:
    """Draws planar curves as polylines in a square SVG file.

    All curves share one scale, so a path of curves is drawn as overlaid
    snapshots. Closed curves are drawn closed. 3-D curves are projected onto
    their first two coordinates.

    Args:
        curves: curves to draw.
        path: destination.
        size: width and height in pixels. Defaults to 480.
        margin: blank border as a fraction of `size`. Defaults to 0.05.

    Raises:
        ValueError: if `curves` is empty.

    """
    curves = list(curves)
    if not curves:
        raise ValueError('there are no curves to draw')
    stacked = np.vstack([c.points[:, :2] for c in curves])
    low, high = stacked.min(axis = 0), stacked.max(axis = 0)
    extent = float(np.max(high - low)) or 1.0
    scale = size * (1 - 2 * margin) / extent
    drawing = svgwrite.Drawing(
        str(pathlibify(path)),
        profile = 'tiny',
        size = (size, size))
    group = drawing.g(id = 'curves', fill = 'none', stroke_width = 1.5)
    for index, curve in enumerate(curves):
        points = curve.points[:, :2]
        if curve.closed:
            points = np.vstack([points, points[:1]])
        x = size * margin + (points[:, 0] - low[0]) * scale
        y = size * (1 - margin) - (points[:, 1] - low[1]) * scale
        group.add(drawing.polyline(
            points = [(float(a), float(b)) for a, b in zip(x, y)],
            stroke = PALETTE[index % len(PALETTE)],
            stroke_linejoin = 'round'))
    drawing.add(group)
    drawing.save()
    return
