"""Tests for converting curves to and from files

To Do:

"""
from __future__ import annotations

import json
import pathlib

import numpy as np
import pytest

import immersa


def test_dictify():
    unit = immersa.circle(samples = 8)
    data = immersa.dictify(unit)
    assert data['topology'] == 'closed'
    assert len(data['points']) == 8
    srv = immersa.dictify(immersa.srvt(unit))
    assert srv['srv'] is True
    assert srv['basepoint'] == [1.0, 0.0]
    path = immersa.PathOfCurves(curves = (unit, unit), duration = 2.0)
    data = immersa.dictify(path)
    assert [c['time'] for c in data['curves']] == [0.0, 2.0]
    phi = immersa.Reparametrization.identity(9)
    assert immersa.dictify(phi)['topology'] == 'open'
    report = immersa.completeness_probe('l2_collapse', samples = 16)
    data = immersa.dictify(report)
    assert 'final' not in data
    assert data['blew_up'] is True
    json.dumps(data)
    with pytest.raises(TypeError):
        immersa.dictify(object())
    return

def test_curvify():
    curve = immersa.curvify({'points': [[np.cos(t), np.sin(t)] for t in
        np.linspace(0, 2 * np.pi, 8, endpoint = False)]})
    assert curve.closed
    assert curve.samples == 8
    finer = immersa.curvify(immersa.dictify(curve), samples = 16)
    assert finer.samples == 16
    srv = immersa.curvify(immersa.dictify(immersa.srvt(curve)))
    assert isinstance(srv, immersa.SrvCurve)
    for data in (
            [1, 2, 3],
            {'points': 'abc'},
            {'points': [[0.0, 'x']] * 8},
            {'points': [[0.0, 0.0]] * 8, 'topology': 'torus'},
            {'srv': True, 'points': [[1.0, 0.0]] * 8}):
        with pytest.raises(ValueError):
            immersa.curvify(data)
    return

def test_pathlibify():
    assert immersa.pathlibify('a/b') == pathlib.Path('a/b')
    path = pathlib.Path('c')
    assert immersa.pathlibify(path) is path
    with pytest.raises(TypeError):
        immersa.pathlibify(3)
    return

def test_load_and_save(tmp_path):
    curve = immersa.random_curve(samples = 32, seed = 2)
    target = tmp_path / 'curve.json'
    immersa.save_json(curve, target)
    loaded = immersa.load_curve(target, samples = 0)
    assert np.array_equal(loaded.points, curve.points)
    assert immersa.load_curve(str(target), samples = 64).samples == 64
    first = target.read_bytes()
    immersa.save_json(curve, target)
    assert target.read_bytes() == first
    broken = tmp_path / 'broken.json'
    broken.write_text('{"points": ', encoding = 'utf-8')
    with pytest.raises(ValueError):
        immersa.load_curve(broken)
    with pytest.raises(OSError):
        immersa.load_curve(tmp_path / 'missing.json')
    table = tmp_path / 'table.csv'
    immersa.save_csv([(4, np.float64(0.5)), (16, 0.25)], table, header = ('a', 'b'))
    assert table.read_text(encoding = 'utf-8') == 'a,b\n4,0.5\n16,0.25\n'
    drawing = tmp_path / 'curves.svg'
    immersa.save_svg([curve, immersa.segment(samples = 9)], drawing)
    text = drawing.read_text(encoding = 'utf-8')
    assert text.count('<polyline') == 2
    with pytest.raises(ValueError):
        immersa.save_svg([], drawing)
    return


if __name__ == '__main__':
    test_dictify()
    test_curvify()
    test_pathlibify()
