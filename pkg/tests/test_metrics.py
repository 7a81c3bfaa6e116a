"""Tests for metrics on the space of curves

To Do:

"""
from __future__ import annotations

import numpy as np
import pytest

import immersa

SPECS = (
    immersa.L2(),
    immersa.Conformal(power = 2.0),
    immersa.CurvatureWeighted(strength = 1.0),
    immersa.ScaleInvariant(),
    immersa.Elastic(),
    immersa.Sobolev(coefficients = (1.0, 0.0, 1.0)),
    immersa.Sobolev(coefficients = (1.0, 2.0, 1.0)))
STRAIGHT_LENGTH = np.sqrt(2 * np.pi) * (2 / 3) * (2**1.5 - 1)


def _rotation(angle: float) -> np.ndarray:
    return np.array([
        [np.cos(angle), -np.sin(angle)],
        [np.sin(angle), np.cos(angle)]])

def _e1(theta: np.ndarray, m: int) -> np.ndarray:
    return np.column_stack([np.cos(m * theta), np.zeros_like(theta)])

def test_parse_metric():
    for text in (
            'l2',
            'almost:conformal:p=2',
            'almost:curv:A=1',
            'almost:curv:A=0.5',
            'almost:scaleinv',
            'elastic:a=1,b=0.5',
            'sobolev:1,0,1'):
        assert str(immersa.parse_metric(text)) == text
    assert immersa.parse_metric('Sobolev:1,2') == immersa.Sobolev((1.0, 2.0))
    assert isinstance(immersa.parse_metric('elastic'), immersa.Elastic)
    for text in (
            'h1',
            'sobolev:1,-1',
            'sobolev:1,0',
            'elastic:a=0,b=1',
            'almost:curv:x',
            'elastic:a=1,c=2',
            'almost:conformal:q=2',
            'almost:curv:a=1,p=2'):
        with pytest.raises(ValueError):
            immersa.parse_metric(text)
    return

def test_metric_eval():
    unit = immersa.circle(samples = 64)
    theta = unit.theta
    ones = np.tile([1.0, 0.0], (64, 1))
    assert immersa.metric_eval(immersa.L2(), unit, ones, ones) == pytest.approx(
        2 * np.pi)
    curvature = immersa.CurvatureWeighted(strength = 1.0)
    assert immersa.metric_eval(curvature, unit, ones, ones) == pytest.approx(4 * np.pi)
    scaleinv = immersa.metric_eval(immersa.ScaleInvariant(), unit, ones, ones)
    assert scaleinv == pytest.approx(((2 * np.pi)**-3 + 2 * np.pi) * 2 * np.pi)
    conformal = immersa.metric_eval(immersa.Conformal(power = 1.0), unit, ones, ones)
    assert conformal == pytest.approx(4 * np.pi**2)
    sobolev = immersa.Sobolev(coefficients = (1.0, 0.0, 1.0))
    for m in (1, 2, 3):
        h = _e1(theta, m)
        value = immersa.metric_eval(sobolev, unit, h, h)
        assert abs(value - np.pi * (1 + m**4)) < 1e-8
    curve = immersa.random_curve(samples = 64, seed = 11)
    h = immersa.random_field(curve, seed = 12)
    k = immersa.random_field(curve, seed = 13)
    for spec in SPECS:
        forward = immersa.metric_eval(spec, curve, h, k)
        backward = immersa.metric_eval(spec, curve, k, h)
        assert forward == pytest.approx(backward, rel = 1e-10)
        assert immersa.metric_eval(spec, curve, h, h) > 0
    elastic = immersa.metric_eval(immersa.Elastic(), curve, h, k)
    assert elastic == pytest.approx(immersa.elastic_metric(curve, h, k))
    with pytest.raises(ValueError):
        immersa.metric_eval(immersa.L2(), curve, np.zeros((32, 2)), h)
    with pytest.raises(TypeError):
        immersa.metric_eval(object(), curve, h, k)
    return

def test_metrics_are_invariant_under_rigid_motions():
    for seed in range(10):
        curve = immersa.random_curve(samples = 32, seed = seed)
        h = immersa.random_field(curve, seed = 50 + seed).values
        k = immersa.random_field(curve, seed = 80 + seed).values
        rotation = _rotation(0.3 + seed)
        shift = np.array([seed, -2.0 * seed])
        moved = curve.replace(curve.points @ rotation.T + shift)
        for spec in SPECS:
            before = immersa.metric_eval(spec, curve, h, k)
            after = immersa.metric_eval(spec, moved, h @ rotation.T, k @ rotation.T)
            assert after == pytest.approx(before, rel = 1e-9, abs = 1e-12)
    return

def test_metrics_are_invariant_under_reparametrization():
    phi = lambda theta: theta + 0.1 * np.sin(theta)
    curve = immersa.random_curve(samples = 16, seed = 21)
    h = immersa.random_field(curve, seed = 22).values
    k = immersa.random_field(curve, seed = 23).values
    for samples in (64, 128):
        theta = immersa.curves.grid(samples, immersa.CLOSED)
        fine = immersa.DiscreteCurve(
            points = immersa.curves.evaluate(curve.points, immersa.CLOSED, theta))
        composed = immersa.DiscreteCurve(
            points = immersa.curves.evaluate(curve.points, immersa.CLOSED, phi(theta)))
        fine_h, fine_k = (
            immersa.curves.evaluate(f, immersa.CLOSED, theta) for f in (h, k))
        moved_h, moved_k = (
            immersa.curves.evaluate(f, immersa.CLOSED, phi(theta)) for f in (h, k))
        for spec in SPECS:
            before = immersa.metric_eval(spec, fine, fine_h, fine_k)
            after = immersa.metric_eval(spec, composed, moved_h, moved_k)
            tolerance = 1e-3 if samples == 64 else 1e-6
            assert after == pytest.approx(before, rel = tolerance, abs = 1e-9)
    return

def test_metric_gradient():
    generator = np.random.default_rng(5)
    curve = immersa.random_curve(samples = 16, seed = 31)
    h = immersa.random_field(curve, seed = 32).values
    direction = generator.normal(size = curve.points.shape)
    step = 1e-6
    for spec in SPECS:
        value, gradient_c, gradient_h = immersa.metric_gradient(spec, curve, h)
        assert value == pytest.approx(immersa.metric_eval(spec, curve, h, h))
        forward = immersa.metric_eval(
            spec, curve.replace(curve.points + step * direction), h, h)
        backward = immersa.metric_eval(
            spec, curve.replace(curve.points - step * direction), h, h)
        expected = (forward - backward) / (2 * step)
        assert np.sum(gradient_c * direction) == pytest.approx(
            expected, rel = 1e-4, abs = 1e-7)
        forward = immersa.metric_eval(spec, curve, h + step * direction, h + step * direction)
        backward = immersa.metric_eval(spec, curve, h - step * direction, h - step * direction)
        expected = (forward - backward) / (2 * step)
        assert np.sum(gradient_h * direction) == pytest.approx(
            expected, rel = 1e-5, abs = 1e-7)
    return

def test_apply_operator_L():
    unit = immersa.circle(samples = 64)
    theta = unit.theta
    h = _e1(theta, 3)
    assert np.allclose(immersa.apply_operator_L(unit, (1.0,), h).values, h)
    for m in (1, 2, 3):
        h = _e1(theta, m)
        result = immersa.apply_operator_L(unit, (1.0, 1.0), h).values
        assert np.allclose(result, (1 + m**2) * h, atol = 1e-9)
    curve = immersa.random_curve(samples = 64, seed = 41)
    h = immersa.random_field(curve, seed = 42).values
    k = immersa.random_field(curve, seed = 43).values
    coefficients = (1.0, 2.0, 1.0)
    operator = immersa.apply_operator_L(curve, coefficients, h).values
    weights = immersa.curves.quadrature_weights(64, immersa.CLOSED)
    speeds = immersa.curves.speed(curve)
    strong = float(np.sum(weights * speeds * np.sum(operator * k, axis = 1)))
    weak = immersa.metric_eval(immersa.Sobolev(coefficients), curve, h, k)
    assert abs(strong - weak) < 1e-6 * abs(weak)
    form = immersa.sobolev_form(curve, coefficients, h)
    assert np.allclose(form, (weights * speeds)[:, None] * operator, atol = 1e-9)
    return

def test_normal_projection():
    unit = immersa.circle(samples = 64)
    theta = unit.theta
    tangent = np.column_stack([-np.sin(theta), np.cos(theta)])
    normal, along = immersa.normal_projection(unit, tangent)
    assert np.allclose(normal.values, 0.0, atol = 1e-12)
    assert np.allclose(along, 1.0)
    ones = np.tile([1.0, 0.0], (64, 1))
    normal, along = immersa.normal_projection(unit, ones)
    expected = np.column_stack([np.cos(theta)**2, np.sin(theta) * np.cos(theta)])
    assert np.allclose(normal.values, expected, atol = 1e-12)
    normal, _ = immersa.normal_projection(unit, unit.points)
    assert np.allclose(normal.values, unit.points, atol = 1e-12)
    curve = immersa.random_curve(samples = 32, seed = 3)
    h = immersa.random_field(curve, seed = 4).values
    normal, along = immersa.normal_projection(curve, h)
    tangent = immersa.arc_calculus(curve).unit_tangent
    assert np.allclose(normal.values + along[:, None] * tangent, h, atol = 1e-12)
    assert np.allclose(np.sum(normal.values * tangent, axis = 1), 0.0, atol = 1e-12)
    return

def test_path_functionals():
    unit = immersa.circle(samples = 64)
    still = immersa.PathOfCurves(curves = (unit,) * 5)
    assert immersa.path_functionals(immersa.L2(), still) == (0.0, 0.0)
    for spec in SPECS:
        for mode in ('full', 'normal'):
            assert immersa.path_functionals(spec, still, mode) == (0.0, 0.0)
    tiny = immersa.circle(radius = 1e-3, samples = 64)
    assert immersa.path_functionals(
        immersa.Elastic(), immersa.PathOfCurves(curves = (tiny,) * 3)) == (0.0, 0.0)
    point = immersa.DiscreteCurve(points = np.zeros((64, 2)))
    with pytest.raises(ValueError):
        immersa.path_functionals(immersa.L2(), immersa.PathOfCurves(curves = (point,) * 3))
    radii = np.linspace(1.0, 2.0, 65)
    path = immersa.PathOfCurves.from_points(np.stack([r * unit.points for r in radii]))
    full = immersa.path_functionals(immersa.L2(), path)
    assert full.length == pytest.approx(STRAIGHT_LENGTH, rel = 0.01)
    normal = immersa.path_functionals(immersa.L2(), path, 'normal')
    assert normal.length == pytest.approx(full.length, rel = 1e-9)
    for spec in SPECS:
        result = immersa.path_functionals(spec, path)
        assert result.length**2 <= result.energy * path.duration * (1 + 1e-12)
    with pytest.raises(ValueError):
        immersa.path_functionals(immersa.L2(), path, 'tangent')
    return

def test_sawtooth_path_stays_regular():
    path = immersa.sawtooth_path(1.0, 2.0, 16, steps = 32, samples = 512)
    for curve in path:
        assert immersa.validate_regular(curve).ok
        assert np.min(immersa.curves.speed(curve)) > 0.5
        radius = np.linalg.norm(curve.points, axis = 1)
        assert np.all(radius >= 1.0 - 1e-12)
        assert np.all(radius <= 2.0 + 1e-12)
    normal = immersa.path_functionals(immersa.L2(), path, 'normal')
    assert np.isfinite(normal.length)
    return

def test_sawtooth_path():
    path = immersa.sawtooth_path(1.0, 2.0, 4, steps = 8, samples = 128)
    assert path.steps == 8
    assert np.allclose(np.linalg.norm(path[0].points, axis = 1), 1.0)
    assert np.allclose(np.linalg.norm(path[-1].points, axis = 1), 2.0)
    lengths = {}
    for teeth in (4, 16, 64):
        path = immersa.sawtooth_path(1.0, 2.0, teeth, steps = 32)
        normal = immersa.path_functionals(immersa.L2(), path, 'normal')
        full = immersa.path_functionals(immersa.L2(), path, 'full')
        assert full.length >= 0.98 * STRAIGHT_LENGTH
        lengths[teeth] = normal.length
    assert lengths[4] > lengths[16] > lengths[64]
    assert lengths[64] < 0.5 * lengths[4]
    with pytest.raises(ValueError):
        immersa.sawtooth_path(2.0, 1.0, 4)
    with pytest.raises(ValueError):
        immersa.sawtooth_path(1.0, 2.0, 0)
    return


if __name__ == '__main__':
    test_parse_metric()
    test_metric_eval()
    test_metrics_are_invariant_under_rigid_motions()
    test_metrics_are_invariant_under_reparametrization()
    test_metric_gradient()
    test_apply_operator_L()
    test_normal_projection()
    test_path_functionals()
    test_sawtooth_path_stays_regular()
    test_sawtooth_path()
