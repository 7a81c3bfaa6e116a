"""Tests for sampled curves and arc length calculus

To Do:

"""
from __future__ import annotations

import numpy as np
import pytest
import scipy.integrate

import immersa


def _rotation(angle: float) -> np.ndarray:
    return np.array([
        [np.cos(angle), -np.sin(angle)],
        [np.sin(angle), np.cos(angle)]])

def test_discrete_curve():
    curve = immersa.circle(samples = 16)
    assert curve.samples == 16
    assert curve.dimension == 2
    assert curve.closed
    assert curve.spacing == pytest.approx(2 * np.pi / 16)
    assert not curve.points.flags.writeable
    line = immersa.segment(samples = 9)
    assert line.theta[-1] == pytest.approx(2 * np.pi)
    assert not curve.matches(line)
    with pytest.raises(ValueError):
        immersa.DiscreteCurve(points = np.zeros((4, 2)))
    with pytest.raises(ValueError):
        immersa.DiscreteCurve(points = np.zeros((16, 4)))
    with pytest.raises(ValueError):
        immersa.DiscreteCurve(points = curve.points, topology = 'torus')
    bad = curve.points.copy()
    bad[3, 0] = np.nan
    with pytest.raises(ValueError):
        immersa.DiscreteCurve(points = bad)
    return

def test_path_of_curves():
    first = immersa.circle(samples = 16)
    second = immersa.circle(radius = 2.0, samples = 16)
    path = immersa.PathOfCurves(curves = (first, second), duration = 2.0)
    assert path.steps == 1
    assert path.dt == pytest.approx(2.0)
    assert path.points.shape == (2, 16, 2)
    assert len(path) == 2
    assert path[1] is second
    rebuilt = immersa.PathOfCurves.from_points(path.points)
    assert np.allclose(rebuilt.times, [0.0, 1.0])
    with pytest.raises(ValueError):
        immersa.PathOfCurves(curves = (first,))
    with pytest.raises(ValueError):
        immersa.PathOfCurves(curves = (first, immersa.circle(samples = 32)))
    return

def test_arc_calculus():
    unit = immersa.arc_calculus(immersa.circle(samples = 256))
    assert np.allclose(unit.speed, 1.0, atol = 1e-12)
    assert np.allclose(unit.curvature, 1.0, atol = 1e-10)
    assert unit.length == pytest.approx(2 * np.pi, abs = 1e-12)
    assert np.allclose(np.linalg.norm(unit.unit_tangent, axis = 1), 1.0)
    double = immersa.arc_calculus(immersa.circle(radius = 2.0, samples = 256))
    assert np.allclose(double.speed, 2.0, atol = 1e-12)
    assert np.allclose(double.curvature, 0.5, atol = 1e-10)
    assert double.length == pytest.approx(4 * np.pi, abs = 1e-11)
    expected, _ = scipy.integrate.quad(
        lambda t: np.hypot(2 * np.sin(t), np.cos(t)),
        0, 2 * np.pi,
        epsabs = 1e-13,
        epsrel = 1e-13)
    ellipse = immersa.arc_calculus(immersa.ellipse(samples = 256))
    assert abs(ellipse.length - expected) < 1e-8
    return

def test_ds_derivative():
    unit = immersa.circle(samples = 64)
    double = immersa.circle(radius = 2.0, samples = 64)
    theta = unit.theta
    for m in (1, 2, 3):
        h = np.column_stack([np.cos(m * theta), np.zeros_like(theta)])
        first = immersa.ds_derivative(unit, h).values
        assert np.allclose(first[:, 0], -m * np.sin(m * theta), atol = 1e-10)
        assert np.allclose(first[:, 1], 0.0, atol = 1e-12)
        scaled = immersa.ds_derivative(double, h).values
        assert np.allclose(scaled[:, 0], -m / 2 * np.sin(m * theta), atol = 1e-10)
        assert np.array_equal(immersa.ds_derivative(unit, h, 0).values, h)
    curve = immersa.random_curve(samples = 64, seed = 3)
    field = immersa.random_field(curve, seed = 4)
    twice = immersa.ds_derivative(curve, field, 2).values
    composed = immersa.ds_derivative(
        curve, immersa.ds_derivative(curve, field, 1), 1).values
    assert np.allclose(twice, composed, atol = 1e-8)
    with pytest.raises(ValueError):
        immersa.ds_derivative(curve, field, -1)
    return

def test_integrate_ds():
    double = immersa.circle(radius = 2.0, samples = 64)
    assert immersa.integrate_ds(double, 1.0) == pytest.approx(4 * np.pi)
    unit = immersa.circle(samples = 64)
    assert immersa.integrate_ds(unit, np.cos(unit.theta)**2) == pytest.approx(np.pi)
    assert immersa.integrate_ds(unit, 0.0) == 0.0
    curve = immersa.random_curve(samples = 128, seed = 1)
    length = immersa.integrate_ds(curve, 1.0)
    moved = curve.replace(curve.points @ _rotation(0.7).T + np.array([3.0, -1.0]))
    assert immersa.integrate_ds(moved, 1.0) == pytest.approx(length, abs = 1e-12)
    finer = immersa.resample(curve, 256)
    assert immersa.integrate_ds(finer, 1.0) == pytest.approx(length, abs = 1e-8)
    return

def test_validate_regular():
    report = immersa.validate_regular(immersa.circle(samples = 64))
    assert report
    assert report.min_speed == pytest.approx(1.0)
    assert report.indices == ()
    theta = immersa.curves.grid(65, immersa.OPEN)
    cusp = immersa.DiscreteCurve(
        points = np.column_stack([(theta - np.pi)**3, (theta - np.pi)**2]),
        topology = immersa.OPEN)
    report = immersa.validate_regular(cusp)
    assert not report
    assert 32 in report.indices
    tiny = immersa.circle(radius = 1e-9, samples = 32)
    report = immersa.validate_regular(tiny, 1e-6)
    assert len(report.indices) == 32
    with pytest.raises(ValueError):
        immersa.arc_calculus(cusp)
    return

def test_resample():
    coarse = immersa.circle(samples = 64)
    fine = immersa.resample(coarse, 128)
    assert np.max(np.abs(fine.points - immersa.circle(samples = 128).points)) < 1e-10
    assert immersa.resample(coarse, 64) is coarse
    line = immersa.segment(samples = 9)
    longer = immersa.resample(line, 17)
    assert np.max(np.abs(longer.points - immersa.segment(samples = 17).points)) < 1e-8
    with pytest.raises(ValueError):
        immersa.resample(coarse, 4)
    return


if __name__ == '__main__':
    test_discrete_curve()
    test_path_of_curves()
    test_arc_calculus()
    test_ds_derivative()
    test_integrate_ds()
    test_validate_regular()
    test_resample()
