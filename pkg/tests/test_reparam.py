"""Tests for reparametrizations and elastic matching

To Do:

"""
from __future__ import annotations

import numpy as np
import pytest

import immersa


def _open_curve(samples: int) -> immersa.DiscreteCurve:
    theta = immersa.curves.grid(samples, immersa.OPEN)
    return immersa.DiscreteCurve(
        points = np.column_stack([theta, 0.5 * np.sin(theta)]),
        topology = immersa.OPEN)

def _rotation(angle: float) -> np.ndarray:
    return np.array([
        [np.cos(angle), -np.sin(angle)],
        [np.sin(angle), np.cos(angle)]])

def test_reparametrization():
    identity = immersa.Reparametrization.identity(17)
    assert identity.strictly_monotone
    assert np.allclose(identity.slopes, 1.0)
    assert identity(np.pi) == pytest.approx(np.pi)
    closed = immersa.Reparametrization(
        values = immersa.curves.grid(16, immersa.CLOSED) + 1.0,
        topology = immersa.CLOSED)
    assert closed.seed == pytest.approx(1.0)
    assert closed.slopes.size == 16
    assert closed(2 * np.pi + 0.5) == pytest.approx(2 * np.pi + 1.5)
    with pytest.raises(ValueError):
        immersa.Reparametrization(values = [0.0, 2.0, 1.0, 2 * np.pi])
    with pytest.raises(ValueError):
        immersa.Reparametrization(values = [0.0, 1.0, 2.0, 3.0])
    with pytest.raises(ValueError):
        immersa.Reparametrization(
            values = [0.0, 1.0, 2.0, 7.0],
            topology = immersa.CLOSED)
    return

def test_apply_reparam():
    curve = immersa.random_curve(samples = 32, seed = 1)
    identity = immersa.Reparametrization.identity(32, immersa.CLOSED)
    assert np.allclose(immersa.apply_reparam(curve, identity).points, curve.points, atol = 1e-12)
    unit = immersa.circle(samples = 64)
    quarter = immersa.Reparametrization(
        values = unit.theta + np.pi / 2,
        topology = immersa.CLOSED)
    rotated = immersa.apply_reparam(unit, quarter)
    assert np.allclose(rotated.points, np.roll(unit.points, -16, axis = 0), atol = 1e-12)
    line = immersa.segment(samples = 33)
    theta = line.theta
    square = immersa.Reparametrization(values = theta**2 / (2 * np.pi))
    moved = immersa.apply_reparam(line, square)
    assert np.allclose(moved.points[:, 0], theta**2 / (2 * np.pi), atol = 1e-10)
    stalled = immersa.Reparametrization(
        values = np.minimum(theta, np.pi) + np.maximum(theta - 1.5 * np.pi, 0) * 2)
    with pytest.raises(ValueError):
        immersa.apply_reparam(line, stalled)
    with pytest.raises(ValueError):
        immersa.apply_reparam(unit, square)
    return

def test_srvt_is_equivariant():
    curve = immersa.random_curve(samples = 128, seed = 4)
    theta = curve.theta
    phi = immersa.Reparametrization(
        values = theta + 0.1 * np.sin(theta),
        topology = immersa.CLOSED)
    moved = immersa.srvt(immersa.apply_reparam(curve, phi)).q
    q = immersa.srvt(curve).q
    expected = np.sqrt(1 + 0.1 * np.cos(theta))[:, None] * immersa.curves.evaluate(
        q, immersa.CLOSED, phi.values)
    assert np.allclose(moved, expected, atol = 1e-8)
    return

def test_pointwise_optimal_scale():
    assert immersa.pointwise_optimal_scale([1.0, 0.0], [1.0, 0.0]) == 1.0
    assert immersa.pointwise_optimal_scale([1.0, 0.0], [-1.0, 0.0]) == 0.0
    assert immersa.pointwise_optimal_scale([2.0, 0.0], [0.0, 1.0]) == 0.0
    assert immersa.pointwise_optimal_scale([2.0, 0.0], [1.0, 0.0]) == 2.0
    many = immersa.pointwise_optimal_scale(
        np.array([[1.0, 1.0], [1.0, 0.0]]),
        np.array([[2.0, 0.0], [-1.0, 1.0]]))
    assert np.allclose(many, [0.5, 0.0])
    rng = np.random.default_rng(5)
    q0, q1 = rng.normal(size = (2, 50, 3))
    base = immersa.pointwise_optimal_scale(q0, q1)
    for factor in (0.1, 2.0, 7.5):
        assert np.allclose(immersa.pointwise_optimal_scale(factor * q0, q1), factor * base)
        assert np.allclose(immersa.pointwise_optimal_scale(q0, factor * q1), base / factor)
    residual = np.sum((q0 - base[:, None] * q1)**2, axis = 1)
    for trial in (0.5 * base, base + 0.1, 2.0 * base):
        assert np.all(residual <= np.sum((q0 - trial[:, None] * q1)**2, axis = 1) + 1e-12)
    with pytest.raises(ValueError):
        immersa.pointwise_optimal_scale([1.0, 0.0], [0.0, 0.0])
    return

def test_dp_match():
    curve = _open_curve(65)
    result = immersa.dp_match(curve, curve)
    assert result.distance < 1e-6
    assert np.allclose(result.phi.values, curve.theta)
    assert result.collapse_intervals == ()
    theta = curve.theta
    knots = np.array([0.0, 40.0, 64.0]) * curve.spacing
    images = np.array([0.0, 32.0, 64.0]) * curve.spacing
    warp = lambda x: np.interp(x, knots, images)
    warped = immersa.apply_reparam(
        curve, immersa.Reparametrization(values = warp(theta)))
    result = immersa.dp_match(curve, warped)
    scale = np.sqrt(immersa.arc_calculus(curve).length)
    assert result.distance < 0.02 * scale
    assert np.max(np.abs(warp(result.phi.values) - theta)) <= 3 * curve.spacing
    start = immersa.segment(samples = 256)
    reverse = immersa.segment(samples = 256, reverse = True)
    result = immersa.dp_match(start, reverse)
    assert result.distance == pytest.approx(2 * np.sqrt(np.pi), rel = 0.05)
    report = immersa.collapse_report(result.phi)
    assert report.mass >= 0.9 * 2 * np.pi
    with pytest.raises(ValueError):
        immersa.dp_match(curve, start)
    return

def test_dp_match_reversed_collapse():
    for samples in (64, 256):
        start = immersa.segment(samples = samples)
        reverse = immersa.segment(samples = samples, reverse = True)
        result = immersa.dp_match(start, reverse)
        report = immersa.collapse_report(result.phi)
        assert report.mass >= 0.9 * 2 * np.pi
        assert len(result.collapse_intervals) == 1
        assert result.distance == pytest.approx(2 * np.sqrt(np.pi), rel = 0.05)
    return

def test_dp_match_refinement():
    first = _open_curve(129)
    theta = first.theta
    second = immersa.DiscreteCurve(
        points = np.column_stack([theta, 0.8 * np.cos(1.5 * theta)]),
        topology = immersa.OPEN)
    distances = [
        immersa.dp_match(first, second, samples = samples).distance
        for samples in (33, 65, 129)]
    assert distances[1] <= distances[0] * (1 + 1e-9)
    assert distances[2] <= distances[1] * (1 + 1e-9)
    assert immersa.dp_match(first, second, samples = 33).phi.samples == 33
    closed = immersa.random_curve(samples = 64, seed = 3)
    other = immersa.random_curve(samples = 64, seed = 4)
    coarse = immersa.dp_match(closed, other, samples = 16, seed = 0).distance
    fine = immersa.dp_match(closed, other, samples = 32, seed = 0).distance
    assert fine <= coarse * (1 + 1e-9)
    return

def test_match_closed():
    curve = immersa.random_curve(samples = 32, seed = 6)
    result = immersa.match_closed(curve, curve)
    assert result.distance < 1e-6
    rolled = curve.replace(np.roll(curve.points, -5, axis = 0))
    result = immersa.match_closed(curve, rolled)
    assert result.distance < 1e-3
    expected = (32 - 5) * curve.spacing
    assert abs(result.seed - expected) <= curve.spacing + 1e-12
    unit = immersa.circle(samples = 32)
    double = immersa.circle(radius = 2.0, samples = 32)
    result = immersa.match_closed(unit, double, seeds = 8)
    assert result.distance == pytest.approx(
        immersa.srv_distance(unit, double), rel = 1e-6)
    other = immersa.random_curve(samples = 32, seed = 7)
    rotation = _rotation(1.1)
    before = immersa.match_closed(curve, other, seeds = 8).distance
    after = immersa.match_closed(
        curve.replace(curve.points @ rotation.T + 2.0),
        other.replace(other.points @ rotation.T + 2.0),
        seeds = 8).distance
    assert after == pytest.approx(before, abs = 1e-6)
    with pytest.raises(ValueError):
        immersa.match_closed(_open_curve(32), _open_curve(32))
    return

def test_match_closed_coarse():
    curve = immersa.random_curve(samples = 64, seed = 8)
    rolled = curve.replace(np.roll(curve.points, -8, axis = 0))
    result = immersa.match_closed(curve, rolled, coarse = 4)
    assert result.distance < 1e-3
    assert abs(result.seed - 56 * curve.spacing) <= curve.spacing + 1e-12
    return

def test_joint_match():
    curve = _open_curve(33)
    result = immersa.joint_match(curve, curve)
    assert result.distance < 1e-6
    assert np.allclose(result.first.values, curve.theta)
    assert np.allclose(result.second.values, curve.theta)
    start = immersa.segment(samples = 128)
    reverse = immersa.segment(samples = 128, reverse = True)
    joint = immersa.joint_match(start, reverse)
    assert joint.distance == pytest.approx(2 * np.sqrt(np.pi), rel = 0.05)
    for seed in range(10):
        first = immersa.random_curve(samples = 32, seed = seed)
        second = immersa.random_curve(samples = 32, seed = 10 + seed)
        forward = immersa.joint_match(first, second, seeds = 8)
        backward = immersa.joint_match(second, first, seeds = 8)
        assert forward.distance == pytest.approx(backward.distance, rel = 0.005)
        one_sided = immersa.match_closed(first, second, seeds = 8)
        assert forward.distance <= one_sided.distance + 1e-6
        reverse_sided = immersa.match_closed(second, first, seeds = 8)
        assert one_sided.distance == pytest.approx(reverse_sided.distance, rel = 0.02)
    return

def test_collapse_report():
    identity = immersa.Reparametrization.identity(65)
    assert not immersa.collapse_report(identity)
    theta = identity.theta
    stalled = np.where(
        theta < np.pi,
        theta,
        np.where(theta <= 1.5 * np.pi, np.pi, np.pi + 2 * (theta - 1.5 * np.pi)))
    report = immersa.collapse_report(immersa.Reparametrization(values = stalled))
    assert report.intervals == ((32, 48),)
    assert report.mass == pytest.approx(np.pi / 2)
    ellipse = immersa.ellipse(samples = 128)
    folded = immersa.folded_ellipse(samples = 128)
    result = immersa.dp_match(folded, ellipse, seed = 0)
    assert result.collapse_intervals
    return


if __name__ == '__main__':
    test_reparametrization()
    test_apply_reparam()
    test_srvt_is_equivariant()
    test_pointwise_optimal_scale()
    test_dp_match()
    test_dp_match_reversed_collapse()
    test_dp_match_refinement()
    test_match_closed()
    test_match_closed_coarse()
    test_joint_match()
    test_collapse_report()
