"""Tests for reference curves and fields

To Do:

"""
from __future__ import annotations

import numpy as np
import pytest

import immersa


def test_reference_curves():
    shifted = immersa.circle(radius = 2.0, samples = 16, center = (1.0, -1.0))
    assert np.allclose(np.linalg.norm(shifted.points - [1.0, -1.0], axis = 1), 2.0)
    ellipse = immersa.ellipse(samples = 16)
    assert np.allclose(ellipse.points[0], [2.0, 0.0])
    line = immersa.segment(samples = 9, scale = 2.0)
    assert not line.closed
    assert line.points[-1, 0] == pytest.approx(4 * np.pi)
    reverse = immersa.segment(samples = 9, reverse = True)
    assert np.allclose(reverse.points[::-1], immersa.segment(samples = 9).points)
    return

def test_folded_ellipse():
    folded = immersa.folded_ellipse(samples = 256)
    assert immersa.validate_regular(folded)
    ellipse = immersa.ellipse(samples = 256)
    assert np.allclose(folded.points[:16], ellipse.points[:16], atol = 1e-6)
    tangent = immersa.arc_calculus(folded).unit_tangent
    against = np.sum(tangent * immersa.arc_calculus(ellipse).unit_tangent, axis = 1)
    assert np.min(against) < 0
    return

def test_random_curve():
    first = immersa.random_curve(samples = 64, seed = 3)
    again = immersa.random_curve(samples = 64, seed = 3)
    other = immersa.random_curve(samples = 64, seed = 4)
    assert np.array_equal(first.points, again.points)
    assert not np.array_equal(first.points, other.points)
    assert immersa.validate_regular(first)
    field = immersa.random_field(first, seed = 5)
    assert field.values.shape == (64, 2)
    line = immersa.segment(samples = 9)
    assert immersa.random_field(line).values.shape == (9, 2)
    return


if __name__ == '__main__':
    test_reference_curves()
    test_folded_ellipse()
    test_random_curve()
