"""
Pruebas del modelo gaussiano y de la cuantización a 8 bits
"""

import math

import numpy as np
import pytest

from fixmap.density import (GaussianSplatParams, accumulate_fixation_map, gaussian_splat,
                            quantize_map)
from fixmap.gaze import FrameFixation


def _fix(x, y, subject=0, frame=0):
    return FrameFixation(frame_index=frame, x=x, y=y, subject_id=subject)


def _brute_force_splat(row, col, p, dims):
    field = np.zeros(dims)
    for r in range(dims[0]):
        for c in range(dims[1]):
            d2 = (r - row) ** 2 + (c - col) ** 2
            if d2 <= p.window_w ** 2:
                field[r, c] = p.alpha / (math.pi * p.window_w) * math.exp(-p.beta * d2 / p.window_w ** 2)
    return field


class TestGaussianSplat:

    def test_peak_at_center(self):
        field = gaussian_splat(_fix(20.0, 15.0), GaussianSplatParams(), (30, 40))
        assert np.unravel_index(np.argmax(field), field.shape) == (15, 20)

    def test_pointwise_values(self):
        p = GaussianSplatParams(window_w=35, alpha=1.0, beta=1.0)
        field = gaussian_splat(_fix(50.0, 50.0), p, (100, 100))
        assert field[50, 50] == pytest.approx(1.0 / (35 * math.pi), rel=1e-12)
        assert field[85, 50] == pytest.approx(math.exp(-1.0) / (35 * math.pi), rel=1e-12)
        assert field[86, 50] == 0.0

    def test_far_outside_frame_is_empty(self):
        p = GaussianSplatParams(window_w=5)
        field = gaussian_splat(_fix(-20.0, 3.0), p, (10, 10))
        assert not field.any()

    def test_clipped_support_matches_brute_force(self):
        p = GaussianSplatParams(window_w=6, alpha=2.0, beta=3.0)
        field = gaussian_splat(_fix(-2.0, 4.0), p, (12, 9))
        np.testing.assert_allclose(field, _brute_force_splat(4, -2, p, (12, 9)), rtol=1e-12)

    def test_strictly_decreasing_with_distance(self):
        p = GaussianSplatParams(window_w=10)
        field = gaussian_splat(_fix(15.0, 15.0), p, (31, 31))
        row = field[15, 15:26]
        assert np.all(np.diff(row) < 0)

    def test_invalid_params(self):
        with pytest.raises(ValueError):
            GaussianSplatParams(window_w=0)
        with pytest.raises(ValueError):
            GaussianSplatParams(beta=0.0)

    def test_invalid_dims(self):
        with pytest.raises(ValueError):
            gaussian_splat(_fix(0.0, 0.0), GaussianSplatParams(), (0, 5))


class TestAccumulate:

    def test_empty_list_gives_zeros(self):
        field = accumulate_fixation_map([], GaussianSplatParams(), (8, 8))
        assert field.shape == (8, 8)
        assert not field.any()

    def test_single_fixation_equals_splat(self):
        p = GaussianSplatParams()
        fx = _fix(10.0, 12.0)
        np.testing.assert_array_equal(accumulate_fixation_map([fx], p, (64, 64)),
                                      gaussian_splat(fx, p, (64, 64)))

    def test_two_identical_fixations_double(self):
        p = GaussianSplatParams()
        fx = _fix(10.0, 12.0)
        single = gaussian_splat(fx, p, (64, 64))
        np.testing.assert_array_equal(accumulate_fixation_map([fx, fx], p, (64, 64)), 2 * single)

    def test_three_fixations_match_pixel_loop(self):
        p = GaussianSplatParams(window_w=12, alpha=1.0, beta=3.0)
        fixations = [_fix(5.0, 7.0, 0), _fix(40.2, 33.7, 1), _fix(60.5, 2.4, 2)]
        expected = sum(_brute_force_splat(int(math.floor(f.y + 0.5)), int(math.floor(f.x + 0.5)), p, (64, 64))
                       for f in fixations)
        np.testing.assert_allclose(accumulate_fixation_map(fixations, p, (64, 64)), expected,
                                   rtol=1e-12, atol=1e-15)

    def test_union_is_sum(self):
        p = GaussianSplatParams(window_w=8)
        rng = np.random.default_rng(3)
        fixations = [_fix(float(x), float(y), s) for s, (x, y) in enumerate(rng.uniform(0, 32, (6, 2)))]
        a, b = fixations[:3], fixations[3:]
        whole = accumulate_fixation_map(fixations, p, (32, 32))
        parts = accumulate_fixation_map(a, p, (32, 32)) + accumulate_fixation_map(b, p, (32, 32))
        np.testing.assert_allclose(whole, parts, rtol=1e-12, atol=1e-15)

    def test_mixed_frames_rejected(self):
        with pytest.raises(ValueError):
            accumulate_fixation_map([_fix(1.0, 1.0, frame=0), _fix(1.0, 1.0, frame=1)],
                                    GaussianSplatParams(), (8, 8))


class TestQuantize:

    def test_zero_field(self):
        assert not quantize_map(np.zeros((4, 4))).any()

    def test_endpoints(self):
        out = quantize_map(np.array([[0.0, 1.0]]))
        assert out.dtype == np.uint8
        assert out.tolist() == [[0, 255]]

    def test_half_rounds_up(self):
        assert quantize_map(np.array([[0.0, 0.5, 1.0]])).tolist() == [[0, 128, 255]]

    def test_monotone(self):
        rng = np.random.default_rng(0)
        field = rng.normal(size=(16, 16))
        out = quantize_map(field)
        order = np.argsort(field, axis=None)
        assert np.all(np.diff(out.ravel()[order].astype(int)) >= 0)
