# -*- coding: utf-8 -*-
"""
test_imagecore.py - Tests for pixel and mask numerics
=====================================================

Tests for:
1. Raster validation and grayscale conversion
2. Masked statistics and mask algebra
3. Connected components against a flood-fill oracle
4. SSIM and smooth-L1 distances
5. HSV conversion
6. Sobel gradients and the Canny detector
"""

import os
import sys
import unittest
from collections import deque

import numpy as np
from numpy.testing import assert_allclose, assert_array_equal

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from foalkit.imagecore import (
    BadThresholdsError, ChannelMismatchError, EmptyMaskError, InvalidImageError,
    ShapeMismatchError,
    as_image, canny_edges, connected_components, dilate_mask, hsv_to_rgb,
    mask_intersection, mask_union, masked_mean, masked_min, popcount, rgb_to_hsv,
    smooth_l1_loss, sobel_gradient, ssim_loss, to_grayscale,
)
from foalkit.foalconf import SSIM_K1


def flood_fill_components(m):
    """Brute-force 8-connected components as a set of frozensets of pixels"""
    h, w = m.shape
    seen = np.zeros_like(m, dtype=bool)
    out = set()
    for r in range(h):
        for c in range(w):
            if not m[r, c] or seen[r, c]:
                continue
            pixels = []
            queue = deque([(r, c)])
            seen[r, c] = True
            while queue:
                y, x = queue.popleft()
                pixels.append((y, x))
                for dy in (-1, 0, 1):
                    for dx in (-1, 0, 1):
                        ny, nx = y + dy, x + dx
                        if 0 <= ny < h and 0 <= nx < w and m[ny, nx] and not seen[ny, nx]:
                            seen[ny, nx] = True
                            queue.append((ny, nx))
            out.add(frozenset(pixels))
    return out


class TestValidation(unittest.TestCase):
    """Raster validation and grayscale"""

    def test_promotes_2d_input(self):
        """A 2-D array becomes a single-channel image"""
        img = as_image(np.zeros((4, 5)))
        self.assertEqual(img.shape, (4, 5, 1))
        self.assertEqual(img.dtype, np.float64)

    def test_rejects_out_of_range(self):
        """Values outside [0, 1] are invalid"""
        with self.assertRaises(InvalidImageError):
            as_image(np.full((2, 2), 1.5))

    def test_rejects_bad_channel_count(self):
        """Only 1 or 3 channels are images"""
        with self.assertRaises(InvalidImageError):
            as_image(np.zeros((2, 2, 4)))

    def test_grayscale_weights(self):
        """White maps to 1, pure red to its luma weight"""
        img = np.zeros((1, 2, 3))
        img[0, 0] = (1, 1, 1)
        img[0, 1] = (1, 0, 0)
        gray = to_grayscale(img)
        self.assertAlmostEqual(gray[0, 0, 0], 1.0, places=12)
        self.assertAlmostEqual(gray[0, 1, 0], 0.299, places=12)

    def test_grayscale_single_channel_identity(self):
        """1-channel input is returned unchanged"""
        img = np.random.default_rng(0).random((3, 3, 1))
        assert_array_equal(to_grayscale(img), img)


class TestMaskedStatistics(unittest.TestCase):
    """Masked mean/min and mask algebra"""

    def setUp(self):
        self.img = np.array([[0.2, 0.4], [0.6, 0.8]])
        self.diag = np.array([[True, False], [False, True]])

    def test_masked_mean_diag(self):
        """Mean over the diagonal"""
        self.assertAlmostEqual(masked_mean(self.img, self.diag), 0.5, places=12)

    def test_masked_min_diag(self):
        """Min over the diagonal"""
        self.assertAlmostEqual(masked_min(self.img, self.diag), 0.2, places=12)

    def test_constant_image(self):
        """Constant image gives its value"""
        img = np.full((3, 3), 0.3)
        self.assertAlmostEqual(masked_mean(img, np.ones((3, 3), bool)), 0.3, places=12)
        self.assertAlmostEqual(masked_min(np.full((3, 3), 0.7), np.eye(3, dtype=bool)), 0.7, places=12)

    def test_empty_mask(self):
        """Statistics over an empty mask raise EmptyMaskError"""
        empty = np.zeros((2, 2), bool)
        with self.assertRaises(EmptyMaskError):
            masked_mean(self.img, empty)
        with self.assertRaises(EmptyMaskError):
            masked_min(self.img, empty)

    def test_three_channel_rejected(self):
        """Masked statistics need a single-channel image"""
        with self.assertRaises(ChannelMismatchError):
            masked_mean(np.zeros((2, 2, 3)), self.diag)

    def test_inclusion_exclusion(self):
        """|a u b| + |a n b| = |a| + |b| on random masks"""
        rng = np.random.default_rng(1)
        for _ in range(50):
            a = rng.random((8, 8)) < 0.4
            b = rng.random((8, 8)) < 0.6
            self.assertEqual(popcount(mask_union(a, b)) + popcount(mask_intersection(a, b)),
                             popcount(a) + popcount(b))

    def test_dilate_single_pixel(self):
        """Radius 1 dilation of one pixel is a 3x3 square"""
        m = np.zeros((5, 5), bool)
        m[2, 2] = True
        self.assertEqual(popcount(dilate_mask(m, 1)), 9)
        assert_array_equal(dilate_mask(m, 0), m)


class TestConnectedComponents(unittest.TestCase):
    """8-connected labeling"""

    def test_diagonal_pixels_connect(self):
        """Two diagonally touching pixels form one region"""
        m = np.zeros((3, 3), bool)
        m[0, 0] = m[1, 1] = True
        regions = connected_components(m, 7)
        self.assertEqual(len(regions), 1)
        self.assertEqual(regions[0].area, 2)
        self.assertEqual(regions[0].category, 7)
        self.assertEqual(regions[0].bbox, (0, 0, 2, 2))

    def test_empty_mask(self):
        """No set pixel, no region"""
        self.assertEqual(connected_components(np.zeros((4, 4), bool)), [])

    def test_matches_flood_fill(self):
        """Partition equals a brute-force flood fill on random masks"""
        rng = np.random.default_rng(2)
        for _ in range(100):
            m = rng.random((16, 16)) < 0.35
            regions = connected_components(m)
            got = {frozenset(zip(*np.nonzero(r.mask))) for r in regions}
            self.assertEqual(got, flood_fill_components(m))
            union = np.zeros_like(m)
            for r in regions:
                self.assertEqual(r.area, popcount(r.mask))
                self.assertFalse((union & r.mask).any())
                union |= r.mask
            assert_array_equal(union, m)

    def test_raster_order(self):
        """Regions come out ordered by their first pixel in raster order"""
        rng = np.random.default_rng(3)
        m = rng.random((16, 16)) < 0.3
        firsts = [tuple(np.argwhere(r.mask)[0]) for r in connected_components(m)]
        self.assertEqual(firsts, sorted(firsts))


class TestDistances(unittest.TestCase):
    """SSIM and smooth-L1"""

    def test_ssim_identical(self):
        """Identical images have zero SSIM loss"""
        img = np.random.default_rng(4).random((12, 12, 3))
        self.assertAlmostEqual(ssim_loss(img, img), 0.0, places=9)

    def test_ssim_constant_images(self):
        """Constant 0 against constant 1 only keeps the luminance constant"""
        a = np.zeros((8, 8))
        b = np.ones((8, 8))
        c1 = SSIM_K1 ** 2
        self.assertAlmostEqual(ssim_loss(a, b), 1.0 - c1 / (1.0 + c1), places=9)

    def test_ssim_symmetric(self):
        """ssim_loss(a, b) = ssim_loss(b, a)"""
        rng = np.random.default_rng(5)
        a, b = rng.random((10, 10)), rng.random((10, 10))
        self.assertAlmostEqual(ssim_loss(a, b), ssim_loss(b, a), places=9)

    def test_ssim_shape_mismatch(self):
        """Different shapes raise ShapeMismatchError"""
        with self.assertRaises(ShapeMismatchError):
            ssim_loss(np.zeros((4, 4)), np.zeros((4, 5)))

    def test_smooth_l1_quadratic_region(self):
        """Uniform difference 0.5 gives 0.125"""
        self.assertAlmostEqual(smooth_l1_loss(np.zeros((3, 3)), np.full((3, 3), 0.5)), 0.125, places=12)

    def test_smooth_l1_identical(self):
        """Identical images give 0"""
        img = np.random.default_rng(6).random((5, 5))
        self.assertEqual(smooth_l1_loss(img, img), 0.0)


class TestColorSpace(unittest.TestCase):
    """HSV conversion"""

    def test_primaries(self):
        """Pure red and pure green"""
        img = np.zeros((1, 2, 3))
        img[0, 0] = (1, 0, 0)
        img[0, 1] = (0, 1, 0)
        hsv = rgb_to_hsv(img)
        assert_allclose(hsv[0, 0], (0.0, 1.0, 1.0), atol=1e-12)
        assert_allclose(hsv[0, 1], (1.0 / 3.0, 1.0, 1.0), atol=1e-12)

    def test_round_trip(self):
        """rgb -> hsv -> rgb is the identity"""
        img = np.random.default_rng(7).random((9, 9, 3))
        assert_allclose(hsv_to_rgb(rgb_to_hsv(img)), img, atol=1e-6)

    def test_needs_three_channels(self):
        """Single-channel input is rejected"""
        with self.assertRaises(ChannelMismatchError):
            rgb_to_hsv(np.zeros((2, 2)))


class TestEdges(unittest.TestCase):
    """Sobel and Canny"""

    def step(self, k=8, size=16):
        img = np.zeros((size, size))
        img[:, k:] = 1.0
        return img

    def test_sobel_constant(self):
        """Constant image has zero gradient"""
        assert_array_equal(sobel_gradient(np.full((6, 6), 0.4)), np.zeros((6, 6, 1)))

    def test_sobel_ramp(self):
        """Horizontal ramp has a uniform interior magnitude"""
        img = np.tile(np.linspace(0.0, 0.9, 10), (10, 1))
        mag = sobel_gradient(img)[1:-1, 1:-1, 0]
        assert_allclose(mag, mag[0, 0], atol=1e-12)
        self.assertGreater(mag[0, 0], 0.0)

    def test_sobel_step(self):
        """A unit step reads 1 on both sides of the step"""
        mag = sobel_gradient(self.step())[:, :, 0]
        assert_allclose(mag[:, 7], 1.0)
        assert_allclose(mag[:, 8], 1.0)
        self.assertEqual(mag[:, :6].max(), 0.0)

    def test_canny_constant(self):
        """No gradient, no edges"""
        self.assertFalse(canny_edges(np.full((10, 10), 0.5), 0.1, 0.2).any())

    def test_canny_step_columns(self):
        """A vertical step at column k yields edges only in columns k-1 and k"""
        edges = canny_edges(self.step(k=8), high=0.2)
        self.assertTrue(edges.any())
        cols = set(np.nonzero(edges)[1].tolist())
        self.assertTrue(cols <= {7, 8})

    def test_canny_deterministic(self):
        """Repeated calls are bit-identical"""
        img = np.random.default_rng(8).random((16, 16))
        assert_array_equal(canny_edges(img, 0.1, 0.3), canny_edges(img, 0.1, 0.3))

    def test_canny_bad_thresholds(self):
        """low > high is rejected"""
        with self.assertRaises(BadThresholdsError):
            canny_edges(np.zeros((4, 4)), 0.5, 0.2)


if __name__ == '__main__':
    unittest.main()
