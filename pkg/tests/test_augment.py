# -*- coding: utf-8 -*-
"""
test_augment.py - Tests for paired preprocessing
================================================
"""

import os
import sys
import unittest

import numpy as np
from numpy.testing import assert_array_equal

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from foalkit.augment import random_crop, random_hflip, resize_center_crop
from foalkit.imagecore import ShapeMismatchError


def scene(h=40, w=50):
    rng = np.random.default_rng(0)
    image = rng.random((h, w, 3))
    labels = np.zeros((h, w), np.uint8)
    labels[:, w // 2:] = 13
    labels[:5, :5] = 6
    return image, labels


class TestResizeCrop(unittest.TestCase):
    """resize_center_crop"""

    def test_output_shape(self):
        """Crop size is (W, H)"""
        image, labels = scene()
        out_img, out_lab = resize_center_crop(image, labels, (100, 80), (60, 40))
        self.assertEqual(out_img.shape, (40, 60, 3))
        self.assertEqual(out_lab.shape, (40, 60))

    def test_labels_keep_ids(self):
        """Nearest-neighbour resampling never invents ids"""
        image, labels = scene()
        _, out_lab = resize_center_crop(image, labels, (100, 80), (100, 80))
        self.assertTrue(set(np.unique(out_lab)) <= set(np.unique(labels)))
        self.assertEqual(out_lab.dtype, np.uint8)

    def test_range_kept(self):
        """Resampled image stays in [0, 1]"""
        image, labels = scene()
        out_img, _ = resize_center_crop(image, labels, (70, 60), (70, 60))
        self.assertGreaterEqual(out_img.min(), 0.0)
        self.assertLessEqual(out_img.max(), 1.0)

    def test_crop_too_large(self):
        """Crop window larger than the resized frame"""
        image, labels = scene()
        with self.assertRaises(ShapeMismatchError):
            resize_center_crop(image, labels, (50, 40), (60, 40))

    def test_pair_mismatch(self):
        """Image and labels must share a frame"""
        image, _ = scene()
        with self.assertRaises(ShapeMismatchError):
            resize_center_crop(image, np.zeros((10, 10), np.uint8))


class TestRandom(unittest.TestCase):
    """random_hflip / random_crop"""

    def test_flip_moves_together(self):
        """p = 1 always flips both"""
        image, labels = scene()
        out_img, out_lab, flipped = random_hflip(image, labels, np.random.default_rng(0), p=1.0)
        self.assertTrue(flipped)
        assert_array_equal(out_img, image[:, ::-1])
        assert_array_equal(out_lab, labels[:, ::-1])

    def test_no_flip(self):
        """p = 0 never flips"""
        image, labels = scene()
        out_img, out_lab, flipped = random_hflip(image, labels, np.random.default_rng(0), p=0.0)
        self.assertFalse(flipped)
        assert_array_equal(out_lab, labels)

    def test_crop_aligned(self):
        """Crops of image and labels cover the same window"""
        h, w = 40, 50
        image = np.zeros((h, w, 1))
        image[:, :, 0] = np.arange(h * w).reshape(h, w) / (h * w)
        labels = (np.arange(h * w).reshape(h, w) % 200).astype(np.uint8)
        out_img, out_lab = random_crop(image, labels, np.random.default_rng(4), 16)
        self.assertEqual(out_lab.shape, (16, 16))
        idx = np.rint(out_img[:, :, 0] * h * w).astype(int)
        assert_array_equal(idx % 200, out_lab)

    def test_crop_seeded(self):
        """Same seed, same window"""
        image, labels = scene()
        a = random_crop(image, labels, np.random.default_rng(9), 16)
        b = random_crop(image, labels, np.random.default_rng(9), 16)
        assert_array_equal(a[0], b[0])

    def test_crop_too_large(self):
        """Frames smaller than the crop"""
        image, labels = scene(10, 10)
        with self.assertRaises(ShapeMismatchError):
            random_crop(image, labels, np.random.default_rng(0), 16)


if __name__ == '__main__':
    unittest.main()
