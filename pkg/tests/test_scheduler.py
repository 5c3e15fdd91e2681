# -*- coding: utf-8 -*-
"""
test_scheduler.py - Tests for dual feedback scheduling
======================================================

Tests for:
1. Pool choice from the previous-iteration signals
2. Determinism and per-domain independence
3. Sample indexing and SOC pool construction
4. Signal and pool validation
"""

import os
import sys
import unittest

import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from foalkit.foalconf import DEFAULT_PALETTE
from foalkit.imagecore import ConfigError
from foalkit.oamix import DOMAIN_A, DOMAIN_B, CategoryConfig
from foalkit.scheduler import (
    POOL_ALL, POOL_SOC, EmptyDatasetError, NegativeLossError, SampleIndex, ScheduleSettings,
    build_soc_sets, choose_pool, new_state, next_draw, next_sample, replay, synthetic_pools,
    update_state,
)

SIGN = DEFAULT_PALETTE["traffic sign"]
ROAD = DEFAULT_PALETTE["road"]


def fresh(seed=0, **kwargs):
    settings = ScheduleSettings(**kwargs)
    return new_state(synthetic_pools(settings), seed, settings)


class TestPoolChoice(unittest.TestCase):
    """Feedback rule"""

    def test_soc_loss_larger(self):
        """0.3 > 0.2 draws from the SOC pool"""
        state = update_state(fresh(), DOMAIN_A, 0.3, 0.2)
        draw = next_draw(state, DOMAIN_A)
        self.assertEqual(draw.pool, POOL_SOC)
        self.assertIn("-soc-", draw.sample_id)

    def test_tie_goes_to_all(self):
        """Equal signals draw from the whole dataset"""
        state = update_state(fresh(), DOMAIN_A, 0.2, 0.2)
        self.assertEqual(choose_pool(state, DOMAIN_A), POOL_ALL)

    def test_global_larger(self):
        """Global loss larger draws from the whole dataset"""
        state = update_state(fresh(), DOMAIN_B, 0.1, 0.4)
        self.assertEqual(choose_pool(state, DOMAIN_B), POOL_ALL)

    def test_cold_start(self):
        """Before any update the whole dataset is used"""
        state = fresh()
        self.assertEqual(choose_pool(state, DOMAIN_A), POOL_ALL)
        self.assertEqual(choose_pool(state, DOMAIN_B), POOL_ALL)

    def test_warmup(self):
        """During warmup the signals are ignored"""
        state = fresh(warmup_iterations=3)
        for _ in range(2):
            update_state(state, DOMAIN_A, 0.9, 0.1)
            self.assertEqual(choose_pool(state, DOMAIN_A), POOL_ALL)
        update_state(state, DOMAIN_A, 0.9, 0.1)
        self.assertEqual(choose_pool(state, DOMAIN_A), POOL_SOC)

    def test_empty_soc_pool_falls_back(self):
        """No SOC samples: the SOC condition still draws from all"""
        state = fresh(soc_pool_size=0)
        update_state(state, DOMAIN_A, 0.9, 0.1)
        self.assertEqual(next_draw(state, DOMAIN_A).pool, POOL_ALL)

    def test_soc_always_larger_frequency(self):
        """SOC loss always larger: every draw after the first update is SOC"""
        state = fresh(seed=5)
        draws = replay(state, [(DOMAIN_A, 0.5, 0.1)] * 200)
        self.assertTrue(all(d.pool == POOL_SOC for d in draws))
        self.assertTrue(all("-soc-" in d.sample_id for d in draws))

    def test_iteration_counter(self):
        """Each update advances only its own domain"""
        state = fresh()
        update_state(state, DOMAIN_A, 0.1, 0.1)
        update_state(state, DOMAIN_A, 0.1, 0.1)
        self.assertEqual(state.domain(DOMAIN_A).iteration, 2)
        self.assertEqual(state.domain(DOMAIN_B).iteration, 0)


class TestDeterminism(unittest.TestCase):
    """Seeded draws"""

    def trace(self, n=1000):
        rng = np.random.default_rng(11)
        return [(DOMAIN_A if i % 2 else DOMAIN_B, float(rng.random()), float(rng.random()))
                for i in range(n)]

    def test_same_seed_same_draws(self):
        """Two runs with one seed produce the same 1000 draws"""
        trace = self.trace()
        first = [(d.pool, d.sample_id) for d in replay(fresh(seed=42), trace)]
        second = [(d.pool, d.sample_id) for d in replay(fresh(seed=42), trace)]
        self.assertEqual(first, second)

    def test_domains_independent(self):
        """Feeding domain B does not change the draws of domain A"""
        only_a = fresh(seed=3)
        mixed = fresh(seed=3)
        got_a, got_mixed = [], []
        for i in range(100):
            update_state(only_a, DOMAIN_A, 0.2, 0.1)
            got_a.append(next_sample(only_a, DOMAIN_A))
            update_state(mixed, DOMAIN_B, 0.1, 0.2)
            next_sample(mixed, DOMAIN_B)
            update_state(mixed, DOMAIN_A, 0.2, 0.1)
            got_mixed.append(next_sample(mixed, DOMAIN_A))
        self.assertEqual(got_a, got_mixed)

    def test_draws_stay_in_pool(self):
        """Whole-dataset draws come from the configured ids"""
        state = fresh(seed=9)
        pool = set(state.domain(DOMAIN_A).all_ids)
        for _ in range(100):
            self.assertIn(next_sample(state, DOMAIN_A), pool)


class TestSampleIndex(unittest.TestCase):
    """SampleIndex / build_soc_sets"""

    def setUp(self):
        self.cfg = CategoryConfig.from_palette()

    def frame(self, size, box):
        labels = np.full((size, size), ROAD, np.uint8)
        labels[:box[0], :box[1]] = SIGN
        return labels

    def test_sign_above_threshold(self):
        """A 100-pixel sign in a 256x256 frame qualifies"""
        entry = SampleIndex.from_labels("s0", self.frame(256, (10, 10)), self.cfg)
        self.assertTrue(entry.has_soc)
        self.assertEqual(entry.soc_area, 100)

    def test_area_exactly_threshold(self):
        """An area equal to the threshold does not qualify"""
        entry = SampleIndex.from_labels("s1", self.frame(256, (8, 8)), self.cfg)
        self.assertEqual(entry.soc_area, 64)
        self.assertFalse(entry.has_soc)

    def test_largest_component(self):
        """Two separate signs: the larger one decides"""
        labels = np.full((256, 256), ROAD, np.uint8)
        labels[0:8, 0:8] = SIGN
        labels[100:105, 100:105] = SIGN
        entry = SampleIndex.from_labels("s2", labels, self.cfg)
        self.assertEqual(entry.soc_area, 64)

    def test_sets_in_index_order(self):
        """SOC ids keep the index order and are a subset of all ids"""
        index = [
            SampleIndex.from_labels("a", self.frame(256, (10, 10)), self.cfg),
            SampleIndex.from_labels("b", self.frame(256, (4, 4)), self.cfg),
            SampleIndex.from_labels("c", self.frame(256, (12, 12)), self.cfg),
        ]
        soc_ids, all_ids = build_soc_sets(index)
        self.assertEqual(soc_ids, ("a", "c"))
        self.assertEqual(all_ids, ("a", "b", "c"))

    def test_threshold_rescaled(self):
        """A stricter configuration re-evaluates stored areas"""
        index = [SampleIndex("x", soc_area=100, height=256, width=256, has_soc=True)]
        strict = CategoryConfig.from_palette(area_threshold=200)
        self.assertEqual(build_soc_sets(index, strict)[0], ())
        self.assertEqual(build_soc_sets(index)[0], ("x",))

    def test_dict_round_trip(self):
        """Index entries survive to_dict/from_dict"""
        entry = SampleIndex.from_labels("s3", self.frame(64, (5, 5)), self.cfg, "l.png", "i.png")
        self.assertEqual(SampleIndex.from_dict(entry.to_dict()), entry)

    def test_empty_index(self):
        """An empty index raises"""
        with self.assertRaises(EmptyDatasetError):
            build_soc_sets([])


class TestValidation(unittest.TestCase):
    """Signal and pool errors"""

    def test_negative_signal(self):
        """Negative loss is rejected and names the signal"""
        with self.assertRaises(NegativeLossError) as ctx:
            update_state(fresh(), DOMAIN_A, -0.1, 0.2)
        self.assertEqual(ctx.exception.name, "z_soc")

    def test_nan_signal(self):
        """NaN is rejected"""
        with self.assertRaises(NegativeLossError):
            update_state(fresh(), DOMAIN_A, 0.1, float("nan"))

    def test_empty_pool(self):
        """An empty whole-dataset pool raises"""
        with self.assertRaises(EmptyDatasetError):
            new_state({DOMAIN_A: ((), ()), DOMAIN_B: ((), ("b0",))}, 0)

    def test_missing_domain(self):
        """Both domains need a pool"""
        with self.assertRaises(EmptyDatasetError):
            new_state({DOMAIN_A: ((), ("a0",))}, 0)

    def test_stray_soc_id(self):
        """SOC ids must belong to the pool"""
        with self.assertRaises(ConfigError):
            new_state({DOMAIN_A: (("zz",), ("a0",)), DOMAIN_B: ((), ("b0",))}, 0)

    def test_unknown_domain(self):
        """Unknown domain names are configuration errors"""
        with self.assertRaises(ConfigError):
            choose_pool(fresh(), "C")

    def test_bad_settings(self):
        """SOC pool larger than the dataset is rejected"""
        with self.assertRaises(ConfigError):
            ScheduleSettings(all_pool_size=5, soc_pool_size=6)


if __name__ == '__main__':
    unittest.main()
