import numpy as np
import pytest

from mvspectral import InvalidSpec, SyntheticSpec, synth_views


class TestSyntheticSpec:
    def test_balanced_blocks_default(self):
        spec = SyntheticSpec(n=11, k_true=3, m=1)
        assert spec.resolved_blocks() == (4, 4, 3)

    def test_explicit_blocks_must_sum(self):
        spec = SyntheticSpec(n=10, k_true=2, m=1, block_sizes=(6, 5))
        with pytest.raises(InvalidSpec):
            spec.validate()

    def test_intra_must_exceed_inter(self):
        with pytest.raises(InvalidSpec):
            SyntheticSpec(n=10, k_true=2, m=1, intra_mean=0.2, inter_mean=0.5).validate()

    def test_negative_sd_rejected(self):
        with pytest.raises(InvalidSpec):
            SyntheticSpec(n=10, k_true=2, m=1, intra_sd=-0.1).validate()


class TestSynthViews:
    def test_noise_free_spec_gives_identical_block_graphs(self):
        spec = SyntheticSpec(n=9, k_true=3, m=4, intra_mean=1.0, intra_sd=0.0,
                             inter_mean=0.0, inter_sd=0.0)
        views, truth = synth_views(spec)
        assert views.m == 4
        first = views.views[0].weights
        for v in views.views[1:]:
            np.testing.assert_array_equal(v.weights, first)
        labels = truth.assignment
        same = labels[:, None] == labels[None, :]
        np.testing.assert_array_equal(first[same & ~np.eye(9, dtype=bool)], 1.0)
        np.testing.assert_array_equal(first[~same], 0.0)

    def test_ground_truth_matches_blocks(self):
        views, truth = synth_views(SyntheticSpec(n=12, k_true=4, m=2, rng_seed=5))
        assert truth.k == 4
        np.testing.assert_array_equal(np.bincount(truth.assignment)[1:], [3, 3, 3, 3])

    def test_different_seeds_different_matrices_same_shape(self):
        spec_a = SyntheticSpec(n=8, k_true=2, m=3, rng_seed=1)
        spec_b = SyntheticSpec(n=8, k_true=2, m=3, rng_seed=2)
        va, _ = synth_views(spec_a)
        vb, _ = synth_views(spec_b)
        assert va.n == vb.n and va.m == vb.m
        assert not np.array_equal(va.views[0].weights, vb.views[0].weights)

    def test_same_seed_reproducible(self):
        spec = SyntheticSpec(n=8, k_true=2, m=3, rng_seed=9)
        va, _ = synth_views(spec)
        vb, _ = synth_views(spec)
        for a, b in zip(va.views, vb.views):
            np.testing.assert_array_equal(a.weights, b.weights)

    def test_views_are_valid_graphs(self):
        views, _ = synth_views(SyntheticSpec(n=10, k_true=2, m=5, rng_seed=3))
        for v in views.views:
            assert np.all(v.weights >= 0)
            np.testing.assert_array_equal(v.weights, v.weights.T)
            np.testing.assert_array_equal(np.diag(v.weights), 0.0)
