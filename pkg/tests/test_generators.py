import numpy as np
import pytest

from dynembed import (
    ChungLuSpec,
    DsbmSpec,
    SystemPreset,
    build_preset,
    noise_free_rank,
    sample_chung_lu,
    sample_dsbm,
    sample_gnm,
    sample_network,
)
from dynembed.generators import _pareto_weights


def two_blocks(n):
    tau = np.zeros(n, dtype=int)
    tau[n // 2 :] = 1
    return tau


class TestSampleDsbm:
    def test_all_zero_probabilities(self):
        spec = DsbmSpec([np.zeros((2, 2))] * 2, two_blocks(10))
        net = sample_dsbm(spec, seed=0)
        assert all(a.nnz == 0 for a in net.snapshots)

    def test_all_one_probabilities_complete_graph(self):
        spec = DsbmSpec([np.ones((2, 2))], two_blocks(8))
        net = sample_dsbm(spec, seed=0)
        dense = net.snapshots[0].toarray()
        assert np.array_equal(dense, np.ones((8, 8)) - np.eye(8))

    def test_symmetric_zero_diagonal(self):
        net = sample_dsbm(build_preset(SystemPreset("moving", n=30)), seed=5)
        for a in net.snapshots:
            assert (a != a.T).nnz == 0
            assert np.all(a.diagonal() == 0)

    def test_same_seed_identical_different_seed_differs(self):
        spec = build_preset(SystemPreset("static", n=40))
        a = sample_dsbm(spec, seed=9)
        b = sample_dsbm(spec, seed=9)
        c = sample_dsbm(spec, seed=10)
        assert all(
            (x - y).nnz == 0 for x, y in zip(a.snapshots, b.snapshots)
        )
        assert any((x - y).nnz > 0 for x, y in zip(a.snapshots, c.snapshots))

    def test_moving_block_densities_within_three_se(self):
        # Monte Carlo oracle: block densities over 500 samples against B
        n, samples = 40, 500
        preset = SystemPreset("moving", n=n)
        spec = build_preset(preset)
        tau = spec.tau
        counts = np.zeros((2, 2, 2))  # (t, block) edge totals
        pairs = np.zeros((2, 2))
        iu, ju = np.triu_indices(n, k=1)
        for a in range(2):
            for b in range(2):
                pairs[a, b] = np.sum((tau[iu] == a) & (tau[ju] == b))
        for s in range(samples):
            net = sample_dsbm(spec, seed=1000 + s)
            for t, snap in enumerate(net.snapshots):
                dense = snap.toarray()
                for a in range(2):
                    for b in range(2):
                        mask = (tau[iu] == a) & (tau[ju] == b)
                        counts[t, a, b] += dense[iu[mask], ju[mask]].sum()
        for t in range(2):
            B = spec.B[t]
            for a in range(2):
                for b in range(2):
                    if pairs[a, b] == 0:
                        continue
                    total = pairs[a, b] * samples
                    p_hat = counts[t, a, b] / total
                    se = np.sqrt(B[a, b] * (1 - B[a, b]) / total)
                    assert abs(p_hat - B[a, b]) < 3 * se + 1e-12

    def test_density_at_scale_500(self):
        # single large sample: within-block density within 3 SE of B
        n = 500
        spec = build_preset(SystemPreset("static", n=n))
        net = sample_dsbm(spec, seed=77)
        dense = net.snapshots[0].toarray()
        block = dense[: n // 2, : n // 2]
        m = (n // 2) * (n // 2 - 1)
        p_hat = block.sum() / m
        se = np.sqrt(0.5 * 0.5 / m)
        assert abs(p_hat - 0.5) < 3 * se

    def test_rejects_invalid_probabilities(self):
        with pytest.raises(ValueError, match=r"\[0, 1\]"):
            DsbmSpec([np.array([[1.2, 0.1], [0.1, 0.2]])], two_blocks(4))
        with pytest.raises(ValueError, match="symmetric"):
            DsbmSpec([np.array([[0.5, 0.1], [0.3, 0.2]])], two_blocks(4))


class TestSampleChungLu:
    def test_equal_weights_match_erdos_renyi_density(self):
        # w_i = c for all i gives p = c / n
        n, c, samples = 50, 4.0, 300
        spec = ChungLuSpec(np.full(n, c), scales=(1.0,))
        total = 0
        for s in range(samples):
            total += sample_chung_lu(spec, seed=s).snapshots[0].nnz // 2
        m = n * (n - 1) / 2
        p = c / n
        p_hat = total / (m * samples)
        se = np.sqrt(p * (1 - p) / (m * samples))
        assert abs(p_hat - p) < 3 * se

    def test_scale_reduces_expected_edges(self):
        n, samples = 60, 400
        spec = ChungLuSpec(np.full(n, 5.0), scales=(1.0, 0.97))
        first, second = 0, 0
        for s in range(samples):
            net = sample_chung_lu(spec, seed=s)
            first += net.snapshots[0].nnz
            second += net.snapshots[1].nnz
        ratio = second / first
        assert abs(ratio - 0.97) < 0.02

    def test_single_node_empty_graph(self):
        spec = ChungLuSpec(np.array([0.9]), scales=(1.0,))
        net = sample_chung_lu(spec, seed=0)
        assert net.snapshots[0].nnz == 0

    def test_rejects_probability_above_one(self):
        with pytest.raises(ValueError, match="exceeds 1"):
            ChungLuSpec(np.array([10.0, 10.0, 0.1]), scales=(1.0,))


class TestPresets:
    def test_static_matrices_equal(self):
        spec = build_preset(SystemPreset("static", n=10))
        assert np.array_equal(spec.B[0], spec.B[1])
        assert np.array_equal(spec.B[0], [[0.5, 0.5], [0.5, 0.4]])

    def test_moving_matrices(self):
        spec = build_preset(SystemPreset("moving", n=10))
        assert np.array_equal(spec.B[0], [[0.5, 0.2], [0.2, 0.5]])
        assert np.array_equal(spec.B[1], [[0.5, 0.2], [0.2, 0.53]])

    def test_merge_second_snapshot_constant(self):
        spec = build_preset(SystemPreset("merge", n=10))
        assert np.array_equal(spec.B[0], [[0.9, 0.2], [0.2, 0.1]])
        assert np.all(spec.B[1] == 0.5)

    def test_k_community_difference_single_entry(self):
        preset = SystemPreset("k-community", n=64, p_within=(0.5,) * 8)
        spec = build_preset(preset)
        diff = spec.B[1] - spec.B[0]
        expected = np.zeros((8, 8))
        expected[1, 1] = 0.03
        assert np.allclose(diff, expected)
        assert np.all(spec.B[0][~np.eye(8, dtype=bool)] == 0.2)

    def test_long_series_changes_at_midpoint(self):
        preset = SystemPreset("moving", n=10, T=50)
        spec = build_preset(preset)
        assert preset.change_at == 25
        for t in range(25):
            assert np.array_equal(spec.B[t], spec.B[0])
        for t in range(25, 50):
            assert spec.B[t][1, 1] == 0.53

    def test_unknown_preset_rejected(self):
        with pytest.raises(ValueError, match="unknown preset"):
            SystemPreset("no-such-system", n=10)

    def test_power_preset_weights_constraint(self):
        preset = SystemPreset("moving-power", n=100, seed=4)
        spec = build_preset(preset)
        assert isinstance(spec, ChungLuSpec)
        assert spec.weights.min() > 0
        assert spec.weights.max() ** 2 / spec.weights.sum() <= 1 + 1e-12
        assert spec.scales == (1.0, 0.97)

    def test_noise_free_ranks(self):
        assert noise_free_rank(SystemPreset("static", n=10)) == 2
        assert noise_free_rank(SystemPreset("moving-power", n=10)) == 1
        assert noise_free_rank(SystemPreset("k-community", n=16, p_within=(0.4,) * 5)) == 5

    def test_pareto_exponent_validation(self):
        with pytest.raises(ValueError, match="exponent"):
            _pareto_weights(10, 1.0, 2.0, np.random.default_rng(0))


class TestSampleGnm:
    def test_shapes_and_symmetry(self):
        net = sample_gnm(100, 300, T=3, seed=0)
        assert net.n == 100 and net.T == 3
        for a in net.snapshots:
            assert (a != a.T).nnz == 0
            assert np.all(a.diagonal() == 0)
            assert 0.9 * 300 <= a.nnz / 2 <= 300

    def test_dispatch_helper(self):
        net = sample_network(build_preset(SystemPreset("static-power", n=30)), seed=1)
        assert net.T == 2
