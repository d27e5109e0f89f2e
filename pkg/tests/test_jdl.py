import numpy as np
import pytest
from scipy.stats import ortho_group

from mvspectral import (
    DimensionMismatch,
    IsolatedVertex,
    Labelling,
    MultiViewSet,
    ViewGraph,
    consensus_labelling,
    dice,
    jdl_embed,
    joint_diagonalize,
    joint_diagonalize_matrices,
    laplacian,
    off_cost,
    sym_eig,
)
from mvspectral.graphs import SYMMETRIC_NORMALIZED


def graph_of(weights):
    return ViewGraph.from_weights(np.asarray(weights, dtype=float))


def random_view(rng, n, lift=0.05):
    w = np.abs(rng.normal(size=(n, n))) + lift
    w = 0.5 * (w + w.T)
    np.fill_diagonal(w, 0.0)
    return graph_of(w)


def random_symmetric_family(rng, m, n):
    mats = []
    for _ in range(m):
        a = rng.normal(size=(n, n))
        mats.append(a + a.T)
    return mats


def off_oracle(matrices, basis):
    """Direct double-loop sum of squared off-diagonal entries."""
    total = 0.0
    for a in matrices:
        b = basis.T @ np.asarray(a) @ basis
        n = b.shape[0]
        for i in range(n):
            for j in range(n):
                if i != j:
                    total += b[i, j] ** 2
    return total


class TestOffCost:
    def test_diagonal_family_is_zero(self):
        mats = [np.diag([1.0, 2.0, 3.0]), np.diag([-1.0, 0.5, 4.0])]
        assert off_cost(mats, np.eye(3)) == 0.0

    def test_single_matrix_direct_arithmetic(self):
        assert off_cost([np.array([[1.0, 2.0], [2.0, 1.0]])], np.eye(2)) == 8.0

    def test_random_matches_double_loop_oracle(self):
        rng = np.random.default_rng(0)
        mats = random_symmetric_family(rng, 3, 6)
        basis = ortho_group.rvs(6, random_state=1)
        assert off_cost(mats, basis) == pytest.approx(off_oracle(mats, basis), rel=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            off_cost([np.eye(3), np.eye(4)], np.eye(3))

    def test_non_orthogonal_basis_rejected(self):
        with pytest.raises(ValueError):
            off_cost([np.eye(3)], np.full((3, 3), 0.6))


class TestJointDiagonalizeMatrices:
    def test_already_diagonal_one_sweep_identity(self):
        mats = [np.diag([3.0, 1.0, 2.0]), np.diag([0.5, -1.0, 4.0])]
        jd = joint_diagonalize_matrices(mats)
        np.testing.assert_array_equal(jd.basis, np.eye(3))
        assert jd.sweeps_run == 1
        assert jd.off_history[-1] == 0.0

    def test_commuting_family_fully_diagonalized(self):
        rng = np.random.default_rng(2)
        n, m = 10, 4
        shared = ortho_group.rvs(n, random_state=3)
        mats = [shared @ np.diag(rng.normal(size=n)) @ shared.T for _ in range(m)]
        initial = off_cost(mats, np.eye(n))
        jd = joint_diagonalize_matrices(mats)
        assert off_cost(mats, jd.basis) <= 1e-8 * initial

    def test_single_matrix_matches_sym_eig_spaces(self):
        rng = np.random.default_rng(4)
        a = rng.normal(size=(9, 9))
        a = a + a.T
        jd = joint_diagonalize_matrices([a], tol=1e-14)
        assert off_cost([a], jd.basis) <= 1e-10 * float((a * a).sum())
        pairs = sym_eig(a)
        np.testing.assert_allclose(np.sort(jd.mean_diagonal), pairs.values, atol=1e-7)

    def test_off_history_monotone(self):
        rng = np.random.default_rng(5)
        mats = random_symmetric_family(rng, 4, 8)
        jd = joint_diagonalize_matrices(mats, max_sweeps=30)
        h = jd.off_history
        assert np.all(np.diff(h) <= 1e-10 * (1.0 + h[0]))

    def test_basis_orthogonal(self):
        rng = np.random.default_rng(6)
        mats = random_symmetric_family(rng, 3, 12)
        jd = joint_diagonalize_matrices(mats, max_sweeps=20)
        drift = np.abs(jd.basis.T @ jd.basis - np.eye(12)).max()
        assert drift <= 1e-9

    def test_trace_sum_conserved(self):
        rng = np.random.default_rng(7)
        mats = random_symmetric_family(rng, 3, 7)
        jd = joint_diagonalize_matrices(mats, max_sweeps=20)
        before = sum(float(np.trace(a)) for a in mats)
        after = sum(float(np.trace(jd.basis.T @ a @ jd.basis)) for a in mats)
        assert after == pytest.approx(before, rel=1e-9, abs=1e-9)

    def test_trailing_block_rotation_changes_cost(self):
        # A converged basis split as [Q1 Q2]: rotating Q2 alone moves the
        # off-cost, so the objective is not a function of the embedding only.
        rng = np.random.default_rng(8)
        mats = random_symmetric_family(rng, 3, 8)
        jd = joint_diagonalize_matrices(mats, max_sweeps=50)
        base = off_cost(mats, jd.basis)
        k = 3
        hits = 0
        for trial in range(20):
            u = ortho_group.rvs(8 - k, random_state=100 + trial)
            rotated = jd.basis.copy()
            rotated[:, k:] = rotated[:, k:] @ u
            if off_cost(mats, rotated) - base > 1e-10:
                hits += 1
        assert hits >= 1

    def test_not_symmetric_rejected(self):
        with pytest.raises(Exception):
            joint_diagonalize_matrices([np.array([[0.0, 1.0], [0.5, 0.0]])])

    def test_max_sweeps_cap_returns_best(self):
        rng = np.random.default_rng(9)
        mats = random_symmetric_family(rng, 5, 10)
        jd = joint_diagonalize_matrices(mats, max_sweeps=3)
        assert jd.sweeps_run == 3
        assert len(jd.off_history) == 3

    def test_deterministic(self):
        rng = np.random.default_rng(10)
        mats = random_symmetric_family(rng, 3, 6)
        j1 = joint_diagonalize_matrices(mats, max_sweeps=10)
        j2 = joint_diagonalize_matrices(mats, max_sweeps=10)
        assert j1.basis.tobytes() == j2.basis.tobytes()


class TestJointDiagonalizeGraphs:
    def test_uses_normalized_laplacians(self):
        rng = np.random.default_rng(11)
        views = [random_view(rng, 6) for _ in range(3)]
        set_ = MultiViewSet(views)
        jd = joint_diagonalize(set_, max_sweeps=40)
        mats = [laplacian(v, kind=SYMMETRIC_NORMALIZED).matrix for v in views]
        assert off_cost(mats, jd.basis) == pytest.approx(jd.off_history[-1], rel=1e-9, abs=1e-12)

    def test_isolated_vertex_named_with_view(self):
        w = np.zeros((3, 3))
        w[0, 1] = w[1, 0] = 1.0
        set_ = MultiViewSet([graph_of(w)])
        with pytest.raises(IsolatedVertex, match="view 0"):
            joint_diagonalize(set_)


class TestJdlEmbed:
    def test_single_view_subspace_matches_eigenvectors(self):
        rng = np.random.default_rng(12)
        g = random_view(rng, 10)
        set_ = MultiViewSet([g])
        jd = joint_diagonalize(set_, tol=1e-14)
        k = 4
        emb = jdl_embed(jd, set_, k)
        s = laplacian(g, kind=SYMMETRIC_NORMALIZED).matrix
        pairs = sym_eig(s)
        gaps = np.diff(pairs.values)
        assert gaps.min() >= 1e-6  # generic random weights keep the spectrum simple
        overlap = np.linalg.svd(emb.coords.T @ pairs.vectors[:, 1:k], compute_uv=False)
        angle = float(np.arccos(np.clip(overlap.min(), -1.0, 1.0)))
        assert angle <= 1e-6

    def test_two_disconnected_triangles_sign_split(self):
        w = np.zeros((6, 6))
        for a, b in [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]:
            w[a, b] = w[b, a] = 1.0
        set_ = MultiViewSet([graph_of(w)])
        jd = joint_diagonalize(set_)
        emb = jdl_embed(jd, set_, k=2)
        signs = np.sign(emb.coords[:, 0])
        assert len(set(signs[:3])) == 1
        assert len(set(signs[3:])) == 1
        assert signs[0] != signs[3]

    def test_planted_blocks_recovered_downstream(self):
        rng = np.random.default_rng(13)
        n, blocks = 20, 5
        labels = np.repeat(np.arange(1, blocks + 1), n // blocks)
        views = []
        for _ in range(4):
            w = np.where(labels[:, None] == labels[None, :], 1.0, 0.1)
            w = w + rng.uniform(0, 0.05, size=(n, n))
            w = 0.5 * (w + w.T)
            np.fill_diagonal(w, 0.0)
            views.append(graph_of(w))
        set_ = MultiViewSet(views)
        jd = joint_diagonalize(set_)
        emb = jdl_embed(jd, set_, k=blocks)
        lab = consensus_labelling(emb, blocks, num_seeds=20, base_seed=0)
        assert dice(lab, Labelling(assignment=labels, k=blocks)) >= 0.95

    def test_method_tag_and_shape(self):
        rng = np.random.default_rng(14)
        set_ = MultiViewSet([random_view(rng, 7) for _ in range(2)])
        jd = joint_diagonalize(set_, max_sweeps=20)
        emb = jdl_embed(jd, set_, k=3)
        assert emb.method == "jdl"
        assert emb.coords.shape == (7, 2)
        assert np.all(np.diff(emb.eigenvalues) >= 0)
