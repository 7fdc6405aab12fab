import numpy as np
import pytest

from driftlab.classifiers import LabeledFrameSet, Member, train_gaussian_nb, train_gmm, \
    train_logistic, train_one_class
from driftlab.ensemble import (ClassRegistry, ColdStartError, CompositeModel,
                               compute_weights, load_snapshot, save_snapshot)
from driftlab.numeric import EPS


class FixedMember(Member):
    """Test double returning one fixed posterior row for every frame."""

    kind = "gaussian_nb"

    def __init__(self, known_labels, row):
        super().__init__(known_labels)
        self.row = np.asarray(row, dtype=float)

    def predict_proba(self, X):
        X = np.atleast_2d(X)
        return np.tile(self.row, (X.shape[0], 1))


class TestComputeWeights:
    def test_single_member(self):
        assert compute_weights(1, 2.0) == pytest.approx([1.0])

    def test_three_members_base_two(self):
        assert compute_weights(3, 2.0) == pytest.approx([1 / 7, 2 / 7, 4 / 7])

    def test_two_members_base_three(self):
        assert compute_weights(2, 3.0) == pytest.approx([0.25, 0.75])

    @pytest.mark.parametrize("p", [1.5, 2.0, 4.0])
    @pytest.mark.parametrize("t", [1, 7, 100, 10_000])
    def test_weights_sum_to_one(self, p, t):
        assert abs(compute_weights(t, p).sum() - 1.0) < 1e-9

    @pytest.mark.parametrize("p", [1.5, 2.0, 4.0])
    def test_strictly_increasing_with_exact_ratio(self, p):
        w = compute_weights(300, p)
        nz = w[w > 0]
        assert np.all(np.diff(nz) > 0)
        ratios = nz[1:] / nz[:-1]
        assert ratios == pytest.approx(np.full(len(ratios), p), rel=1e-12)

    def test_invalid_base_rejected(self):
        with pytest.raises(ValueError):
            compute_weights(3, 1.0)
        with pytest.raises(ValueError):
            compute_weights(3, 0.5)


class TestEnsembleScore:
    def test_convex_combination(self):
        registry = ClassRegistry(["A", "B"])
        model = CompositeModel(2.0, (FixedMember((0, 1), [1.0, 0.0]),
                                     FixedMember((0, 1), [0.0, 1.0])), registry)
        # weights (1/3, 2/3)
        post = model.score_frame(np.zeros(2))
        assert post == pytest.approx([1 / 3, 2 / 3], abs=1e-8)

    def test_single_member_identity(self):
        registry = ClassRegistry(["A", "B"])
        model = CompositeModel(2.0, (FixedMember((0, 1), [0.7, 0.3]),), registry)
        assert model.score_frame(np.zeros(2)) == pytest.approx([0.7, 0.3], abs=1e-9)

    def test_zero_extension_for_unknown_classes(self):
        registry = ClassRegistry(["A", "B", "C"])
        model = CompositeModel(2.0, (FixedMember((0, 1), [0.5, 0.5]),), registry)
        post = model.score_frame(np.zeros(2))
        assert post[0] == pytest.approx(0.5, abs=1e-6)
        assert post[1] == pytest.approx(0.5, abs=1e-6)
        assert post[2] <= EPS * 2

    def test_argmax_invariant_under_shared_scaling(self):
        registry = ClassRegistry(["A", "B", "C"])
        rng = np.random.default_rng(0)
        rows = rng.dirichlet(np.ones(3), size=3)
        members = tuple(FixedMember((0, 1, 2), row) for row in rows)
        model = CompositeModel(2.0, members, registry)
        base = np.argmax(model.score_frame(np.zeros(2)))
        scaled_members = tuple(FixedMember((0, 1, 2), row * 0.2) for row in rows)
        scaled = CompositeModel(2.0, scaled_members, registry)
        assert np.argmax(scaled.score_frame(np.zeros(2))) == base

    def test_empty_ensemble_uniform_over_registry(self):
        registry = ClassRegistry(["A", "B", "C", "D"])
        model = CompositeModel(2.0, (), registry)
        assert model.score_frame(np.zeros(2)) == pytest.approx([0.25] * 4, abs=1e-9)

    def test_cold_start_signalled(self):
        model = CompositeModel(2.0, (), ClassRegistry())
        with pytest.raises(ColdStartError):
            model.score_frame(np.zeros(2))

    def test_posterior_contract(self):
        registry = ClassRegistry(["A", "B", "C"])
        rng = np.random.default_rng(1)
        members = tuple(FixedMember((0, 1, 2), row)
                        for row in rng.dirichlet(np.ones(3), size=5))
        model = CompositeModel(2.0, members, registry)
        post = model.score_frames(rng.normal(size=(20, 2)))
        assert np.allclose(post.sum(axis=1), 1.0, atol=1e-9)
        assert np.all(post >= EPS) and np.all(post <= 1 - EPS)


class TestAppendMember:
    def test_append_to_empty(self):
        model = CompositeModel(2.0)
        model = model.append_member(FixedMember((0,), [1.0]), ["A"])
        assert len(model) == 1
        assert model.weights == pytest.approx([1.0])

    def test_registry_union(self):
        model = CompositeModel(2.0)
        model = model.append_member(FixedMember((0,), [1.0]), ["A"])
        model = model.append_member(FixedMember((1,), [1.0]), ["B"])
        assert model.registry.names == ("A", "B")

    def test_five_appends_oldest_weight(self):
        model = CompositeModel(2.0)
        for i in range(5):
            model = model.append_member(FixedMember((0,), [1.0]), ["A"])
        assert model.weights[0] == pytest.approx(1 / 31)


class TestSnapshot:
    def test_round_trip_all_member_kinds(self, tmp_path):
        rng = np.random.default_rng(2)
        X = np.vstack([rng.normal(0, 1, (30, 2)), rng.normal(6, 1, (30, 2))])
        y = np.array([0] * 30 + [1] * 30)
        data = LabeledFrameSet(X, y)
        unary = LabeledFrameSet(X[:30], y[:30])
        registry = ClassRegistry(["A", "B"])
        model = CompositeModel(2.0, (
            train_gaussian_nb(data, trained_slot=0),
            train_gmm(data, components=2, seed=5, trained_slot=1),
            train_logistic(data, trained_slot=2),
            train_one_class(unary, trained_slot=3),
        ), registry)

        path = tmp_path / "model.json"
        save_snapshot(model, path)
        loaded = load_snapshot(path)

        assert loaded.decay_base == model.decay_base
        assert loaded.registry.names == ("A", "B")
        probe = rng.normal(3, 2, size=(15, 2))
        assert np.allclose(loaded.score_frames(probe), model.score_frames(probe))

    def test_version_check(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"version": 99}')
        with pytest.raises(ValueError):
            load_snapshot(path)
