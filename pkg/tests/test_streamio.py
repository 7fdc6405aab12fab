import numpy as np
import pytest

from driftlab.streamio import (StreamFileError, load_stream_file, pca_apply,
                               pca_fit, pca_fit_frames, load_projection,
                               save_projection, save_stream_file)
from driftlab.streams import Frame
from driftlab.synthetic import build_scenario


class TestStreamFile:
    def test_round_trip_identity(self, tmp_path):
        frames = build_scenario("I", seed=3, length=200)
        path = tmp_path / "s.tsv"
        save_stream_file(path, frames)
        header, loaded = load_stream_file(path)
        assert header.dim == 2
        assert header.frames == len(frames)
        assert header.ground_truth
        assert set(header.streams) == {f.stream_id for f in frames}
        for a, b in zip(frames, loaded):
            assert a.stream_id == b.stream_id
            assert a.global_index == b.global_index
            assert a.true_label == b.true_label
            assert np.array_equal(a.features, b.features)

    def test_unlabeled_frames_round_trip(self, tmp_path):
        frames = [Frame("s", i, np.array([1.5, -2.25]), None) for i in range(5)]
        path = tmp_path / "u.tsv"
        save_stream_file(path, frames)
        header, loaded = load_stream_file(path)
        assert not header.ground_truth
        assert all(f.true_label is None for f in loaded)

    def test_empty_body_with_valid_header(self, tmp_path):
        path = tmp_path / "e.tsv"
        path.write_text("#driftlab-stream v1 dim=3 frames=0 ground_truth=0 streams=\n")
        header, frames = load_stream_file(path)
        assert frames == []
        assert header.dim == 3

    def test_corrupted_record_cites_line(self, tmp_path):
        path = tmp_path / "c.tsv"
        path.write_text(
            "#driftlab-stream v1 dim=2 frames=2 ground_truth=0 streams=s\n"
            "s\t0\t-\t1.0\t2.0\n"
            "s\t1\t-\tnot_a_number\t2.0\n")
        with pytest.raises(StreamFileError) as err:
            load_stream_file(path)
        assert err.value.line == 3
        assert "line 3" in str(err.value)

    def test_wrong_field_count_cites_line(self, tmp_path):
        path = tmp_path / "w.tsv"
        path.write_text(
            "#driftlab-stream v1 dim=2 frames=1 ground_truth=0 streams=s\n"
            "s\t0\t-\t1.0\n")
        with pytest.raises(StreamFileError) as err:
            load_stream_file(path)
        assert err.value.line == 2

    def test_version_mismatch(self, tmp_path):
        path = tmp_path / "v.tsv"
        path.write_text("#driftlab-stream v9 dim=2 frames=0 ground_truth=0 streams=\n")
        with pytest.raises(StreamFileError):
            load_stream_file(path)

    def test_frame_count_mismatch(self, tmp_path):
        path = tmp_path / "n.tsv"
        path.write_text(
            "#driftlab-stream v1 dim=2 frames=5 ground_truth=0 streams=s\n"
            "s\t0\t-\t1.0\t2.0\n")
        with pytest.raises(StreamFileError):
            load_stream_file(path)


class TestPca:
    def test_full_rank_identity_reconstruction(self):
        rng = np.random.default_rng(0)
        X = rng.normal(size=(60, 5))
        proj = pca_fit(X, q=5)
        Z = pca_apply(proj, X)
        recon = Z @ proj.components.T + proj.mean
        assert np.abs(recon - X).max() < 1e-9

    def test_line_data_single_component(self):
        rng = np.random.default_rng(1)
        t = rng.normal(size=100)
        X = np.outer(t, [1.0, 2.0, -0.5]) + [3, 3, 3]
        proj = pca_fit(X, q=1)
        assert proj.explained_variance_ratio.sum() == pytest.approx(1.0, abs=1e-9)

    def test_components_orthonormal(self):
        rng = np.random.default_rng(2)
        X = rng.normal(size=(80, 10))
        proj = pca_fit(X, q=4)
        gram = proj.components.T @ proj.components
        assert np.abs(gram - np.eye(4)).max() < 1e-6

    def test_matches_covariance_eigendecomposition(self):
        rng = np.random.default_rng(3)
        X = rng.normal(size=(50, 10)) @ rng.normal(size=(10, 10))
        q = 6
        proj = pca_fit(X, q=q)
        Z = pca_apply(proj, X)
        # independent oracle: eigenvalues of the sample covariance
        cov = np.cov(X - X.mean(axis=0), rowvar=False)
        eigvals = np.sort(np.linalg.eigvalsh(cov))[::-1][:q]
        assert Z.var(axis=0, ddof=1) == pytest.approx(eigvals, abs=1e-6)

    def test_q_too_large(self):
        X = np.random.default_rng(4).normal(size=(20, 5))
        with pytest.raises(ValueError):
            pca_fit(X, q=6)
        with pytest.raises(ValueError):
            pca_fit(X[:3], q=4)

    def test_projection_round_trip(self, tmp_path):
        rng = np.random.default_rng(5)
        X = rng.normal(size=(30, 4))
        proj = pca_fit(X, q=2)
        path = tmp_path / "p.json"
        save_projection(path, proj)
        loaded = load_projection(path)
        assert np.allclose(pca_apply(loaded, X), pca_apply(proj, X))

    def test_frames_helper(self):
        frames = build_scenario("I", seed=6, length=100)
        proj = pca_fit_frames(frames, q=2)
        assert proj.components.shape == (2, 2)
