import numpy as np
import pytest

import driftlab as dl
from driftlab.synthetic import (CLASS_TABLE, UndefinedSegmentError,
                                build_scenario, class_params, defined_segments,
                                sample_frame, scenario_spec)


class TestClassParams:
    def test_c1_early(self):
        assert class_params("C1", 0.1) == pytest.approx((2, 5, 0.05, 0.7))

    def test_c2_second_interval(self):
        assert class_params("C2", 0.3) == pytest.approx((15, 0.5, 1, 2.9))

    def test_c4_early(self):
        assert class_params("C4", 0.1) == pytest.approx((8, 9.5, 0.5, 0.5))

    def test_c7_garbled_final_row_literal_reading(self):
        assert class_params("C7", 0.8) == pytest.approx((-10, 3.0, 0.8, 4.4))

    def test_undefined_interval_rejected(self):
        with pytest.raises(UndefinedSegmentError):
            class_params("C1", 0.3)
        with pytest.raises(UndefinedSegmentError):
            class_params("C4", 0.6)
        with pytest.raises(UndefinedSegmentError):
            class_params("C5", 0.5)

    def test_out_of_range_rate(self):
        with pytest.raises(UndefinedSegmentError):
            class_params("C2", 1.0)
        with pytest.raises(UndefinedSegmentError):
            class_params("C2", -0.1)

    def test_unknown_class(self):
        with pytest.raises(KeyError):
            class_params("C9", 0.1)

    def test_gradual_vs_abrupt_segment_counts(self):
        # one segment: gradual; multiple: one fewer jump than segments... the
        # jump count equals internal boundaries plus gaps crossed
        assert len(defined_segments("C5")) == 1
        assert len(defined_segments("C6")) == 1
        assert len(defined_segments("C1")) == 2
        assert len(defined_segments("C4")) == 2
        assert len(defined_segments("C7")) == 2
        assert len(defined_segments("C2")) == 4
        assert len(defined_segments("C3")) == 4

    @pytest.mark.parametrize("cid", ["C2", "C3"])
    def test_abrupt_rows_disagree_at_boundaries(self, cid):
        for boundary in (0.25, 0.5, 0.75):
            below = np.array(class_params(cid, boundary - 1e-9))
            above = np.array(class_params(cid, boundary + 1e-9))
            assert np.abs(below - above).max() > 0.1


class TestSampleFrame:
    def test_law_of_large_numbers_c4(self):
        rng = np.random.default_rng(0)
        samples = np.array([sample_frame("C4", 0.1, rng) for _ in range(10_000)])
        mu = np.array([8.0, 9.5])
        delta = np.array([0.5, 0.5])
        bound = 4 * delta / np.sqrt(10_000)
        assert np.all(np.abs(samples.mean(axis=0) - mu) < bound)

    def test_delta_floor_degenerate_gaussian(self):
        rng = np.random.default_rng(1)
        # C1 at r=0 has delta_x = 0, floored to 1e-6
        samples = np.array([sample_frame("C1", 0.0, rng) for _ in range(100)])
        assert np.abs(samples[:, 0] - 2.0).max() < 1e-4

    def test_seeded_determinism(self):
        a = [sample_frame("C2", 0.3, np.random.default_rng(7)) for _ in range(5)]
        b = [sample_frame("C2", 0.3, np.random.default_rng(7)) for _ in range(5)]
        assert np.array_equal(a, b)

    def test_empirical_mean_tracks_parameter_table(self):
        rng = np.random.default_rng(2)
        for cid in CLASS_TABLE:
            lo, hi = defined_segments(cid)[0]
            r = (lo + hi) / 2
            mu_x, mu_y, d_x, d_y = class_params(cid, r)
            samples = np.array([sample_frame(cid, r, rng) for _ in range(2000)])
            se = np.array([d_x, d_y]) / np.sqrt(2000)
            assert np.all(np.abs(samples.mean(axis=0) - [mu_x, mu_y]) < 5 * se), cid


class TestScenarios:
    def test_scenario_one_has_no_jumps(self):
        spec = scenario_spec("I", length=1000)
        for stream in spec.streams:
            params = np.array([class_params(stream.class_id, stream.rate_at(i))
                               for i in range(stream.length)])
            steps = np.abs(np.diff(params, axis=0)).max()
            assert steps < 0.05, stream.stream_id

    def test_scenario_two_crosses_breakpoints(self):
        spec = scenario_spec("II", length=1000)
        jumped = 0
        for stream in spec.streams:
            params = np.array([class_params(stream.class_id, stream.rate_at(i))
                               for i in range(stream.length)])
            if np.abs(np.diff(params, axis=0)).max() > 0.5:
                jumped += 1
        assert jumped == 5   # every class in II jumps at least once

    def test_scenario_three_reappearance(self):
        frames = build_scenario("III", seed=0, length=1600)
        ds = dl.assemble_batches(frames, 100)
        slots_per_class = {}
        for view in ds.slots:
            for batch in view.batches:
                name = batch.majority_true_label()
                slots_per_class.setdefault(name, []).append(view.slot_index)
        gaps = 0
        for name, slots in slots_per_class.items():
            slots = sorted(set(slots))
            if any(b - a > 1 for a, b in zip(slots, slots[1:])):
                gaps += 1
        assert gaps >= 3   # C1, C2 and C6 all vanish and return

    def test_scenario_four_registry_grows_mid_run(self):
        frames = build_scenario("IV", seed=0, length=2900)
        first_seen = {}
        for fr in sorted(frames, key=lambda f: f.global_index):
            first_seen.setdefault(fr.true_label, fr.global_index)
        assert max(first_seen.values()) > 0

    def test_conflicting_override_reports_violations(self):
        from driftlab.synthetic import StreamSpec
        bad = StreamSpec("x", "C1", 0, 100, ((0.2, 0.4),))
        with pytest.raises(UndefinedSegmentError) as err:
            bad.segments()
        assert "C1" in str(err.value)

    def test_unknown_scenario(self):
        with pytest.raises(KeyError):
            scenario_spec("V")

    def test_build_is_deterministic(self):
        a = build_scenario("I", seed=9, length=600)
        b = build_scenario("I", seed=9, length=600)
        assert all(np.array_equal(x.features, y.features) for x, y in zip(a, b))
        assert len(a) == 5 * 600
