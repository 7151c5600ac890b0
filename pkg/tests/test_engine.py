import numpy as np
import pytest

from conftest import flat_histogram, make_detection, make_track, peaked_histogram
from mftrack.engine import TrackingEngine, match_frame
from mftrack.errors import InputError, SequencingError
from mftrack.types import ObjectState, TrackerConfig


class TestMatchFrame:
    def test_no_detections(self, cfg):
        tracks = [make_track(1, ObjectState(0, 0, 10, 10))]
        r = match_frame(tracks, [], cfg, frame_id=1)
        assert r.pairs == []
        assert r.unmatched_tracks == [1]
        assert r.unmatched_detections == []

    def test_exact_match_scores_one(self, cfg):
        t = make_track(1, ObjectState(50, 50, 10, 10))
        d = make_detection(1, 0, 50, 50)
        r = match_frame([t], [d], cfg, frame_id=1)
        assert r.pairs == [(1, 0, pytest.approx(1.0))]
        assert r.unmatched_tracks == [] and r.unmatched_detections == []

    def test_greedy_prefers_higher_score(self, cfg):
        # the nearer track wins the single detection; the other stays unmatched
        t1 = make_track(1, ObjectState(50.0, 50.0, 10, 10))
        t2 = make_track(2, ObjectState(52.0, 50.0, 10, 10))
        d = make_detection(1, 0, 50.5, 50.0)
        r = match_frame([t1, t2], [d], cfg, frame_id=1)
        assert len(r.pairs) == 1
        assert r.pairs[0][0] == 1
        assert r.unmatched_tracks == [2]

    def test_tie_broken_by_lower_track_id(self, cfg):
        t1 = make_track(3, ObjectState(48, 50, 10, 10))
        t2 = make_track(7, ObjectState(52, 50, 10, 10))
        d = make_detection(1, 0, 50, 50)  # equidistant
        r = match_frame([t1, t2], [d], cfg, frame_id=1)
        assert r.pairs[0][0] == 3
        assert r.unmatched_tracks == [7]

    def test_below_threshold_not_matched(self, cfg):
        # d_max = 5 (6x8 box), distance 4.5 -> LS1 = 0.1, GS = 0.775 < 0.8
        t = make_track(1, ObjectState(0, 0, 6, 8))
        d = make_detection(1, 0, 4.5, 0, l=6, h=8)
        r = match_frame([t], [d], cfg, frame_id=1)
        assert r.pairs == []
        assert r.unmatched_tracks == [1]
        assert r.unmatched_detections == [0]

    def test_mixed_frame_ids_rejected(self, cfg):
        dets = [make_detection(1, 0, 0, 0), make_detection(2, 1, 5, 5)]
        with pytest.raises(InputError):
            match_frame([], dets, cfg)

    def test_per_track_policy_can_share_a_detection(self):
        cfg = TrackerConfig(assignment_policy="per_track")
        t1 = make_track(1, ObjectState(49, 50, 10, 10))
        t2 = make_track(2, ObjectState(51, 50, 10, 10))
        d = make_detection(1, 0, 50, 50)
        r = match_frame([t1, t2], [d], cfg, frame_id=1)
        assert [p[0] for p in r.pairs] == [1, 2]
        assert all(p[1] == 0 for p in r.pairs)

    def test_greedy_never_shares_detections_random(self, cfg):
        rng = np.random.default_rng(17)
        for _ in range(30):
            tracks = [make_track(i + 1, ObjectState(*rng.uniform(10, 200, 2), 12, 24))
                      for i in range(rng.integers(1, 8))]
            dets = [make_detection(1, j, *rng.uniform(10, 200, 2), l=12, h=24)
                    for j in range(rng.integers(0, 8))]
            r = match_frame(tracks, dets, cfg, frame_id=1)
            tids = [p[0] for p in r.pairs]
            dids = [p[1] for p in r.pairs]
            assert len(tids) == len(set(tids))
            assert len(dids) == len(set(dids))
            assert all(p[2] >= cfg.t1 for p in r.pairs)


class TestStep:
    def test_detections_spawn_tracks(self, cfg):
        eng = TrackingEngine(cfg)
        report = eng.step(0, [make_detection(0, j, 50 + 100 * j, 50) for j in range(3)])
        assert report.new_tracks == [1, 2, 3]
        assert all(t.n_r == 1 and t.t_w == 0 for t in eng.tracks.values())

    def test_gap_resume_keeps_identity(self, cfg):
        eng = TrackingEngine(cfg)
        hist = peaked_histogram()
        for f in range(1, 6):  # matched frames 1..5
            eng.step(f, [make_detection(f, 0, 10.0 + 2 * f, 50, hist=hist)])
        for f in range(6, 9):  # absent 6..8
            eng.step(f, [])
        eng.step(9, [make_detection(9, 0, 10.0 + 2 * 9, 50, hist=hist)])
        assert len(eng.tracks) == 1
        t = eng.tracks[1]
        assert t.status == "active"
        assert t.t_w == 3
        assert t.n_r == 6
        assert t.f_l == 9

    def test_low_score_detection_spawns_new_track(self, cfg):
        eng = TrackingEngine(cfg)
        eng.step(0, [make_detection(0, 0, 0, 0, l=6, h=8)])
        report = eng.step(1, [make_detection(1, 0, 4.5, 0, l=6, h=8)])
        assert report.new_tracks == [2]
        assert eng.tracks[1].status == "waiting"
        assert report.waiting == [1]

    def test_waiting_bookkeeping(self, cfg):
        eng = TrackingEngine(cfg)
        eng.step(0, [make_detection(0, 0, 50, 50)])
        t = eng.tracks[1]
        eng.step(1, [make_detection(1, 0, 51, 50)])
        assert (t.n_r, t.t_w) == (2, 0)
        eng.step(2, [])
        assert (t.n_r, t.t_w) == (2, 1)
        assert t.states[2] == t.states[1]  # held corrected state

    def test_span_invariant_every_step(self, cfg):
        rng = np.random.default_rng(23)
        eng = TrackingEngine(cfg)
        for f in range(60):
            dets = []
            if rng.random() < 0.8:
                dets.append(make_detection(f, 0, 30.0 + f, 50))
            if rng.random() < 0.5:
                dets.append(make_detection(f, 1, 30.0 + f, 300))
            eng.step(f, dets)
            for t in eng.tracks.values():
                if t.is_live():
                    assert t.t_w + t.n_r == f - t.birth_frame + 1

    def test_out_of_order_frame_rejected(self, cfg):
        eng = TrackingEngine(cfg)
        eng.step(5, [])
        with pytest.raises(SequencingError):
            eng.step(5, [])
        with pytest.raises(SequencingError):
            eng.step(3, [])

    def test_duplicate_detection_id_rejected(self, cfg):
        eng = TrackingEngine(cfg)
        with pytest.raises(InputError):
            eng.step(0, [make_detection(0, 1, 10, 10), make_detection(0, 1, 90, 90)])

    def test_deterministic(self, cfg):
        def run():
            rng = np.random.default_rng(99)
            eng = TrackingEngine(cfg)
            for f in range(80):
                dets = [make_detection(f, j, float(rng.uniform(10, 400)), float(rng.uniform(10, 400)))
                        for j in range(int(rng.integers(0, 5)))]
                eng.step(f, dets)
            return eng.trajectories()

        a, b = run(), run()
        assert a == b
