"""Revisit monitoring: cohorts, evasion rates, unavailability breakdown,
engagement curves, and the corpus report."""

import pytest

from piphunter import monitor
from piphunter.errors import EmptyCohort, EmptyStore, NoProbeData, NoUnavailable
from piphunter.monitor import (
    REACHABLE,
    UNAVAILABLE_STATUSES,
    RevisitRecord,
    build_cohorts,
    corpus_report,
    engagement_curve,
    evasion_rate,
    schedule_revisits,
    unavailability_breakdown,
)
from piphunter.store import Engagement, Post, Store


def _post(pid, created_at=0.0, likes=0):
    return Post(
        id=pid, author_id="a1", text="", created_at=created_at,
        engagement=Engagement(likes=likes),
    )


class _FixedSource:
    """Availability source with a per-post takedown day."""

    def __init__(self, down_day, reason="suspended_account"):
        self.down_day = down_day
        self.reason = reason

    def check_availability(self, post_id, t):
        day = self.down_day.get(post_id)
        if day is not None and t >= day:
            return self.reason
        return REACHABLE


class TestRevisitRecord:
    def test_unknown_status_rejected(self):
        with pytest.raises(ValueError):
            RevisitRecord(post_id="p", probe_time=1.0, status="gone")

    @pytest.mark.parametrize("status", (REACHABLE,) + UNAVAILABLE_STATUSES)
    def test_known_statuses_accepted(self, status):
        assert RevisitRecord("p", 1.0, status).status == status


class TestCohorts:
    def test_weekly_windows(self):
        posts = [_post("p1", 0.5), _post("p2", 6.9), _post("p3", 7.1)]
        cohorts = build_cohorts(posts, window_days=7)
        assert [c.member_post_ids for c in cohorts] == [["p1", "p2"], ["p3"]]
        assert cohorts[0].window_start == 0.0 and cohorts[0].window_end == 7.0

    def test_window_validation(self):
        with pytest.raises(ValueError):
            monitor.EvasionCohort("c", window_start=5.0, window_end=1.0,
                                  member_post_ids=[])


class TestScheduleAndRate:
    def test_probe_grid(self):
        source = _FixedSource({})
        records = schedule_revisits(["p1", "p2"], cadence_days=7, source=source,
                                    n_probes=3, start_time=0.0)
        times = sorted({r.probe_time for r in records})
        assert times == [7.0, 14.0, 21.0]
        assert len(records) == 6

    def test_empty_cohort_rejected(self):
        with pytest.raises(EmptyCohort):
            schedule_revisits([], 7, _FixedSource({}), 1)

    def test_probe_failures_skipped(self):
        class Flaky(_FixedSource):
            def check_availability(self, post_id, t):
                if post_id == "bad":
                    raise RuntimeError("probe failed")
                return REACHABLE

        records = schedule_revisits(["good", "bad"], 7, Flaky({}), 2)
        assert {r.post_id for r in records} == {"good"}

    def test_evasion_rate_value(self):
        source = _FixedSource({"p1": 10.0})
        cohort = ["p1", "p2", "p3", "p4"]
        records = schedule_revisits(cohort, 7, source, 2)
        assert evasion_rate(cohort, records, 7.0) == 1.0
        assert evasion_rate(cohort, records, 14.0) == 0.75

    def test_no_probe_data(self):
        with pytest.raises(NoProbeData):
            evasion_rate(["p1"], [], 7.0)

    def test_non_increasing_under_absorbing_source(self):
        source = _FixedSource({"p1": 8.0, "p2": 15.0, "p3": 22.0})
        cohort = ["p1", "p2", "p3", "p4"]
        records = schedule_revisits(cohort, 7, source, 4)
        rates = [evasion_rate(cohort, records, 7.0 * k) for k in range(1, 5)]
        assert all(a >= b for a, b in zip(rates, rates[1:]))
        assert all(0.0 <= r <= 1.0 for r in rates)


class TestBreakdown:
    def test_fractions_sum_to_one(self):
        records = [
            RevisitRecord("p1", 1.0, "suspended_account"),
            RevisitRecord("p2", 1.0, "suspended_account"),
            RevisitRecord("p3", 1.0, "deleted_by_author"),
            RevisitRecord("p4", 1.0, REACHABLE),
        ]
        shares = unavailability_breakdown(records)
        assert sum(shares.values()) == pytest.approx(1.0)
        assert shares["suspended_account"] == pytest.approx(2 / 3)
        assert set(shares) == set(UNAVAILABLE_STATUSES)

    def test_all_reachable_rejected(self):
        with pytest.raises(NoUnavailable):
            unavailability_breakdown([RevisitRecord("p", 1.0, REACHABLE)])


class TestEngagementCurve:
    def test_bucket_means(self):
        pips = [
            _post("p1", created_at=10.0, likes=10),
            _post("p2", created_at=10.0, likes=20),
            _post("p3", created_at=5.0, likes=40),
        ]
        buckets = engagement_curve(pips, crawl_time=12.0)
        by_day = {b.elapse_days: b for b in buckets}
        assert by_day[2].n_posts == 2 and by_day[2].mean_likes == 15.0
        assert by_day[7].mean_likes == 40.0

    def test_out_of_range_omitted(self):
        pips = [_post("p1", created_at=0.0)]
        assert engagement_curve(pips, crawl_time=100.0, max_days=60) == []

    def test_max_days_validated(self):
        with pytest.raises(ValueError):
            engagement_curve([], crawl_time=1.0, max_days=0)


class TestCorpusReport:
    def _store(self, tmp_path):
        store = Store(tmp_path)
        for i, cat in enumerate(["Gambling", "Gambling", "Pornography"]):
            store.put_post(
                Post(
                    id=f"p{i}", author_id=f"a{i % 2}", text="x",
                    label={"is_pip": True, "category": cat, "language": "zh"},
                )
            )
        store.put_post(Post(id="benign", author_id="a9", text="y"))
        return store

    def test_shares(self, tmp_path):
        report = corpus_report(self._store(tmp_path), scanned_total=40)
        assert report["n_pips"] == 3
        assert report["category_shares"]["Gambling"] == pytest.approx(2 / 3)
        assert report["language_shares"] == {"zh": 1.0}
        assert report["pip_ratio"] == pytest.approx(3 / 40)

    def test_account_concentration(self, tmp_path):
        report = corpus_report(self._store(tmp_path), top_k=1)
        assert report["top_account_share"] == pytest.approx(2 / 3)
        cdf = report["account_cdf"]
        assert cdf[-1]["pip_share"] == pytest.approx(1.0)

    def test_empty_store_rejected(self, tmp_path):
        with pytest.raises(EmptyStore):
            corpus_report(Store(tmp_path))
