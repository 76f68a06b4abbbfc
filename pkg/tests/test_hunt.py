"""Keyword lifecycle, RCP, sampling, and the hunting loop."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from piphunter import hunt
from piphunter.classify import PipLabel
from piphunter.errors import RateLimited
from piphunter.hunt import (
    UNBLOCK_MIN_ROUNDS,
    Hunter,
    HuntConfig,
    Keyword,
    KeywordRoundStats,
    KeywordSet,
    compute_rcp,
    filter_keywords,
    generate_keywords,
    sample_keywords,
)
from piphunter.store import Account, Post, Store


def _kw(kind="hashtag", value="t", state="active", blocked_rounds=0, history=None):
    return Keyword(
        kind=kind, value=value, state=state,
        blocked_rounds=blocked_rounds, history=history or [],
    )


class TestRcp:
    def test_defined(self):
        assert compute_rcp(KeywordRoundStats(1, retrieved=200, new_pips=3)) == 3 / 200

    def test_undefined_when_nothing_retrieved(self):
        assert compute_rcp(KeywordRoundStats(1, retrieved=0, new_pips=0)) is None

    @settings(max_examples=100, deadline=None)
    @given(st.integers(1, 10_000), st.integers(0, 10_000))
    def test_bounds(self, retrieved, new_pips):
        new_pips = min(new_pips, retrieved)
        rcp = compute_rcp(KeywordRoundStats(1, retrieved, new_pips))
        assert 0.0 <= rcp <= 1.0


class TestLifecycle:
    def test_blocks_below_threshold(self):
        kset = KeywordSet()
        kw = _kw(history=[KeywordRoundStats(1, 200, 1)])  # RCP 0.5%
        kset.add(kw)
        blocked, unblocked = filter_keywords(kset, threshold=0.01)
        assert blocked == [kw] and kw.state == "blocked"

    def test_keeps_at_or_above_threshold(self):
        kset = KeywordSet()
        kw = _kw(history=[KeywordRoundStats(1, 100, 1)])  # exactly 1%
        kset.add(kw)
        blocked, _ = filter_keywords(kset, threshold=0.01)
        assert blocked == [] and kw.state == "active"

    def test_undefined_rcp_leaves_state_unchanged(self):
        kset = KeywordSet()
        kw = _kw(history=[KeywordRoundStats(1, 0, 0)])
        kset.add(kw)
        blocked, unblocked = filter_keywords(kset, threshold=0.01)
        assert blocked == [] and unblocked == [] and kw.state == "active"

    def test_unblocks_after_enough_unused_rounds_when_regenerated(self):
        kset = KeywordSet()
        kw = _kw(state="blocked")
        kset.add(kw)
        for round_no in range(1, UNBLOCK_MIN_ROUNDS + 1):
            _, unblocked = filter_keywords(
                kset, threshold=0.01, regenerated={kw.key()}
            )
            if round_no < UNBLOCK_MIN_ROUNDS:
                assert unblocked == [] and kw.state == "blocked"
        assert unblocked == [kw] and kw.state == "active" and kw.blocked_rounds == 0

    def test_no_unblock_without_regeneration(self):
        kset = KeywordSet()
        kw = _kw(state="blocked", blocked_rounds=UNBLOCK_MIN_ROUNDS + 3)
        kset.add(kw)
        _, unblocked = filter_keywords(kset, threshold=0.01, regenerated=set())
        assert unblocked == [] and kw.state == "blocked"

    def test_threshold_validated(self):
        with pytest.raises(ValueError):
            filter_keywords(KeywordSet(), threshold=0.0)


class TestKeywordSet:
    def test_add_is_idempotent(self):
        kset = KeywordSet()
        assert kset.add(_kw()) is True
        assert kset.add(_kw()) is False
        assert len(kset) == 1

    def test_seed_file_round_trip(self, tmp_path):
        path = tmp_path / "seeds.txt"
        path.write_text("# comment\nhashtag:casino\naccount:a-1\n\n", encoding="utf-8")
        kset = KeywordSet.from_seed_file(path)
        assert {k.key() for k in kset.all()} == {
            ("hashtag", "casino"), ("account", "a-1"),
        }

    def test_seed_file_rejects_bad_lines(self, tmp_path):
        path = tmp_path / "seeds.txt"
        path.write_text("bogus line\n", encoding="utf-8")
        with pytest.raises(ValueError):
            KeywordSet.from_seed_file(path)


class TestGenerateAndSample:
    def test_generates_from_pips_and_accounts(self):
        post = Post(id="p1", author_id="a1", text="", hashtags=["x", "y"])
        account = Account(id="a2", handle="h")
        keys = {k.key() for k in generate_keywords([post], [account])}
        assert keys == {
            ("hashtag", "x"), ("hashtag", "y"), ("account", "a1"), ("account", "a2"),
        }

    def test_sample_respects_budget_and_seed(self):
        kset = KeywordSet()
        for i in range(50):
            kset.add(_kw(value=f"t{i}"))
        a = sample_keywords(kset, budget=10, seed=3)
        b = sample_keywords(kset, budget=10, seed=3)
        assert len(a) == 10 and a == b
        assert sample_keywords(kset, budget=100, seed=3) == kset.active()

    def test_blocked_keywords_never_sampled(self):
        kset = KeywordSet()
        kset.add(_kw(value="ok"))
        kset.add(_kw(value="bad", state="blocked"))
        sampled = sample_keywords(kset, budget=10, seed=0)
        assert [k.value for k in sampled] == ["ok"]


class _ListSource:
    """Minimal PostSource over fixed hashtag->posts tables."""

    def __init__(self, by_tag, by_account=None, profiles=None):
        self.by_tag = by_tag
        self.by_account = by_account or {}
        self.profiles = profiles or {}

    def search_hashtag(self, tag, limit):
        return [p for p in self.by_tag.get(tag, [])][:limit]

    def account_timeline(self, account_id, limit):
        return [p for p in self.by_account.get(account_id, [])][:limit]

    def get_profile(self, account_id):
        return self.profiles.get(account_id)


def _classifier(pip_marker="PROMO"):
    def score(text):
        hit = pip_marker in text
        return PipLabel(is_pip=hit, confidence=0.99 if hit else 0.01)

    return score


class TestHunter:
    def test_round_discovers_and_generates(self, tmp_path):
        posts = [
            Post(id=f"p{i}", author_id="a1", text="PROMO buy now", hashtags=["seed", "next"])
            for i in range(3)
        ]
        source = _ListSource({"seed": posts})
        kset = KeywordSet()
        kset.add(_kw(value="seed"))
        store = Store(tmp_path)
        hunter = Hunter(kset, source, _classifier(), store)
        report = hunter.run_round()
        assert report.new_pips == 3
        assert store.count("posts") == 3
        assert kset.get("hashtag", "next") is not None
        assert kset.get("account", "a1") is not None
        store.close()

    def test_already_stored_posts_not_recounted(self, tmp_path):
        posts = [Post(id="p0", author_id="a1", text="PROMO", hashtags=["seed"])]
        source = _ListSource({"seed": posts})
        kset = KeywordSet()
        kset.add(_kw(value="seed"))
        store = Store(tmp_path)
        hunter = Hunter(kset, source, _classifier(), store)
        first = hunter.run_round()
        second = hunter.run_round()
        assert first.new_pips == 1 and second.new_pips == 0
        store.close()

    def test_poll_option_promo_detected(self, tmp_path):
        post = Post(
            id="p0", author_id="a1", text="what do you think",
            hashtags=["seed"], poll_options=["yes", "PROMO contact me"],
        )
        source = _ListSource({"seed": [post]})
        kset = KeywordSet()
        kset.add(_kw(value="seed"))
        store = Store(tmp_path)
        report = Hunter(kset, source, _classifier(), store).run_round()
        assert report.new_pips == 1
        store.close()

    def test_pip_profile_flagged(self, tmp_path):
        profile = Account(id="a1", handle="h", profile_text="PROMO in bio")
        source = _ListSource({}, by_account={"a1": []}, profiles={"a1": profile})
        kset = KeywordSet()
        kset.add(_kw(kind="account", value="a1"))
        store = Store(tmp_path)
        Hunter(kset, source, _classifier(), store).run_round()
        assert store.get("accounts", "a1").is_pip is True
        store.close()

    def test_rate_limit_marks_round_partial(self, tmp_path):
        class Limited(_ListSource):
            def search_hashtag(self, tag, limit):
                raise RateLimited(retry_after=3.5)

        kset = KeywordSet()
        kset.add(_kw(value="seed"))
        store = Store(tmp_path)
        report = Hunter(kset, Limited({}), _classifier(), store).run_round()
        assert report.partial is True
        store.close()

    def test_run_writes_report_log(self, tmp_path):
        posts = [Post(id="p0", author_id="a1", text="PROMO", hashtags=["seed"])]
        source = _ListSource({"seed": posts})
        kset = KeywordSet()
        kset.add(_kw(value="seed"))
        store = Store(tmp_path / "store")
        log = tmp_path / "rounds.jsonl"
        reports = Hunter(kset, source, _classifier(), store).run(3, report_log=log)
        assert len(reports) == 3
        assert len(log.read_text().splitlines()) == 3
        store.close()

    def test_no_active_keywords_raises(self, tmp_path):
        store = Store(tmp_path)
        with pytest.raises(ValueError):
            Hunter(KeywordSet(), _ListSource({}), _classifier(), store).run_round()
        store.close()
