"""Durable store: journal replay, idempotent upserts, validation, and
import/export."""

import json

import pytest

from piphunter.errors import InvalidEntity, ParseError
from piphunter.store import Account, Engagement, LabelRecord, Post, Store


def _post(pid="p1", **kwargs):
    kwargs.setdefault("text", "hello")
    return Post(id=pid, author_id="a1", **kwargs)


class TestValidation:
    def test_empty_post_id(self, tmp_path):
        with pytest.raises(InvalidEntity):
            Store(tmp_path).put_post(Post(id="", author_id="a", text="x"))

    def test_text_cap(self, tmp_path):
        with pytest.raises(InvalidEntity):
            Store(tmp_path).put_post(_post(text="x" * 10_001))

    def test_poll_option_cap(self, tmp_path):
        with pytest.raises(InvalidEntity):
            Store(tmp_path).put_post(_post(poll_options=["a"] * 5))

    def test_negative_engagement(self, tmp_path):
        with pytest.raises(InvalidEntity):
            Store(tmp_path).put_post(_post(engagement=Engagement(likes=-1)))

    def test_label_requires_ids(self, tmp_path):
        with pytest.raises(InvalidEntity):
            Store(tmp_path).put_label(
                LabelRecord(target="", is_pip=True, category=None, labeler_id="x")
            )

    def test_contact_requires_value(self, tmp_path):
        with pytest.raises(InvalidEntity):
            Store(tmp_path).put_contact({"kind": "QQ", "value": ""})


class TestJournalReplay:
    def test_replay_reconstructs_indexes(self, tmp_path):
        store = Store(tmp_path)
        store.put_post(_post("p1", hashtags=["x"], label={"is_pip": True}))
        store.put_account(Account(id="a1", handle="h", profile_text="bio"))
        store.put_contact({"kind": "WeChat", "value": "w1", "post_id": "p1"})
        store.put_label(LabelRecord("p1", True, "Gambling", "lab1"))
        store.put_keyword({"kind": "hashtag", "value": "x", "state": "active"})
        store.put_revisit({"post_id": "p1", "probe_time": 7.0, "status": "reachable"})
        store.close()

        reopened = Store(tmp_path)
        assert reopened.get("posts", "p1").hashtags == ["x"]
        assert reopened.get("accounts", "a1").profile_text == "bio"
        assert reopened.get("contacts", "WeChat::w1")["post_id"] == "p1"
        assert reopened.get("labels", "p1::lab1").category == "Gambling"
        assert reopened.get("keywords", "hashtag::x")["state"] == "active"
        assert reopened.get("revisits", "p1@7.0")["status"] == "reachable"
        reopened.close()

    def test_simulated_crash_replays_identically(self, tmp_path):
        """Drop the store without close(); every acknowledged write must
        survive because the journal is flushed per mutation."""
        store = Store(tmp_path)
        for i in range(20):
            store.put_post(_post(f"p{i}"))
        del store  # no close: simulated crash

        survivor = Store(tmp_path)
        assert survivor.count("posts") == 20
        assert {p.id for p in survivor.all("posts")} == {f"p{i}" for i in range(20)}
        survivor.close()

    def test_upsert_latest_wins(self, tmp_path):
        store = Store(tmp_path)
        store.put_post(_post("p1"))
        store.put_post(_post("p1", text="updated"))
        store.close()
        reopened = Store(tmp_path)
        assert reopened.get("posts", "p1").text == "updated"
        assert reopened.count("posts") == 1
        reopened.close()

    def test_corrupt_journal_line_reports_lineno(self, tmp_path):
        store = Store(tmp_path)
        store.put_post(_post("p1"))
        store.close()
        with (tmp_path / "journal.jsonl").open("a", encoding="utf-8") as fh:
            fh.write("{not json\n")
        with pytest.raises(ParseError) as exc:
            Store(tmp_path)
        assert exc.value.line_number == 2

    def test_is_novel(self, tmp_path):
        store = Store(tmp_path)
        assert store.is_novel("p1")
        store.put_post(_post("p1"))
        assert not store.is_novel("p1")
        store.close()


class TestExportImport:
    def test_round_trip(self, tmp_path):
        src = Store(tmp_path / "src")
        src.put_post(_post("p1", label={"is_pip": True, "category": "Gambling"}))
        src.put_post(_post("p2"))
        out = tmp_path / "posts.jsonl"
        assert src.export_jsonl("posts", out) == 2
        src.close()

        dst = Store(tmp_path / "dst")
        assert dst.import_jsonl(out) == 2
        assert dst.get("posts", "p1").label == {"is_pip": True, "category": "Gambling"}
        dst.close()

    def test_import_rejects_bad_schema(self, tmp_path):
        bad = tmp_path / "bad.jsonl"
        bad.write_text(
            json.dumps({"schema_version": 99, "collection": "posts", "id": "p",
                        "entity": {}}) + "\n",
            encoding="utf-8",
        )
        with pytest.raises(ParseError) as exc:
            Store(tmp_path / "s").import_jsonl(bad)
        assert exc.value.line_number == 1

    def test_import_rejects_unknown_collection(self, tmp_path):
        bad = tmp_path / "bad.jsonl"
        bad.write_text(
            json.dumps({"schema_version": 1, "collection": "widgets", "id": "w",
                        "entity": {}}) + "\n",
            encoding="utf-8",
        )
        with pytest.raises(ParseError):
            Store(tmp_path / "s").import_jsonl(bad)


class TestQueries:
    def test_pip_posts_and_counts(self, tmp_path):
        store = Store(tmp_path)
        store.put_post(_post("p1", label={"is_pip": True}))
        store.put_post(Post(id="p2", author_id="a2", text="", label={"is_pip": True}))
        store.put_post(Post(id="p3", author_id="a1", text="", label={"is_pip": True}))
        store.put_post(_post("p4"))  # unlabeled
        assert {p.id for p in store.pip_posts()} == {"p1", "p2", "p3"}
        assert store.pip_count_by_account() == {"a1": 2, "a2": 1}
        store.close()

    def test_label_id_composition(self):
        rec = LabelRecord("p1", True, None, "lab1")
        assert rec.id == "p1::lab1"
