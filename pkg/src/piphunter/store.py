"""Append-oriented persistence for the hunt pipeline.

A JSONL journal per store directory is the durable record; in-memory
indexes are rebuilt by replay on open. Single-writer, multi-reader: every
mutation serializes through one lock and is journaled before the index is
updated.
"""

from __future__ import annotations

import dataclasses
import json
import threading
from dataclasses import dataclass, field
from pathlib import Path

from .errors import InvalidEntity, ParseError

SCHEMA_VERSION = 1
MAX_TEXT_CODEPOINTS = 10_000

COLLECTIONS = ("posts", "accounts", "contacts", "keywords", "labels", "revisits")


@dataclass
class Engagement:
    likes: int = 0
    replies: int = 0
    retweets: int = 0
    quotes: int = 0


@dataclass
class Post:
    id: str
    author_id: str
    text: str
    hashtags: list[str] = field(default_factory=list)
    mentions: list[str] = field(default_factory=list)
    media_refs: list[str] = field(default_factory=list)
    poll_options: list[str] = field(default_factory=list)
    created_at: float = 0.0  # days since corpus epoch
    engagement: Engagement = field(default_factory=Engagement)
    label: dict | None = None  # {"is_pip","category","labeler","time"}

    def validate(self) -> None:
        if not self.id:
            raise InvalidEntity("post id must be nonempty")
        if len(self.text) > MAX_TEXT_CODEPOINTS:
            raise InvalidEntity("post text exceeds the store cap")
        if len(self.poll_options) > 4:
            raise InvalidEntity("at most 4 poll options")
        eng = self.engagement
        if min(eng.likes, eng.replies, eng.retweets, eng.quotes) < 0:
            raise InvalidEntity("engagement counts must be >= 0")


@dataclass
class Account:
    id: str
    handle: str
    profile_text: str = ""
    registered_at: float = 0.0
    is_pip: bool = False  # profile classified as a PIP

    def validate(self) -> None:
        if not self.id:
            raise InvalidEntity("account id must be nonempty")
        if len(self.profile_text) > MAX_TEXT_CODEPOINTS:
            raise InvalidEntity("profile text exceeds the store cap")


@dataclass
class LabelRecord:
    target: str  # post or account id
    is_pip: bool
    category: str | None
    labeler_id: str
    time: float = 0.0
    resolved_conflict: bool = False

    @property
    def id(self) -> str:
        return f"{self.target}::{self.labeler_id}"

    def validate(self) -> None:
        if not self.target or not self.labeler_id:
            raise InvalidEntity("label needs target and labeler ids")


def _entity_to_dict(entity) -> dict:
    return dataclasses.asdict(entity)


def _entity_from_dict(collection: str, data: dict):
    if collection == "posts":
        data = dict(data)
        data["engagement"] = Engagement(**data.get("engagement", {}))
        return Post(**data)
    if collection == "accounts":
        return Account(**data)
    if collection == "labels":
        return LabelRecord(**data)
    return dict(data)  # contacts/keywords/revisits stay schemaless dicts


class Store:
    """Durable entity store over one directory."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._journal_path = self.root / "journal.jsonl"
        self._lock = threading.Lock()
        self._index: dict[str, dict[str, object]] = {c: {} for c in COLLECTIONS}
        if self._journal_path.exists():
            self._replay()
        self._journal_fh = None

    def close(self) -> None:
        if self._journal_fh is not None:
            self._journal_fh.close()
            self._journal_fh = None

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def _replay(self) -> None:
        with self._journal_path.open(encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    rec = json.loads(line)
                    collection = rec["collection"]
                    entity = _entity_from_dict(collection, rec["entity"])
                    key = rec["id"]
                except (ValueError, KeyError, TypeError) as exc:
                    raise ParseError(f"bad journal line {lineno}: {exc}", lineno)
                self._index[collection][key] = entity

    def _journal(self, collection: str, key: str, entity) -> None:
        rec = {
            "schema_version": SCHEMA_VERSION,
            "collection": collection,
            "id": key,
            "entity": _entity_to_dict(entity) if dataclasses.is_dataclass(entity) else entity,
        }
        if self._journal_fh is None:
            self._journal_fh = self._journal_path.open("a", encoding="utf-8")
        self._journal_fh.write(json.dumps(rec, ensure_ascii=False) + "\n")
        self._journal_fh.flush()

    def _put(self, collection: str, key: str, entity) -> str:
        with self._lock:
            self._journal(collection, key, entity)
            self._index[collection][key] = entity
        return key

    def put_post(self, post: Post) -> str:
        post.validate()
        return self._put("posts", post.id, post)

    def put_account(self, account: Account) -> str:
        account.validate()
        return self._put("accounts", account.id, account)

    def put_label(self, label: LabelRecord) -> str:
        label.validate()
        return self._put("labels", label.id, label)

    def put_contact(self, contact: dict) -> str:
        if not contact.get("value"):
            raise InvalidEntity("contact value must be nonempty")
        key = f"{contact['kind']}::{contact['value']}"
        return self._put("contacts", key, contact)

    def put_keyword(self, keyword: dict) -> str:
        if not keyword.get("value"):
            raise InvalidEntity("keyword value must be nonempty")
        key = f"{keyword['kind']}::{keyword['value']}"
        return self._put("keywords", key, keyword)

    def put_revisit(self, record: dict) -> str:
        key = f"{record['post_id']}@{record['probe_time']}"
        return self._put("revisits", key, record)

    def get(self, collection: str, key: str):
        return self._index[collection].get(key)

    def all(self, collection: str) -> list:
        return list(self._index[collection].values())

    def count(self, collection: str) -> int:
        return len(self._index[collection])

    def is_novel(self, post_id: str) -> bool:
        """True iff the post id has never been stored."""
        return post_id not in self._index["posts"]

    def export_jsonl(self, collection: str, path: str | Path) -> int:
        path = Path(path)
        n = 0
        with path.open("w", encoding="utf-8") as fh:
            for key, entity in self._index[collection].items():
                rec = {
                    "schema_version": SCHEMA_VERSION,
                    "collection": collection,
                    "id": key,
                    "entity": _entity_to_dict(entity)
                    if dataclasses.is_dataclass(entity)
                    else entity,
                }
                fh.write(json.dumps(rec, ensure_ascii=False) + "\n")
                n += 1
        return n

    def import_jsonl(self, path: str | Path) -> int:
        path = Path(path)
        n = 0
        with path.open(encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    rec = json.loads(line)
                    if rec.get("schema_version") != SCHEMA_VERSION:
                        raise ValueError("unsupported schema version")
                    collection = rec["collection"]
                    if collection not in COLLECTIONS:
                        raise ValueError(f"unknown collection {collection!r}")
                    entity = _entity_from_dict(collection, rec["entity"])
                    key = rec["id"]
                except (ValueError, KeyError, TypeError) as exc:
                    raise ParseError(f"line {lineno}: {exc}", lineno)
                self._put(collection, key, entity)
                n += 1
        return n

    def pip_posts(self) -> list[Post]:
        return [p for p in self.all("posts") if p.label and p.label.get("is_pip")]

    def pip_count_by_account(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for p in self.pip_posts():
            counts[p.author_id] = counts.get(p.author_id, 0) + 1
        return counts
