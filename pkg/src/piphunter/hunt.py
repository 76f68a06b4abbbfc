"""The snowballing PIP hunter loop.

Each round samples active keywords under a budget, retrieves posts (and
profiles for account keywords), classifies them, persists new PIPs, updates
per-keyword RCP stats, filters ineffective keywords onto a blocklist, and
generates fresh keywords from the newly found PIPs.
"""

from __future__ import annotations

import json
import logging
import random
from dataclasses import dataclass, field
from pathlib import Path

from .errors import RateLimited
from .store import Account, Post

logger = logging.getLogger(__name__)

DEFAULT_RCP_THRESHOLD = 0.01
DEFAULT_KEYWORD_BUDGET = 60_000
DEFAULT_TIMELINE_LIMIT = 100
UNBLOCK_MIN_ROUNDS = 4


@dataclass
class KeywordRoundStats:
    round_id: int
    retrieved: int
    new_pips: int

    @property
    def rcp(self) -> float | None:
        if self.retrieved == 0:
            return None
        return self.new_pips / self.retrieved


@dataclass
class Keyword:
    kind: str  # "hashtag" | "account"
    value: str
    state: str = "active"  # | "blocked"
    blocked_rounds: int = 0
    history: list[KeywordRoundStats] = field(default_factory=list)

    def key(self) -> tuple[str, str]:
        return (self.kind, self.value)


class KeywordSet:
    def __init__(self):
        self._by_key: dict[tuple[str, str], Keyword] = {}

    def add(self, keyword: Keyword) -> bool:
        """Insert unless already present; returns True when new."""
        if keyword.key() in self._by_key:
            return False
        self._by_key[keyword.key()] = keyword
        return True

    def get(self, kind: str, value: str) -> Keyword | None:
        return self._by_key.get((kind, value))

    def all(self) -> list[Keyword]:
        return sorted(self._by_key.values(), key=lambda k: k.key())

    def active(self) -> list[Keyword]:
        return [k for k in self.all() if k.state == "active"]

    def blocked(self) -> list[Keyword]:
        return [k for k in self.all() if k.state == "blocked"]

    def __len__(self) -> int:
        return len(self._by_key)

    @classmethod
    def from_seed_file(cls, path: str | Path) -> "KeywordSet":
        """Seed file: UTF-8 lines `hashtag:<value>` or `account:<value>`."""
        kset = cls()
        for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            kind, _, value = line.partition(":")
            if kind not in ("hashtag", "account") or not value:
                raise ValueError(f"bad seed keyword on line {lineno}: {line!r}")
            kset.add(Keyword(kind=kind, value=value))
        return kset


def compute_rcp(stats: KeywordRoundStats) -> float | None:
    """new PIPs / retrieved; undefined (None) when nothing was retrieved."""
    return stats.rcp


def filter_keywords(
    kset: KeywordSet,
    threshold: float,
    regenerated: set[tuple[str, str]] = frozenset(),
) -> tuple[list[Keyword], list[Keyword]]:
    """Apply the two lifecycle rules.

    Active keywords whose latest-round RCP fell below the threshold are
    blocked. Blocked keywords unused for >= UNBLOCK_MIN_ROUNDS rounds that
    were re-extracted this round go back to active. Keywords with an
    undefined RCP (0 retrieved) keep their state and the round does not
    count as used.
    """
    if not (0 < threshold <= 1):
        raise ValueError("threshold must be in (0, 1]")
    blocked: list[Keyword] = []
    unblocked: list[Keyword] = []
    for kw in kset.all():
        if kw.state == "active":
            if kw.history:
                rcp = kw.history[-1].rcp
                if rcp is not None and rcp < threshold:
                    kw.state = "blocked"
                    kw.blocked_rounds = 0
                    blocked.append(kw)
        else:
            kw.blocked_rounds += 1
            if kw.blocked_rounds >= UNBLOCK_MIN_ROUNDS and kw.key() in regenerated:
                kw.state = "active"
                kw.blocked_rounds = 0
                unblocked.append(kw)
    return blocked, unblocked


def generate_keywords(new_pips: list[Post], pip_accounts: list[Account]) -> list[Keyword]:
    """Hashtag keywords from every hashtag of every new PIP; account
    keywords from PIP authors and accounts with PIP profiles."""
    seen: set[tuple[str, str]] = set()
    out: list[Keyword] = []

    def push(kind: str, value: str) -> None:
        if value and (kind, value) not in seen:
            seen.add((kind, value))
            out.append(Keyword(kind=kind, value=value))

    for post in new_pips:
        for tag in post.hashtags:
            push("hashtag", tag)
        push("account", post.author_id)
    for account in pip_accounts:
        push("account", account.id)
    return out


def sample_keywords(kset: KeywordSet, budget: int, seed: int) -> list[Keyword]:
    """Uniform seeded sample of min(budget, active) active keywords."""
    if budget < 1:
        raise ValueError("budget must be >= 1")
    active = kset.active()
    if len(active) <= budget:
        return active
    rng = random.Random(seed)
    return rng.sample(active, budget)


@dataclass
class HuntConfig:
    rcp_threshold: float = DEFAULT_RCP_THRESHOLD
    keyword_budget: int = DEFAULT_KEYWORD_BUDGET
    timeline_limit: int = DEFAULT_TIMELINE_LIMIT
    search_limit: int = 100
    seed: int = 42


@dataclass
class RoundReport:
    round_id: int
    keywords_used: int
    posts_scanned: int
    new_pips: int
    new_keywords: int
    blocked_this_round: int
    unblocked_this_round: int
    partial: bool = False

    def to_dict(self) -> dict:
        return self.__dict__.copy()


class Hunter:
    """Drives hunting rounds against a PostSource."""

    def __init__(self, keywords: KeywordSet, source, classifier, store, config=None):
        self.keywords = keywords
        self.source = source
        self.classifier = classifier  # callable: text -> PipLabel
        self.store = store
        self.config = config or HuntConfig()
        self.round_id = 0

    @staticmethod
    def post_text(post: Post) -> str:
        """Classify every textual component: promo can hide in a poll
        option while the main text stays benign."""
        return " ".join([post.text] + [o for o in post.poll_options if o])

    def run_round(self) -> RoundReport:
        config = self.config
        self.round_id += 1
        sampled = sample_keywords(
            self.keywords, config.keyword_budget, config.seed + self.round_id
        )
        if not sampled:
            raise ValueError("no active keywords to hunt with")

        posts_scanned = 0
        new_pips: list[Post] = []
        pip_accounts: list[Account] = []
        partial = False

        for kw in sampled:
            try:
                if kw.kind == "hashtag":
                    posts = self.source.search_hashtag(kw.value, config.search_limit)
                else:
                    posts = self.source.account_timeline(kw.value, config.timeline_limit)
                    profile = self.source.get_profile(kw.value)
                    if profile is not None and self.classifier(profile.profile_text).is_pip:
                        profile.is_pip = True
                        self.store.put_account(profile)
                        pip_accounts.append(profile)
            except RateLimited as exc:
                logger.warning("rate limited (retry after %s); round is partial", exc.retry_after)
                partial = True
                break
            retrieved = len(posts)
            posts_scanned += retrieved
            kw_new = 0
            for post in posts:
                if not self.store.is_novel(post.id):
                    continue
                label = self.classifier(self.post_text(post))
                if label.is_pip:
                    post.label = {"is_pip": True, "confidence": label.confidence}
                    self.store.put_post(post)
                    new_pips.append(post)
                    kw_new += 1
            kw.history.append(
                KeywordRoundStats(round_id=self.round_id, retrieved=retrieved, new_pips=kw_new)
            )

        generated = generate_keywords(new_pips, pip_accounts)
        regenerated = {kw.key() for kw in generated}
        new_count = sum(1 for kw in generated if self.keywords.add(kw))
        blocked, unblocked = filter_keywords(
            self.keywords, config.rcp_threshold, regenerated
        )
        return RoundReport(
            round_id=self.round_id,
            keywords_used=len(sampled),
            posts_scanned=posts_scanned,
            new_pips=len(new_pips),
            new_keywords=new_count,
            blocked_this_round=len(blocked),
            unblocked_this_round=len(unblocked),
            partial=partial,
        )

    def run(self, rounds: int, report_log: str | Path | None = None) -> list[RoundReport]:
        reports = []
        for _ in range(rounds):
            report = self.run_round()
            reports.append(report)
            if report_log is not None:
                with Path(report_log).open("a", encoding="utf-8") as fh:
                    fh.write(json.dumps(report.to_dict()) + "\n")
        return reports
