"""Deterministic in-process OSN backend over a generated corpus.

Exposes the surface the hunter and monitor need: hashtag search, account
timelines, profiles, availability probes, URL fetch/resolution, and a
threat-intel lookup. A fixed-window rate budget on the simulated clock
makes quota behaviour reproducible.
"""

from __future__ import annotations

import copy
import dataclasses
import math
from dataclasses import dataclass

from ..contacts import resolve_shortened
from ..errors import FetchFailed, RateLimited
from ..monitor import REACHABLE
from ..store import Account, Post
from .generator import SimCorpus


@dataclass
class RateBudget:
    max_requests: int
    window_days: float = 1.0


class Simulator:
    """Read-only OSN view over a SimCorpus with a movable clock."""

    def __init__(self, corpus: SimCorpus, rate_budget: RateBudget | None = None):
        self.corpus = corpus
        self.rate_budget = rate_budget
        self.clock = float(corpus.manifest.posting_window_days)
        self._window_used = 0
        self._window_idx = 0

        self._posts: dict[str, Post] = {p.id: p for p in corpus.posts}
        self._accounts: dict[str, Account] = {a.id: a for a in corpus.accounts}
        self._by_hashtag: dict[str, list[str]] = {}
        self._by_author: dict[str, list[str]] = {}
        for p in sorted(corpus.posts, key=lambda p: (-p.created_at, p.id)):
            for tag in set(p.hashtags):
                self._by_hashtag.setdefault(tag, []).append(p.id)
            self._by_author.setdefault(p.author_id, []).append(p.id)

    # -- clock & quota -------------------------------------------------

    def advance_days(self, days: float) -> float:
        if days < 0:
            raise ValueError("clock only moves forward")
        self.clock += days
        return self.clock

    def _charge(self) -> None:
        if self.rate_budget is None:
            return
        idx = int(self.clock // self.rate_budget.window_days)
        if idx != self._window_idx:
            self._window_idx = idx
            self._window_used = 0
        if self._window_used >= self.rate_budget.max_requests:
            next_window = (idx + 1) * self.rate_budget.window_days
            raise RateLimited(retry_after=next_window - self.clock)
        self._window_used += 1

    # -- availability --------------------------------------------------

    def check_availability(self, post_id: str, t: float | None = None) -> str:
        """Status at time t (default: current clock). Account suspension is
        absorbing and shadows any later per-post deletion."""
        self._charge()
        post = self._posts.get(post_id)
        if post is None:
            return "page_nonexistent"
        at = self.clock if t is None else t
        susp = self.corpus.suspension_day.get(post.author_id, math.inf)
        deletion = self.corpus.deletion_event.get(post_id)
        events = []
        if susp <= at:
            events.append((susp, 0, "suspended_account"))
        if deletion is not None and deletion[0] <= at:
            events.append((deletion[0], 1, deletion[1]))
        if not events:
            return REACHABLE
        return min(events)[2]

    def _is_reachable(self, post_id: str) -> bool:
        post = self._posts[post_id]
        susp = self.corpus.suspension_day.get(post.author_id, math.inf)
        deletion = self.corpus.deletion_event.get(post_id)
        if susp <= self.clock:
            return False
        return deletion is None or deletion[0] > self.clock

    # -- retrieval -----------------------------------------------------

    def search_hashtag(self, tag: str, limit: int = 100) -> list[Post]:
        """Recency-ordered reachable posts carrying the hashtag."""
        self._charge()
        out = []
        for pid in self._by_hashtag.get(tag, []):
            if self._is_reachable(pid):
                out.append(copy.deepcopy(self._posts[pid]))
                if len(out) >= limit:
                    break
        return out

    def account_timeline(self, account_id: str, limit: int = 100) -> list[Post]:
        self._charge()
        susp = self.corpus.suspension_day.get(account_id, math.inf)
        if account_id not in self._accounts or susp <= self.clock:
            return []
        out = []
        for pid in self._by_author.get(account_id, []):
            if self._is_reachable(pid):
                out.append(copy.deepcopy(self._posts[pid]))
                if len(out) >= limit:
                    break
        return out

    def get_profile(self, account_id: str) -> Account | None:
        self._charge()
        susp = self.corpus.suspension_day.get(account_id, math.inf)
        account = self._accounts.get(account_id)
        if account is None or susp <= self.clock:
            return None
        return dataclasses.replace(account)

    # -- URLs & intel --------------------------------------------------

    def fetch(self, url: str) -> tuple[int, str | None]:
        """(status, target): 301 for registered redirect hops, 200 for any
        known landing URL, 404 otherwise."""
        nxt = self.corpus.redirects.get(url)
        if nxt is not None:
            return 301, nxt
        if url in self.corpus.known_urls:
            return 200, url
        return 404, None

    def resolve(self, url: str) -> str:
        return resolve_shortened(url, self.fetch)

    def intel_report(self, url: str) -> dict:
        if url not in self.corpus.known_urls:
            raise FetchFailed(f"unknown url {url!r}")
        flags = self.corpus.manifest.intel.get(url, {})
        return {
            "url": url,
            "alarmed": bool(flags.get("alarmed")),
            "malware": bool(flags.get("malware")),
            "phishing": bool(flags.get("phishing")),
        }


def _post_payload(p: Post) -> dict:
    return dataclasses.asdict(p)


def make_app(sim: Simulator):
    """FastAPI wrapper so out-of-process clients can drive the simulator."""
    from fastapi import FastAPI, HTTPException

    app = FastAPI(title="osnsim")

    def guarded(fn, *args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except RateLimited as exc:
            raise HTTPException(
                status_code=429,
                detail={"error": "rate limited", "retry_after": exc.retry_after},
            )

    @app.get("/search")
    def search(tag: str, limit: int = 100):
        posts = guarded(sim.search_hashtag, tag, limit)
        return {"posts": [_post_payload(p) for p in posts]}

    @app.get("/timeline")
    def timeline(account: str, limit: int = 100):
        posts = guarded(sim.account_timeline, account, limit)
        return {"posts": [_post_payload(p) for p in posts]}

    @app.get("/profile")
    def profile(account: str):
        record = guarded(sim.get_profile, account)
        if record is None:
            raise HTTPException(status_code=404, detail="no such account")
        return dataclasses.asdict(record)

    @app.get("/availability")
    def availability(post: str, t: float | None = None):
        return {"post_id": post, "status": guarded(sim.check_availability, post, t)}

    @app.get("/resolve")
    def resolve(url: str):
        try:
            return {"url": url, "resolved": sim.resolve(url)}
        except Exception as exc:
            raise HTTPException(status_code=502, detail=str(exc))

    @app.get("/fetch")
    def fetch(url: str):
        status, target = sim.fetch(url)
        return {"status": status, "target": target}

    @app.get("/intel")
    def intel(url: str):
        try:
            return sim.intel_report(url)
        except FetchFailed as exc:
            raise HTTPException(status_code=404, detail=str(exc))

    @app.post("/advance")
    def advance(days: float):
        try:
            return {"clock": sim.advance_days(days)}
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))

    @app.get("/clock")
    def clock():
        return {"clock": sim.clock}

    return app
