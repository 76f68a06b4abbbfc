"""Revisit scheduling, evasion rates, unavailability breakdown, engagement
curves, and corpus-level distribution reports."""

from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass

from .errors import EmptyCohort, EmptyStore, NoProbeData, NoUnavailable

logger = logging.getLogger(__name__)

REACHABLE = "reachable"
UNAVAILABLE_STATUSES = (
    "suspended_account",
    "page_nonexistent",
    "deleted_by_author",
    "account_nonexistent",
    "rules_violation",
)
STATUSES = (REACHABLE,) + UNAVAILABLE_STATUSES

DEFAULT_CADENCE_DAYS = 7


@dataclass(frozen=True)
class RevisitRecord:
    post_id: str
    probe_time: float  # days since corpus epoch
    status: str

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")

    def to_dict(self) -> dict:
        return {
            "post_id": self.post_id,
            "probe_time": self.probe_time,
            "status": self.status,
        }


@dataclass
class EvasionCohort:
    """Posts first observed within one posting window, tracked across
    revisits."""

    cohort_id: str
    window_start: float
    window_end: float
    member_post_ids: list[str]

    def __post_init__(self):
        if self.window_end < self.window_start:
            raise ValueError("window end precedes start")


def build_cohorts(posts, window_days: float = 7.0) -> list[EvasionCohort]:
    """Group posts into consecutive posting windows (weekly by default)."""
    cohorts: dict[int, list[str]] = defaultdict(list)
    for p in posts:
        cohorts[int(p.created_at // window_days)].append(p.id)
    out = []
    for idx in sorted(cohorts):
        out.append(
            EvasionCohort(
                cohort_id=f"cohort-{idx}",
                window_start=idx * window_days,
                window_end=(idx + 1) * window_days,
                member_post_ids=sorted(cohorts[idx]),
            )
        )
    return out


def schedule_revisits(
    cohort: list[str],
    cadence_days: float,
    source,
    n_probes: int,
    start_time: float = 0.0,
) -> list[RevisitRecord]:
    """Probe each cohort member at every cadence tick via the source's
    availability endpoint. Probe failures are skipped with a warning."""
    if not cohort:
        raise EmptyCohort("revisit cohort must be nonempty")
    if cadence_days < 1:
        raise ValueError("cadence must be >= 1 day")
    records = []
    for tick in range(1, n_probes + 1):
        t = start_time + cadence_days * tick
        for post_id in cohort:
            try:
                status = source.check_availability(post_id, t)
            except Exception as exc:
                logger.warning("probe of %s at t=%s failed: %s", post_id, t, exc)
                continue
            records.append(RevisitRecord(post_id=post_id, probe_time=t, status=status))
    return records


def evasion_rate(
    cohort: list[str], records: list[RevisitRecord], revisit_time: float
) -> float:
    """Fraction of the cohort still reachable at the given revisit time."""
    members = set(cohort)
    probed = {
        r.post_id: r.status
        for r in records
        if r.probe_time == revisit_time and r.post_id in members
    }
    if not probed:
        raise NoProbeData(f"no probes at t={revisit_time}")
    reachable = sum(1 for s in probed.values() if s == REACHABLE)
    return reachable / len(cohort)


def unavailability_breakdown(records: list[RevisitRecord]) -> dict[str, float]:
    """Fractions over the five unavailable statuses; sums to 1."""
    counts: dict[str, int] = defaultdict(int)
    for r in records:
        if r.status != REACHABLE:
            counts[r.status] += 1
    total = sum(counts.values())
    if total == 0:
        raise NoUnavailable("every record is reachable")
    return {s: counts.get(s, 0) / total for s in UNAVAILABLE_STATUSES}


@dataclass(frozen=True)
class EngagementBucket:
    elapse_days: int
    n_posts: int
    mean_likes: float
    mean_replies: float
    mean_retweets: float
    mean_quotes: float


def engagement_curve(pips, crawl_time: float, max_days: int = 60) -> list[EngagementBucket]:
    """Group PIPs by elapse time (crawl day minus posting day) and average
    engagement per bucket; empty buckets are omitted."""
    if max_days < 1:
        raise ValueError("max_days must be >= 1")
    groups: dict[int, list] = defaultdict(list)
    for p in pips:
        t_e = int(crawl_time - p.created_at)
        if 0 <= t_e <= max_days:
            groups[t_e].append(p.engagement)
    buckets = []
    for t_e in sorted(groups):
        engs = groups[t_e]
        n = len(engs)
        buckets.append(
            EngagementBucket(
                elapse_days=t_e,
                n_posts=n,
                mean_likes=sum(e.likes for e in engs) / n,
                mean_replies=sum(e.replies for e in engs) / n,
                mean_retweets=sum(e.retweets for e in engs) / n,
                mean_quotes=sum(e.quotes for e in engs) / n,
            )
        )
    return buckets


def corpus_report(store, scanned_total: int | None = None, top_k: int = 1000) -> dict:
    """Corpus-level distributions: category and language shares, per-account
    concentration, PIP ratio of the scanned stream, and contact-type
    preference per category."""
    pips = store.pip_posts()
    if store.count("posts") == 0:
        raise EmptyStore("no posts stored")

    category_counts: dict[str, int] = defaultdict(int)
    language_counts: dict[str, int] = defaultdict(int)
    for p in pips:
        label = p.label or {}
        if label.get("category"):
            category_counts[label["category"]] += 1
        if label.get("language"):
            language_counts[label["language"]] += 1

    n_pips = len(pips)
    per_account = store.pip_count_by_account()
    counts_sorted = sorted(per_account.values(), reverse=True)
    cdf_points = []
    cum = 0
    for i, c in enumerate(counts_sorted, start=1):
        cum += c
        cdf_points.append({"accounts": i, "pip_share": cum / n_pips if n_pips else 0.0})
    top = counts_sorted[: top_k]
    top_share = sum(top) / n_pips if n_pips else 0.0

    contact_pref: dict[str, dict[str, int]] = defaultdict(lambda: defaultdict(int))
    for c in store.all("contacts"):
        post = store.get("posts", c.get("post_id") or "")
        if post is not None and post.label and post.label.get("is_pip"):
            cat = post.label.get("category")
            if cat:
                contact_pref[cat][c["kind"]] += 1

    def shares(counts: dict[str, int]) -> dict[str, float]:
        total = sum(counts.values())
        return {k: v / total for k, v in sorted(counts.items())} if total else {}

    return {
        "n_posts": store.count("posts"),
        "n_pips": n_pips,
        "n_accounts": store.count("accounts"),
        "category_shares": shares(category_counts),
        "language_shares": shares(language_counts),
        "pip_ratio": (n_pips / scanned_total) if scanned_total else None,
        "top_account_share": top_share,
        "top_k": min(top_k, len(counts_sorted)),
        "account_cdf": cdf_points[:1000],
        "contact_type_preference": {
            cat: shares(kinds) for cat, kinds in sorted(contact_pref.items())
        },
    }
