"""Synthetic corpus generation from a manifest; deterministic per seed."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..errors import InvalidManifest
from ..store import Account, Engagement, Post
from ..textnorm import tokenize
from . import templates as T

DEFAULT_PIP_HASHTAG_MEAN = 6.98
DEFAULT_BENIGN_HASHTAG_MEAN = 2.27

DEFAULT_UNAVAILABILITY_MIX = {
    "suspended_account": 0.9159,
    "page_nonexistent": 0.0622,
    "deleted_by_author": 0.0100,
    "account_nonexistent": 0.0070,
    "rules_violation": 0.0049,
}


@dataclass
class CampaignSpec:
    category: str
    language: str
    n_accounts: int
    n_posts: int
    hashtags: list[str]
    contacts: list[tuple[str, str]] = field(default_factory=list)
    jargon: list[str] = field(default_factory=list)
    poll_promo_fraction: float = 0.05
    profile_promo: bool = True


@dataclass
class SimManifest:
    seed: int
    campaigns: list[CampaignSpec]
    n_benign: int
    pip_hashtag_mean: float = DEFAULT_PIP_HASHTAG_MEAN
    benign_hashtag_mean: float = DEFAULT_BENIGN_HASHTAG_MEAN
    suspension_hazard: float = 0.0
    unavailability_mix: dict = field(default_factory=lambda: dict(DEFAULT_UNAVAILABILITY_MIX))
    mixture_horizon_days: int = 180
    posting_window_days: int = 60
    intel: dict = field(default_factory=dict)  # url -> flag dict

    def validate(self) -> None:
        if not self.campaigns and self.n_benign <= 0:
            raise InvalidManifest("manifest generates no posts")
        for c in self.campaigns:
            if c.category not in T.CATEGORY_PHRASES:
                raise InvalidManifest(f"unknown category {c.category!r}")
            if c.language not in T.PROMO_FRAMES:
                raise InvalidManifest(f"unknown language {c.language!r}")
            if c.n_accounts < 1 or c.n_posts < 1:
                raise InvalidManifest("campaign needs >=1 account and post")
            if not c.hashtags:
                raise InvalidManifest("campaign needs >=1 hashtag")
        if not (0 <= self.suspension_hazard < 1):
            raise InvalidManifest("hazard must be in [0,1)")
        mix = self.unavailability_mix
        if mix and abs(sum(mix.values()) - 1.0) > 1e-6:
            raise InvalidManifest("unavailability mix must sum to 1")

    def to_json(self) -> str:
        data = {
            "seed": self.seed,
            "campaigns": [
                {
                    "category": c.category,
                    "language": c.language,
                    "n_accounts": c.n_accounts,
                    "n_posts": c.n_posts,
                    "hashtags": c.hashtags,
                    "contacts": [list(x) for x in c.contacts],
                    "jargon": c.jargon,
                    "poll_promo_fraction": c.poll_promo_fraction,
                    "profile_promo": c.profile_promo,
                }
                for c in self.campaigns
            ],
            "n_benign": self.n_benign,
            "pip_hashtag_mean": self.pip_hashtag_mean,
            "benign_hashtag_mean": self.benign_hashtag_mean,
            "suspension_hazard": self.suspension_hazard,
            "unavailability_mix": self.unavailability_mix,
            "mixture_horizon_days": self.mixture_horizon_days,
            "posting_window_days": self.posting_window_days,
            "intel": self.intel,
        }
        return json.dumps(data, ensure_ascii=False, indent=2)

    @classmethod
    def from_json(cls, payload: str) -> "SimManifest":
        try:
            data = json.loads(payload)
            campaigns = [
                CampaignSpec(
                    category=c["category"],
                    language=c["language"],
                    n_accounts=c["n_accounts"],
                    n_posts=c["n_posts"],
                    hashtags=list(c["hashtags"]),
                    contacts=[tuple(x) for x in c.get("contacts", [])],
                    jargon=list(c.get("jargon", [])),
                    poll_promo_fraction=c.get("poll_promo_fraction", 0.05),
                    profile_promo=c.get("profile_promo", True),
                )
                for c in data["campaigns"]
            ]
            manifest = cls(
                seed=data["seed"],
                campaigns=campaigns,
                n_benign=data["n_benign"],
                pip_hashtag_mean=data.get("pip_hashtag_mean", DEFAULT_PIP_HASHTAG_MEAN),
                benign_hashtag_mean=data.get(
                    "benign_hashtag_mean", DEFAULT_BENIGN_HASHTAG_MEAN
                ),
                suspension_hazard=data.get("suspension_hazard", 0.0),
                unavailability_mix=data.get(
                    "unavailability_mix", dict(DEFAULT_UNAVAILABILITY_MIX)
                ),
                mixture_horizon_days=data.get("mixture_horizon_days", 180),
                posting_window_days=data.get("posting_window_days", 60),
                intel=data.get("intel", {}),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidManifest(f"bad manifest: {exc}") from exc
        manifest.validate()
        return manifest

    @classmethod
    def load(cls, path: str | Path) -> "SimManifest":
        return cls.from_json(Path(path).read_text(encoding="utf-8"))


@dataclass
class SimCorpus:
    manifest: SimManifest
    posts: list[Post]
    accounts: list[Account]
    labels: dict[str, dict]  # post_id -> {"is_pip","category","language"}
    profile_labels: dict[str, bool]
    redirects: dict[str, str]  # url -> next hop
    known_urls: set[str]
    suspension_day: dict[str, float]  # account_id -> day (inf if never)
    deletion_event: dict[str, tuple[float, str]]  # post_id -> (day, reason)

    def pip_post_ids(self) -> set[str]:
        return {pid for pid, lab in self.labels.items() if lab["is_pip"]}


_INLINE_RENDERS = {
    "QQ": ["QQ {v}", "加Q {v}", "企鹅 {v}", "扣扣 {v}"],
    "WeChat": ["加微信 {v}", "VX {v}", "薇 {v}", "WeChat {v}"],
    "Telegram": ["TG {v}", "电报 {v}", "飞机 {v}", "telegram {v}"],
}


def _render_contact(kind, value, rng, redirects, known_urls, short_counter):
    """Render one contact into text; may register redirect chains."""
    if kind in _INLINE_RENDERS:
        if kind == "Telegram" and rng.random() < 0.4:
            url = f"https://t.me/{value}"
            known_urls.add(url)
            return url
        tpl = _INLINE_RENDERS[kind][rng.integers(len(_INLINE_RENDERS[kind]))]
        return tpl.format(v=value)
    if kind == "WhatsApp":
        final = f"https://wa.me/{value}"
        known_urls.add(final)
        if rng.random() < 0.5:
            short = f"https://wa.link/s{next(short_counter)}"
            redirects[short] = final
            known_urls.add(short)
            return short
        return final
    if kind == "LINE":
        final = f"https://line.me/ti/p/{value}"
        known_urls.add(final)
        if rng.random() < 0.5:
            short = f"http://lin.ee/s{next(short_counter)}"
            redirects[short] = final
            known_urls.add(short)
            return short
        return final
    if kind == "URL":
        known_urls.add(value)
        if rng.random() < 0.3:
            short = f"https://bit.ly/s{next(short_counter)}"
            redirects[short] = value
            known_urls.add(short)
            return short
        return value
    return value


def _count_from_mean(rng, mean: float, at_least_one: bool) -> int:
    if at_least_one:
        return 1 + int(rng.poisson(max(mean - 1.0, 0.0)))
    return int(rng.poisson(mean))


def generate_corpus(manifest: SimManifest) -> SimCorpus:
    """Template-based multilingual corpus; byte-identical per seed."""
    manifest.validate()
    rng = np.random.default_rng(manifest.seed)
    posts: list[Post] = []
    accounts: list[Account] = []
    labels: dict[str, dict] = {}
    profile_labels: dict[str, bool] = {}
    redirects: dict[str, str] = {}
    known_urls: set[str] = set()

    import itertools

    short_counter = itertools.count(1)
    account_counter = itertools.count(1)
    post_counter = itertools.count(1)
    window = manifest.posting_window_days

    for camp in manifest.campaigns:
        frames = T.PROMO_FRAMES[camp.language]
        phrases = T.CATEGORY_PHRASES[camp.category].get(
            camp.language, T.CATEGORY_PHRASES[camp.category]["en"]
        )
        jargon_pool = camp.jargon or T.CATEGORY_JARGON.get(camp.category, [])
        camp_accounts = []
        for _ in range(camp.n_accounts):
            aid = f"a-{next(account_counter)}"
            profile = ""
            is_profile_pip = False
            if camp.profile_promo:
                phrase = phrases[rng.integers(len(phrases))]
                contact_txt = ""
                if camp.contacts:
                    kind, value = camp.contacts[rng.integers(len(camp.contacts))]
                    contact_txt = _render_contact(
                        kind, value, rng, redirects, known_urls, short_counter
                    )
                profile = f"{phrase} {contact_txt}".strip()
                is_profile_pip = True
            account = Account(
                id=aid,
                handle=f"user{aid[2:]}",
                profile_text=profile,
                registered_at=-float(rng.integers(30, 720)),
            )
            accounts.append(account)
            profile_labels[aid] = is_profile_pip
            camp_accounts.append(account)

        for post_idx in range(camp.n_posts):
            author = camp_accounts[int(rng.integers(len(camp_accounts)))]
            frame = frames[int(rng.integers(len(frames)))]
            phrase = phrases[int(rng.integers(len(phrases)))]
            jargon = jargon_pool[int(rng.integers(len(jargon_pool)))] if jargon_pool else ""
            contact_txt = ""
            if camp.contacts:
                kind, value = camp.contacts[int(rng.integers(len(camp.contacts)))]
                contact_txt = _render_contact(
                    kind, value, rng, redirects, known_urls, short_counter
                )
            body = frame.format(phrase=phrase, jargon=jargon, contact=contact_txt).strip()

            n_tags = _count_from_mean(rng, manifest.pip_hashtag_mean, at_least_one=True)
            # The first hashtag always comes from the campaign set so the
            # snowball chain can always reach every post.
            tags = [camp.hashtags[post_idx % len(camp.hashtags)]]
            pool = camp.hashtags + T.POPULAR_TAGS
            for _ in range(n_tags - 1):
                tags.append(pool[int(rng.integers(len(pool)))])

            poll_options: list[str] = []
            text = body
            if rng.random() < camp.poll_promo_fraction:
                # Evasion variant: benign main text, promo in a poll option.
                benign_pool = T.BENIGN_TEMPLATES[camp.language]
                text = benign_pool[int(rng.integers(len(benign_pool)))]
                poll_options = ["yes", body][:4]

            pid = f"p-{next(post_counter)}"
            created = float(rng.integers(0, window))
            t_e = window - created
            post = Post(
                id=pid,
                author_id=author.id,
                text=text + "".join(f" #{t}" for t in tags),
                hashtags=tags,
                poll_options=poll_options,
                created_at=created,
                engagement=Engagement(
                    likes=int(rng.poisson(20 + 4 * t_e)),
                    replies=int(rng.poisson(3)),
                    retweets=int(rng.poisson(8)),
                    quotes=int(rng.poisson(1)),
                ),
            )
            posts.append(post)
            labels[pid] = {
                "is_pip": True,
                "category": camp.category,
                "language": camp.language,
            }

    benign_langs = list(T.BENIGN_TEMPLATES)
    lang_probs = np.array([T.LANGUAGE_MIX[code] for code in benign_langs])
    lang_probs = lang_probs / lang_probs.sum()
    n_benign_accounts = max(1, manifest.n_benign // 5)
    benign_accounts = []
    for _ in range(n_benign_accounts):
        aid = f"a-{next(account_counter)}"
        account = Account(
            id=aid,
            handle=f"user{aid[2:]}",
            profile_text="just here for the good vibes",
            registered_at=-float(rng.integers(30, 2000)),
        )
        accounts.append(account)
        profile_labels[aid] = False
        benign_accounts.append(account)
    for _ in range(manifest.n_benign):
        author = benign_accounts[int(rng.integers(len(benign_accounts)))]
        lang = benign_langs[int(rng.choice(len(benign_langs), p=lang_probs))]
        pool = T.BENIGN_TEMPLATES[lang]
        body = pool[int(rng.integers(len(pool)))]
        n_tags = _count_from_mean(rng, manifest.benign_hashtag_mean, at_least_one=False)
        tag_pool = T.BENIGN_HASHTAGS + T.POPULAR_TAGS
        tags = [tag_pool[int(rng.integers(len(tag_pool)))] for _ in range(n_tags)]
        pid = f"p-{next(post_counter)}"
        created = float(rng.integers(0, window))
        post = Post(
            id=pid,
            author_id=author.id,
            text=body + "".join(f" #{t}" for t in tags),
            hashtags=tags,
            created_at=created,
            engagement=Engagement(
                likes=int(rng.poisson(5)),
                replies=int(rng.poisson(1)),
                retweets=int(rng.poisson(1)),
                quotes=int(rng.poisson(0.2)),
            ),
        )
        posts.append(post)
        labels[pid] = {"is_pip": False, "category": None, "language": lang}

    # Availability events: account suspension via the per-day hazard,
    # per-post deletions tuned so the unavailable mixture at the horizon
    # matches the manifest shares.
    suspension_day: dict[str, float] = {}
    h = manifest.suspension_hazard
    for account in accounts:
        if h > 0:
            u = rng.random()
            day = np.floor(np.log(max(u, 1e-300)) / np.log(1.0 - h)) + 1.0
            suspension_day[account.id] = float(day)
        else:
            suspension_day[account.id] = float("inf")

    deletion_event: dict[str, tuple[float, str]] = {}
    mix = manifest.unavailability_mix
    horizon = manifest.mixture_horizon_days
    m_susp = mix.get("suspended_account", 1.0)
    others = {k: v for k, v in mix.items() if k != "suspended_account" and v > 0}
    if h > 0 and others and m_susp > 0:
        s = 1.0 - (1.0 - h) ** horizon
        # Deletion days are drawn strictly before the author's suspension
        # day so a deletion is never preempted; with that guarantee the
        # observed shares at the horizon are s*(1-o) suspended vs o
        # deleted, giving this closed form for the target mixture.
        o = min(1.0, s * (1.0 - m_susp) / (m_susp + s * (1.0 - m_susp)))
        reasons = sorted(others)
        probs = np.array([others[r] for r in reasons])
        probs = probs / probs.sum()
        for post in posts:
            if rng.random() < o:
                cutoff = min(suspension_day.get(post.author_id, float("inf")),
                             float(horizon + 1))
                if cutoff <= 1.0:
                    continue
                day = float(rng.integers(1, int(cutoff)))
                reason = reasons[int(rng.choice(len(reasons), p=probs))]
                deletion_event[post.id] = (day, reason)

    return SimCorpus(
        manifest=manifest,
        posts=posts,
        accounts=accounts,
        labels=labels,
        profile_labels=profile_labels,
        redirects=redirects,
        known_urls=known_urls,
        suspension_day=suspension_day,
        deletion_event=deletion_event,
    )


def post_document(post: Post) -> str:
    """Classifier input: main text plus poll options (promo can hide in
    any component of a post)."""
    parts = [post.text] + list(post.poll_options)
    return " ".join(p for p in parts if p)


def table1_manifest(
    seed: int,
    n_pips: int = 3000,
    n_benign: int = 2200,
    suspension_hazard: float = 0.0,
    accounts_per_campaign: int = 4,
) -> SimManifest:
    """A manifest whose category/language mix follows the default shares."""
    categories = list(T.CATEGORY_MIX)
    languages = list(T.LANGUAGE_MIX)
    lang_weights = np.array([T.LANGUAGE_MIX[code] for code in languages])
    lang_weights = lang_weights / lang_weights.sum()
    rng = np.random.default_rng(seed)
    campaigns = []
    idx = 0
    for cat in categories:
        n_cat = max(1, round(T.CATEGORY_MIX[cat] * n_pips))
        # Split the category across a few single-language campaigns.
        n_langs = 3 if n_cat >= 60 else 1
        chosen = list(
            rng.choice(len(languages), size=n_langs, replace=False, p=lang_weights)
        )
        share = [n_cat // n_langs] * n_langs
        share[0] += n_cat - sum(share)
        for li, n_posts in zip(chosen, share):
            if n_posts < 1:
                continue
            idx += 1
            lang = languages[int(li)]
            contacts = _default_contacts(cat, idx)
            # Keep expected posts-per-account well under the timeline cap
            # so account keywords can recover a whole campaign.
            n_accounts = max(accounts_per_campaign, -(-n_posts // 60))
            campaigns.append(
                CampaignSpec(
                    category=cat,
                    language=lang,
                    n_accounts=n_accounts,
                    n_posts=n_posts,
                    hashtags=[f"{cat.lower()}{idx}tag{j}" for j in range(1, 6)],
                    contacts=contacts,
                )
            )
    return SimManifest(
        seed=seed,
        campaigns=campaigns,
        n_benign=n_benign,
        suspension_hazard=suspension_hazard,
    )


def _default_contacts(category: str, idx: int) -> list[tuple[str, str]]:
    base = [
        ("WeChat", f"wx{category[:4].lower()}{idx}"),
        ("QQ", str(10_000_000 + idx * 137)),
        ("Telegram", f"tg_{category[:4].lower()}{idx}"),
    ]
    if idx % 3 == 0:
        base.append(("WhatsApp", str(15_500_000_000 + idx)))
    if idx % 4 == 0:
        base.append(("LINE", f"ln{category[:3].lower()}{idx}"))
    if idx % 2 == 0:
        base.append(("URL", f"https://shop{idx}.example.com/items"))
    return base


_NER_PREFIXES = {
    "zh": ["有需要的联系", "诚信交易", "老客户都知道", "需要的私聊"],
    "en": ["contact me at", "for orders reach", "dm or add", "hit me up on"],
}
_NER_TRIGGERS = {
    "QQ": ["QQ", "加Q", "企鹅", "扣扣", "penguin"],
    "WeChat": ["微信", "加微信", "VX", "wx", "薇", "wechat"],
    "Telegram": ["TG", "电报", "飞机", "telegram"],
}
_NER_SUFFIXES = {
    "zh": ["秒回", "随时在线", "欢迎咨询", ""],
    "en": ["fast reply", "always online", "no timewasters", ""],
}


def _random_im_id(rng, kind: str) -> str:
    if kind == "QQ":
        n = int(rng.integers(5, 13))
        return "".join(str(int(rng.integers(1 if i == 0 else 0, 10))) for i in range(n))
    alphabet = "abcdefghijklmnopqrstuvwxyz0123456789"
    n = int(rng.integers(6, 13))
    chars = [alphabet[int(rng.integers(len(alphabet)))] for _ in range(n)]
    if rng.random() < 0.25:  # dash-separated ids exercise I- tags
        cut = int(rng.integers(2, n - 1))
        chars[cut] = "-"
        if chars[0].isdigit():
            chars[0] = "x"
    out = "".join(chars)
    return out if out[0].isalpha() else "x" + out[1:]


def generate_ner_corpus(seed: int, n: int = 400):
    """Labeled (NormalizedText, BIO tags) pairs for the contact tagger.

    Mixes inline-contact sentences across platforms with contact-free and
    URL-only negatives.
    """
    rng = np.random.default_rng(seed)
    kinds = list(_NER_TRIGGERS)
    out = []
    for i in range(n):
        roll = rng.random()
        if roll < 0.25:  # negatives
            lang = "zh" if rng.random() < 0.5 else "en"
            pool = T.BENIGN_TEMPLATES[lang]
            text = pool[int(rng.integers(len(pool)))]
            if rng.random() < 0.4:
                text += f" https://news{i}.example.com/story"
            norm = tokenize(text)
            out.append((norm, ["O"] * len(norm.tokens)))
            continue
        kind = kinds[i % len(kinds)]
        value = _random_im_id(rng, kind)
        lang = "zh" if rng.random() < 0.55 else "en"
        trig_pool = _NER_TRIGGERS[kind]
        trig = trig_pool[int(rng.integers(len(trig_pool)))]
        prefix = _NER_PREFIXES[lang][int(rng.integers(len(_NER_PREFIXES[lang])))]
        suffix = _NER_SUFFIXES[lang][int(rng.integers(len(_NER_SUFFIXES[lang])))]
        text = f"{prefix} {trig} {value} {suffix}".strip()
        norm = tokenize(text)
        tags = _tags_for_value(norm.tokens, value, kind)
        out.append((norm, tags))
    return out


def _tags_for_value(tokens, value: str, kind: str) -> list[str]:
    """BIO tags marking the token span that concatenates to `value`."""
    tags = ["O"] * len(tokens)
    for start in range(len(tokens)):
        joined = ""
        j = start
        while j < len(tokens) and len(joined) < len(value):
            joined += tokens[j]
            j += 1
        if joined == value:
            tags[start] = f"B-{kind}"
            for k in range(start + 1, j):
                tags[k] = f"I-{kind}"
            return tags
    return tags
