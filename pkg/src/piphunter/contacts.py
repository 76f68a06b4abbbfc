"""Next-hop contact extraction from post and profile text.

Websites come from URL recognition; WhatsApp/LINE mostly arrive as IM URLs
(possibly shortened and resolved first); QQ/WeChat/Telegram ids embedded
inline are recovered by an averaged-perceptron BIO sequence tagger that
replaces the heavyweight transformer option.
"""

from __future__ import annotations

import logging
import re
from collections import defaultdict
from dataclasses import dataclass, field
from urllib.parse import urlparse

from .errors import DegenerateTrainingSet, FetchFailed, RedirectLoop
from .textnorm import NormalizedText, is_url_placeholder, tokenize

logger = logging.getLogger(__name__)

CONTACT_KINDS = (
    "QQ",
    "WeChat",
    "Telegram",
    "WhatsApp",
    "LINE",
    "URL",
    "TwitterMention",
    "Other",
)

MAX_REDIRECT_HOPS = 10

# Platform ids recoverable by NER (inline spans).
NER_PLATFORMS = ("QQ", "WeChat", "Telegram", "Other")

BIO_TAGS = tuple(
    f"{prefix}-{plat}" for plat in NER_PLATFORMS for prefix in ("B", "I")
) + ("O",)

# Obfuscated platform triggers seen near inline account ids.
TRIGGER_PLATFORM = {
    "qq": "QQ",
    "q": "QQ",
    "企鹅": "QQ",
    "扣扣": "QQ",
    "penguin": "QQ",
    "wechat": "WeChat",
    "weixin": "WeChat",
    "微信": "WeChat",
    "薇": "WeChat",
    "v": "WeChat",
    "vx": "WeChat",
    "wx": "WeChat",
    "heavy_black_heart": "WeChat",
    "satellite": "WeChat",
    "telegram": "Telegram",
    "tg": "Telegram",
    "电报": "Telegram",
    "飞机": "Telegram",
    "airplane": "Telegram",
    "赖": "LINE",
    "line": "LINE",
}

URL_CONTACT_RE = re.compile(r"https?://[^\s]+")

_QQ_ID_RE = re.compile(r"^\d{5,12}$")
_IM_ID_RE = re.compile(r"^[A-Za-z0-9_-]{4,32}$")
_PHONE_RE = re.compile(r"^\+?\d{6,15}$")


@dataclass(frozen=True)
class Contact:
    kind: str
    value: str
    fqdn: str = ""
    source: str = "post"  # or "profile"
    post_id: str | None = None
    account_id: str | None = None

    def key(self) -> tuple[str, str]:
        return (self.kind, self.value)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "value": self.value,
            "fqdn": self.fqdn,
            "source": self.source,
            "post_id": self.post_id,
            "account_id": self.account_id,
        }


@dataclass(frozen=True)
class NeedsResolution:
    """Marker: shortened IM URL; resolve before classification."""

    url: str


def extract_urls(text: str, **provenance) -> list[Contact]:
    """Capture every http/https URL in source order, with its FQDN."""
    out = []
    for m in URL_CONTACT_RE.finditer(text or ""):
        url = m.group(0).rstrip(".,;:!?)\"'>»]}")
        host = urlparse(url).netloc.split(":")[0].lower()
        out.append(Contact(kind="URL", value=url, fqdn=host, **provenance))
    return out


def resolve_shortened(url: str, fetcher, max_hops: int = MAX_REDIRECT_HOPS) -> str:
    """Follow redirects to the final landing URL.

    The fetcher maps url -> (status, location-or-final-url); statuses in
    the 3xx range redirect, 2xx terminates, anything else raises
    FetchFailed. Loops or more than max_hops raise RedirectLoop.
    """
    seen = {url}
    current = url
    for _ in range(max_hops):
        status, target = fetcher(current)
        if status is None or status >= 400:
            raise FetchFailed(f"fetch of {current!r} failed with status {status}")
        if 300 <= status < 400:
            if target in seen:
                raise RedirectLoop(f"redirect loop through {target!r}")
            seen.add(target)
            current = target
            continue
        return target or current
    raise RedirectLoop(f"more than {max_hops} redirects from {url!r}")


_SHORTENER_HOSTS = {"lin.ee", "wa.link"}


def classify_im_url(url: str, **provenance):
    """Map an IM URL onto (kind, account id); shortener hosts that hide the
    IM target return NeedsResolution; anything else returns None."""
    parsed = urlparse(url)
    host = parsed.netloc.split(":")[0].lower()
    path = parsed.path.strip("/")
    if host in _SHORTENER_HOSTS:
        return NeedsResolution(url=url)
    if host == "t.me" and path:
        account = path.split("/")[0]
        if account:
            return Contact(kind="Telegram", value=account, **provenance)
    if host == "wa.me" and path:
        phone = path.split("/")[0].lstrip("+")
        if _PHONE_RE.match(phone):
            return Contact(kind="WhatsApp", value=phone, **provenance)
    if host == "line.me" and path.startswith("ti/p/"):
        account = path[len("ti/p/") :].split("/")[0]
        if account:
            return Contact(kind="LINE", value=account, **provenance)
    return None


def _token_shape(tok: str) -> str:
    if tok.isdigit():
        return "digits"
    if re.fullmatch(r"[A-Za-z]+", tok):
        return "latin"
    if re.fullmatch(r"[A-Za-z0-9_-]+", tok):
        return "alnum"
    if all(0x4E00 <= ord(c) <= 0x9FFF for c in tok):
        return "cjk"
    return "mixed"


def _features(tokens: tuple[str, ...], i: int) -> list[str]:
    n = len(tokens)

    def at(j: str):
        return tokens[j] if 0 <= j < n else "<pad>"

    tok = tokens[i]
    lower = tok.lower()
    feats = [
        f"w0={lower}",
        f"w-1={at(i - 1).lower()}",
        f"w-2={at(i - 2).lower()}",
        f"w+1={at(i + 1).lower()}",
        f"w+2={at(i + 2).lower()}",
        f"shape0={_token_shape(tok)}",
        f"shape0len={_token_shape(tok)}:{min(len(tok), 12)}",
        f"prevbi={at(i - 2)}{at(i - 1)}",
        f"nextbi={at(i + 1)}{at(i + 2)}",
    ]
    for off in (-3, -2, -1):
        trig = TRIGGER_PLATFORM.get(at(i + off).lower())
        if trig:
            feats.append(f"trig{off}={trig}")
        big = TRIGGER_PLATFORM.get((at(i + off - 1) + at(i + off)).lower())
        if big:
            feats.append(f"trigbi{off}={big}")
    return feats


@dataclass
class TaggerModel:
    """Averaged-perceptron sequence tagger weights."""

    weights: dict[str, dict[str, float]] = field(default_factory=dict)
    template_version: int = 1

    def score(self, feats: list[str]) -> dict[str, float]:
        scores = dict.fromkeys(BIO_TAGS, 0.0)
        for f in feats:
            per_tag = self.weights.get(f)
            if per_tag:
                for tag, w in per_tag.items():
                    scores[tag] += w
        return scores


def _repair_bio(tags: list[str]) -> list[str]:
    prev = "O"
    out = []
    for tag in tags:
        if tag.startswith("I-"):
            plat = tag[2:]
            if prev not in (f"B-{plat}", f"I-{plat}"):
                tag = f"B-{plat}"
        out.append(tag)
        prev = tag
    return out


def train_tagger(
    labeled: list[tuple[NormalizedText, list[str]]],
    epochs: int = 8,
    seed: int = 42,
) -> TaggerModel:
    """Averaged perceptron with greedy decoding; deterministic per seed."""
    if not any(tag != "O" for _, tags in labeled for tag in tags):
        raise DegenerateTrainingSet("training data carries no contact spans")
    for text, tags in labeled:
        if len(text.tokens) != len(tags):
            raise ValueError("token/tag length mismatch")
    weights: dict[str, dict[str, float]] = defaultdict(lambda: defaultdict(float))
    totals: dict[str, dict[str, float]] = defaultdict(lambda: defaultdict(float))
    stamps: dict[str, dict[str, int]] = defaultdict(lambda: defaultdict(int))
    step = 0

    def bump(f: str, tag: str, delta: float) -> None:
        totals[f][tag] += (step - stamps[f][tag]) * weights[f][tag]
        stamps[f][tag] = step
        weights[f][tag] += delta

    import random

    rng = random.Random(seed)
    order = list(range(len(labeled)))
    for _ in range(epochs):
        rng.shuffle(order)
        for si in order:
            text, gold = labeled[si]
            prev_pred = "O"
            for i, tok in enumerate(text.tokens):
                feats = _features(text.tokens, i) + [f"prevtag={prev_pred}"]
                scores = dict.fromkeys(BIO_TAGS, 0.0)
                for f in feats:
                    for tag, w in weights.get(f, {}).items():
                        scores[tag] += w
                pred = max(BIO_TAGS, key=lambda t: (scores[t], -BIO_TAGS.index(t)))
                if pred != gold[i]:
                    for f in feats:
                        bump(f, gold[i], 1.0)
                        bump(f, pred, -1.0)
                prev_pred = pred
                step += 1
    averaged: dict[str, dict[str, float]] = {}
    for f, per_tag in weights.items():
        avg = {}
        for tag, w in per_tag.items():
            total = totals[f][tag] + (step - stamps[f][tag]) * w
            if total:
                avg[tag] = total / step
        if avg:
            averaged[f] = avg
    return TaggerModel(weights=averaged)


def tag(model: TaggerModel, text: NormalizedText) -> list[str]:
    """Greedy decode; URL placeholders, hashtags and mentions are never
    tagged as account ids and the output is always a valid BIO sequence."""
    tags: list[str] = []
    prev = "O"
    for i, tok in enumerate(text.tokens):
        if is_url_placeholder(tok) or tok.startswith("#") or tok.startswith("@"):
            tags.append("O")
            prev = "O"
            continue
        feats = _features(text.tokens, i) + [f"prevtag={prev}"]
        scores = model.score(feats)
        pred = max(BIO_TAGS, key=lambda t: (scores[t], -BIO_TAGS.index(t)))
        tags.append(pred)
        prev = pred
    return _repair_bio(tags)


def _validate_span(kind: str, value: str) -> bool:
    if kind == "QQ":
        return bool(_QQ_ID_RE.match(value))
    if kind in ("WeChat", "Telegram"):
        return bool(_IM_ID_RE.match(value))
    return bool(value)


def spans_from_tags(text: NormalizedText, tags: list[str]) -> list[tuple[str, str]]:
    """(kind, concatenated value) for each maximal B/I span."""
    spans = []
    current_kind = None
    current_toks: list[str] = []
    for tok, t in zip(text.tokens, tags + ["O"] * (len(text.tokens) - len(tags))):
        if t.startswith("B-"):
            if current_kind:
                spans.append((current_kind, "".join(current_toks)))
            current_kind = t[2:]
            current_toks = [tok]
        elif t.startswith("I-") and current_kind == t[2:]:
            current_toks.append(tok)
        else:
            if current_kind:
                spans.append((current_kind, "".join(current_toks)))
            current_kind = None
            current_toks = []
    if current_kind:
        spans.append((current_kind, "".join(current_toks)))
    return spans


def extract_contacts(
    text: str,
    tagger: TaggerModel,
    fetcher=None,
    source: str = "post",
    post_id: str | None = None,
    account_id: str | None = None,
) -> tuple[list[Contact], list[str]]:
    """Union of URL extraction, IM-URL classification (resolving shortened
    ones when a fetcher is available), BIO spans, and @-mentions.

    Returns (deduplicated contacts, warnings); fetcher failures become
    warnings, never abort the batch.
    """
    provenance = {"source": source, "post_id": post_id, "account_id": account_id}
    warnings: list[str] = []
    contacts: list[Contact] = []

    for url_contact in extract_urls(text, **provenance):
        url = url_contact.value
        hit = classify_im_url(url, **provenance)
        if isinstance(hit, NeedsResolution):
            if fetcher is None:
                warnings.append(f"no fetcher to resolve shortened IM URL {url}")
                contacts.append(url_contact)
                continue
            try:
                final = resolve_shortened(url, fetcher)
            except (FetchFailed, RedirectLoop) as exc:
                warnings.append(f"resolution of {url} failed: {exc}")
                contacts.append(url_contact)
                continue
            hit = classify_im_url(final, **provenance)
            if hit is None or isinstance(hit, NeedsResolution):
                host = urlparse(final).netloc.split(":")[0].lower()
                hit = Contact(kind="URL", value=final, fqdn=host, **provenance)
        contacts.append(hit if hit is not None else url_contact)

    norm = tokenize(text)
    tags = tag(tagger, norm)
    for kind, value in spans_from_tags(norm, tags):
        if _validate_span(kind, value):
            contacts.append(Contact(kind=kind, value=value, **provenance))
        else:
            warnings.append(f"dropped invalid {kind} span {value!r}")

    for mention in norm.mentions:
        contacts.append(Contact(kind="TwitterMention", value=mention, **provenance))

    seen: set[tuple[str, str]] = set()
    deduped = []
    for c in contacts:
        if c.key() not in seen:
            seen.add(c.key())
            deduped.append(c)
    return deduped, warnings


def contacts_from_post(post, tagger: TaggerModel, fetcher=None):
    return extract_contacts(
        post.text, tagger, fetcher, source="post", post_id=post.id,
        account_id=post.author_id,
    )


def contacts_from_profile(account, tagger: TaggerModel, fetcher=None):
    return extract_contacts(
        account.profile_text, tagger, fetcher, source="profile",
        account_id=account.id,
    )


def enrich_threat(url_contacts: list[Contact], intel_client) -> list[tuple[Contact, dict]]:
    """Per-URL threat reports; client failures degrade to reported=False."""
    out = []
    for contact in url_contacts:
        try:
            report = intel_client(contact.value)
            out.append(
                (
                    contact,
                    {
                        "reported": True,
                        "alarmed": bool(report.get("alarmed")),
                        "malware": bool(report.get("malware")),
                        "phishing": bool(report.get("phishing")),
                    },
                )
            )
        except Exception as exc:  # client failures must not abort the batch
            logger.warning("intel lookup failed for %s: %s", contact.value, exc)
            out.append(
                (
                    contact,
                    {"reported": False, "alarmed": False, "malware": False, "phishing": False},
                )
            )
    return out
