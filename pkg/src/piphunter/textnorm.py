"""Multilingual text normalization shared by the classifiers and the contact tagger.

Tokenization replaces URLs with ``url-x`` placeholders, expands emoji into
lowercase underscore-joined descriptions, segments CJK/Thai runs per
codepoint, and captures hashtags/mentions. Language identification uses
character n-gram profiles built from bundled fixture corpora.
"""

from __future__ import annotations

import re
import statistics
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources as importlib_resources

from .errors import EmptyCohort

LANGUAGE_CODES = ("zh", "en", "ja", "th", "es", "it", "de", "ru", "ko", "fr")
LANG_OTHER = "other"

# Minimum n-gram coverage against the best language profile; below it we
# fall back to `other`.
TAU_LANG = 0.5

_PROFILE_TOP_K = 4000
_NGRAM_ORDERS = (1, 2, 3)
# Short inputs rarely reproduce corpus trigrams verbatim, so lower orders
# carry more of the coverage score.
_ORDER_WEIGHTS = (0.5, 0.3, 0.2)

URL_RE = re.compile(r"https?://[^\s]+")
_URL_TRAILING = ".,;:!?)\"'>»]}"

# Hashtags/mentions: letters, digits, underscore, plus CJK/kana/Thai.
_TAG_BODY = r"[\w一-鿿぀-ヿ㐀-䶿฀-๿]+"
HASHTAG_RE = re.compile(r"#(" + _TAG_BODY + r")")
MENTION_RE = re.compile(r"@(" + _TAG_BODY + r")")

_WORD_RE = re.compile(r"[\w']+")
_URL_TOK_RE = re.compile(r"url-\d+")

_URL_PLACEHOLDER_RE = re.compile(r"^url-(\d+)$")


@dataclass(frozen=True)
class NormalizedText:
    """Tokenized view of a post body or profile text."""

    tokens: tuple[str, ...]
    url_map: tuple[tuple[int, str], ...] = ()
    emoji_expansions: tuple[tuple[str, str], ...] = ()
    hashtags: tuple[str, ...] = ()
    mentions: tuple[str, ...] = ()


@dataclass(frozen=True)
class LanguageTag:
    code: str
    confidence: float


@dataclass(frozen=True)
class JargonLexicon:
    entries: tuple[tuple[str, str, str], ...]  # (term, gloss, category)

    def __post_init__(self):
        terms = [t for t, _, _ in self.entries]
        if len(terms) != len(set(terms)):
            raise ValueError("jargon terms must be unique")


def _resource_text(name: str) -> str:
    return (
        importlib_resources.files("piphunter.resources")
        .joinpath(name)
        .read_text(encoding="utf-8")
    )


@lru_cache(maxsize=1)
def load_emoji_table() -> dict[str, str]:
    """Codepoint sequence (as a string) -> lowercase underscore-joined name."""
    table = {}
    for line in _resource_text("emoji.tsv").splitlines():
        if not line.strip():
            continue
        codepoints, name = line.split("\t")
        seq = "".join(chr(int(cp[2:], 16)) for cp in codepoints.split())
        table[seq] = name
    return table


@lru_cache(maxsize=1)
def load_jargon_lexicon() -> JargonLexicon:
    entries = []
    for line in _resource_text("jargon.tsv").splitlines():
        if not line.strip():
            continue
        term, gloss, category = line.split("\t")
        entries.append((term, gloss, category))
    return JargonLexicon(entries=tuple(entries))


def _is_cjk_or_thai(ch: str) -> bool:
    cp = ord(ch)
    return (
        0x4E00 <= cp <= 0x9FFF  # CJK unified
        or 0x3400 <= cp <= 0x4DBF  # CJK ext A
        or 0x3040 <= cp <= 0x30FF  # hiragana + katakana
        or 0x0E00 <= cp <= 0x0E7F  # Thai
    )


@lru_cache(maxsize=1)
def _emoji_sequences() -> list[str]:
    # Longest-first so multi-codepoint sequences win over their prefixes.
    return sorted(load_emoji_table(), key=len, reverse=True)


def tokenize(text: str) -> NormalizedText:
    """Normalize raw post/profile text into tokens.

    URLs become ``url-1``, ``url-2``, ... placeholders in order of
    appearance; emoji in the bundled table are replaced with their
    descriptions; CJK/Thai runs are segmented per codepoint; hashtags and
    mentions are captured and also kept as tokens.
    """
    if not text:
        return NormalizedText(tokens=())

    url_map: list[tuple[int, str]] = []

    def _sub_url(m: re.Match) -> str:
        url = m.group(0)
        stripped = url.rstrip(_URL_TRAILING)
        trailer = url[len(stripped):]
        url_map.append((len(url_map) + 1, stripped))
        return f" url-{len(url_map)} {trailer}"

    text = URL_RE.sub(_sub_url, text)

    emoji_table = load_emoji_table()
    emoji_seqs = _emoji_sequences()
    expansions: list[tuple[str, str]] = []
    hashtags: list[str] = []
    mentions: list[str] = []
    tokens: list[str] = []

    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        # Emoji sequences from the bundled table.
        matched_emoji = None
        if not ch.isascii():
            for seq in emoji_seqs:
                if text.startswith(seq, i):
                    matched_emoji = seq
                    break
        if matched_emoji is not None:
            name = emoji_table[matched_emoji]
            tokens.append(name)
            expansions.append((matched_emoji, name))
            i += len(matched_emoji)
            continue
        if ch in "#@":
            regex = HASHTAG_RE if ch == "#" else MENTION_RE
            m = regex.match(text, i)
            if m:
                (hashtags if ch == "#" else mentions).append(m.group(1))
                tokens.append(m.group(0))
                i = m.end()
                continue
            tokens.append(ch)
            i += 1
            continue
        if _is_cjk_or_thai(ch):
            tokens.append(ch)
            i += 1
            continue
        m = _URL_TOK_RE.match(text, i)
        if m:
            tokens.append(m.group(0))
            i = m.end()
            continue
        m = _WORD_RE.match(text, i)
        if m:
            word = m.group(0)
            # \w also matches CJK; stop the word at the first CJK/Thai char
            # so those runs stay per-codepoint.
            for j, wch in enumerate(word):
                if _is_cjk_or_thai(wch):
                    word = word[:j]
                    break
            if word:
                tokens.append(word)
                i += len(word)
                continue
        tokens.append(ch)
        i += 1

    return NormalizedText(
        tokens=tuple(tokens),
        url_map=tuple(url_map),
        emoji_expansions=tuple(expansions),
        hashtags=tuple(hashtags),
        mentions=tuple(mentions),
    )


def is_url_placeholder(token: str) -> bool:
    return bool(_URL_PLACEHOLDER_RE.match(token))


def _char_ngrams_order(text: str, n: int) -> Counter:
    grams: Counter = Counter()
    for i in range(len(text) - n + 1):
        grams[text[i : i + n]] += 1
    return grams


def _char_ngrams(text: str) -> Counter:
    grams: Counter = Counter()
    for n in _NGRAM_ORDERS:
        grams.update(_char_ngrams_order(text, n))
    return grams


@lru_cache(maxsize=1)
def _language_profiles() -> dict[str, frozenset[str]]:
    profiles = {}
    for code in LANGUAGE_CODES:
        corpus = _resource_text(f"langs/{code}.txt")
        corpus = " ".join(corpus.split())
        grams = _char_ngrams(corpus)
        top = [g for g, _ in grams.most_common(_PROFILE_TOP_K)]
        profiles[code] = frozenset(top)
    return profiles


def detect_language(text: NormalizedText) -> LanguageTag:
    """Identify the dominant language by character n-gram profile coverage.

    Confidence is the count-weighted fraction of the text's 1-3 grams that
    appear in the best language's profile; below TAU_LANG the result is
    `other`. Deterministic and total.
    """
    # Rejoin per-codepoint CJK/Thai tokens without spaces so the n-grams
    # match how the profile corpora were counted.
    parts: list[str] = []
    prev_cjk = False
    for t in text.tokens:
        if is_url_placeholder(t):
            continue
        cur_cjk = len(t) == 1 and _is_cjk_or_thai(t)
        if parts and not (prev_cjk and cur_cjk):
            parts.append(" ")
        parts.append(t)
        prev_cjk = cur_cjk
    chars = "".join(parts).strip()
    if not chars:
        return LanguageTag(LANG_OTHER, 0.0)
    per_order = {n: _char_ngrams_order(chars, n) for n in _NGRAM_ORDERS}
    best_code, best_score = LANG_OTHER, 0.0
    for code in LANGUAGE_CODES:
        profile = _language_profiles()[code]
        score = 0.0
        weight_used = 0.0
        for n, weight in zip(_NGRAM_ORDERS, _ORDER_WEIGHTS):
            grams = per_order[n]
            total = sum(grams.values())
            if total == 0:
                continue
            hit = sum(c for g, c in grams.items() if g in profile)
            score += weight * (hit / total)
            weight_used += weight
        if weight_used:
            score /= weight_used
        if score > best_score:
            best_code, best_score = code, score
    if best_score < TAU_LANG:
        return LanguageTag(LANG_OTHER, best_score)
    return LanguageTag(best_code, best_score)


def jargon_tag(
    text: NormalizedText, lexicon: JargonLexicon
) -> list[tuple[int, str, str]]:
    """Report every lexicon term present in the token stream.

    Multi-codepoint CJK terms span several per-codepoint tokens, so terms
    are matched as contiguous token subsequences. Returns
    (start token index, term, category) triples in positional order.
    """
    if not lexicon.entries:
        raise ValueError("lexicon must be nonempty")
    term_tokens = [
        (tokenize(term).tokens, term, category)
        for term, _, category in lexicon.entries
    ]
    hits = []
    tokens = text.tokens
    for i in range(len(tokens)):
        for seq, term, category in term_tokens:
            if seq and tokens[i : i + len(seq)] == seq:
                hits.append((i, term, category))
    hits.sort(key=lambda h: h[0])
    return hits


def hashtag_stats(posts) -> tuple[float, float, float, float]:
    """(median, mean, fraction with >=3, fraction with >=5) hashtag counts."""
    if not posts:
        raise EmptyCohort("hashtag_stats needs a nonempty post list")
    counts = [len(p.hashtags) for p in posts]
    median = statistics.median(counts)
    mean = sum(counts) / len(counts)
    frac3 = sum(1 for c in counts if c >= 3) / len(counts)
    frac5 = sum(1 for c in counts if c >= 5) / len(counts)
    return (median, mean, frac3, frac5)


def reconstruct(norm: NormalizedText) -> str:
    """Inverse of tokenize up to whitespace: placeholders and emoji
    descriptions are swapped back for the originals."""
    out = []
    expansions = list(norm.emoji_expansions)
    url_by_id = dict(norm.url_map)
    for tok in norm.tokens:
        m = _URL_PLACEHOLDER_RE.match(tok)
        if m and int(m.group(1)) in url_by_id:
            out.append(url_by_id[int(m.group(1))])
            continue
        if expansions and expansions[0][1] == tok:
            out.append(expansions.pop(0)[0])
            continue
        out.append(tok)
    return "".join(out)
