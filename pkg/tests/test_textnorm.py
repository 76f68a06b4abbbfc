"""Text normalization: tokenization, language id, jargon, hashtag stats."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from piphunter import textnorm
from piphunter.errors import EmptyCohort
from piphunter.store import Post
from piphunter.textnorm import (
    LanguageTag,
    detect_language,
    hashtag_stats,
    jargon_tag,
    load_emoji_table,
    load_jargon_lexicon,
    reconstruct,
    tokenize,
)


class TestTokenize:
    def test_url_placeholders_in_order(self):
        norm = tokenize("see https://a.example/x and https://b.example/y.")
        assert "url-1" in norm.tokens and "url-2" in norm.tokens
        assert norm.url_map == (
            (1, "https://a.example/x"),
            (2, "https://b.example/y"),
        )

    def test_url_trailing_punctuation_stripped(self):
        norm = tokenize("go to https://t.me/abc, now")
        assert norm.url_map[0][1] == "https://t.me/abc"

    def test_emoji_expansion(self):
        norm = tokenize("contact ✈ me")
        assert "airplane" in norm.tokens
        assert norm.emoji_expansions == (("✈", "airplane"),)

    def test_emoji_table_loads(self):
        table = load_emoji_table()
        assert table["✈"] == "airplane"
        assert table["\U0001F427"] == "penguin"

    def test_cjk_per_codepoint(self):
        norm = tokenize("加微信abc123")
        assert norm.tokens[:3] == ("加", "微", "信")
        assert "abc123" in norm.tokens

    def test_hashtags_and_mentions_captured(self):
        norm = tokenize("hot #deal for @alice #另一个")
        assert norm.hashtags == ("deal", "另一个")
        assert norm.mentions == ("alice",)
        assert "#deal" in norm.tokens  # kept as a whole token too

    def test_empty_text(self):
        assert tokenize("").tokens == ()

    def test_reconstruct_restores_urls_and_emoji(self):
        text = "ping https://t.me/abc ✈ #tag done"
        norm = tokenize(text)
        assert reconstruct(norm) == text.replace(" ", "")

    @settings(max_examples=200, deadline=None)
    @given(
        st.text(
            alphabet="abcXYZ019 汉字漢試ทดสอ#@.,!?'()",
            max_size=60,
        )
    )
    def test_reconstruct_round_trip_up_to_whitespace(self, text):
        norm = tokenize(text)
        assert reconstruct(norm) == "".join(text.split())

    @settings(max_examples=100, deadline=None)
    @given(st.text(max_size=80))
    def test_tokenize_total_and_deterministic(self, text):
        assert tokenize(text) == tokenize(text)


class TestDetectLanguage:
    @pytest.mark.parametrize(
        "text,code",
        [
            ("这是中文推文", "zh"),
            ("this is an english tweet about coffee", "en"),
            ("これはテストです", "ja"),
            ("วันนี้อากาศดีมาก", "th"),
        ],
    )
    def test_known_languages(self, text, code):
        tag = detect_language(tokenize(text))
        assert tag.code == code
        assert tag.confidence >= 0.8

    def test_other_below_threshold(self):
        tag = detect_language(tokenize("zzz qqq xxyyzz vvkk"))
        assert isinstance(tag, LanguageTag)
        assert 0.0 <= tag.confidence <= 1.0

    def test_empty_is_other(self):
        assert detect_language(tokenize("")) == LanguageTag("other", 0.0)

    @settings(max_examples=50, deadline=None)
    @given(st.text(max_size=60))
    def test_confidence_bounded(self, text):
        tag = detect_language(tokenize(text))
        assert 0.0 <= tag.confidence <= 1.0
        assert tag.code in textnorm.LANGUAGE_CODES + (textnorm.LANG_OTHER,)


class TestJargon:
    def test_lexicon_loads_with_categories(self):
        lex = load_jargon_lexicon()
        terms = {t for t, _, _ in lex.entries}
        assert {"蓝精灵", "跑分", "四件套"} <= terms
        by_term = {t: c for t, _, c in lex.entries}
        assert by_term["蓝精灵"] == "Illegal Drug"
        assert by_term["跑分"] == "Money Laundering"

    def test_tags_multi_codepoint_terms(self):
        lex = load_jargon_lexicon()
        hits = jargon_tag(tokenize("出售蓝精灵 支持跑分"), lex)
        found = {(term, cat) for _, term, cat in hits}
        assert ("蓝精灵", "Illegal Drug") in found
        assert ("跑分", "Money Laundering") in found
        starts = [i for i, _, _ in hits]
        assert starts == sorted(starts)

    def test_no_hits_on_benign_text(self):
        assert jargon_tag(tokenize("nice weather today"), load_jargon_lexicon()) == []

    def test_empty_lexicon_rejected(self):
        with pytest.raises(ValueError):
            jargon_tag(tokenize("x"), textnorm.JargonLexicon(entries=()))


class TestHashtagStats:
    def test_known_values(self):
        posts = [
            Post(id=str(i), author_id="a", text="", hashtags=["t"] * k)
            for i, k in enumerate([0, 2, 3, 5, 10])
        ]
        median, mean, frac3, frac5 = hashtag_stats(posts)
        assert median == 3
        assert mean == pytest.approx(4.0)
        assert frac3 == pytest.approx(3 / 5)
        assert frac5 == pytest.approx(2 / 5)

    def test_empty_cohort(self):
        with pytest.raises(EmptyCohort):
            hashtag_stats([])

    def test_pip_vs_benign_signal(self, corpus):
        """Planted corpora separate PIP and benign hashtag habits."""
        pips = [p for p in corpus.posts if corpus.labels[p.id]["is_pip"]]
        benign = [p for p in corpus.posts if not corpus.labels[p.id]["is_pip"]]
        _, pip_mean, _, _ = hashtag_stats(pips)
        _, benign_mean, _, _ = hashtag_stats(benign)
        assert pip_mean > benign_mean + 2
