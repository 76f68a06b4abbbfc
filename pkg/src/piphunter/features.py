"""From-scratch TF-IDF vectorization over normalized tokens.

idf uses the smoothed convention ln((1+N)/(1+df))+1; tf is the raw count;
vectors are L2-normalized. Index assignment is deterministic by
lexicographic term order so identical corpora always produce identical
vocabularies.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .errors import EmptyCorpus
from .textnorm import NormalizedText, _is_cjk_or_thai

SCHEMA_VERSION = 1

DEFAULT_MIN_DF = 2


def _tokens_of(doc) -> tuple[str, ...]:
    if isinstance(doc, NormalizedText):
        return doc.tokens
    return tuple(doc)


def augment_tokens(tokens) -> list[str]:
    """Add character bigrams over consecutive single-codepoint CJK/Thai
    tokens; unigram char tokens alone carry too little signal for those
    scripts."""
    out = list(tokens)
    prev = None
    for tok in tokens:
        cur = tok if len(tok) == 1 and _is_cjk_or_thai(tok) else None
        if prev is not None and cur is not None:
            out.append(prev + cur)
        prev = cur
    return out


@dataclass(frozen=True)
class SparseVector:
    """Index-sorted sparse feature vector."""

    indices: tuple[int, ...]
    weights: tuple[float, ...]

    def __post_init__(self):
        if len(self.indices) != len(self.weights):
            raise ValueError("indices/weights length mismatch")
        if any(b <= a for a, b in zip(self.indices, self.indices[1:])):
            raise ValueError("indices must be strictly increasing")

    def norm(self) -> float:
        return math.sqrt(sum(w * w for w in self.weights))


@dataclass(frozen=True)
class Vocabulary:
    term_index: dict[str, int]
    document_frequency: dict[str, int]
    n_docs: int

    def __len__(self) -> int:
        return len(self.term_index)

    def idf(self, term: str) -> float:
        df = self.document_frequency[term]
        return math.log((1 + self.n_docs) / (1 + df)) + 1.0

    def idf_by_index(self) -> list[float]:
        cached = self.__dict__.get("_idf_by_index")
        if cached is None:
            cached = [0.0] * len(self.term_index)
            for t, i in self.term_index.items():
                cached[i] = self.idf(t)
            object.__setattr__(self, "_idf_by_index", cached)
        return cached

    def to_json(self) -> str:
        return json.dumps(
            {
                "schema_version": SCHEMA_VERSION,
                "n_docs": self.n_docs,
                "terms": [
                    {"term": t, "index": i, "df": self.document_frequency[t]}
                    for t, i in sorted(self.term_index.items(), key=lambda kv: kv[1])
                ],
            },
            ensure_ascii=False,
        )

    @classmethod
    def from_json(cls, payload: str) -> "Vocabulary":
        data = json.loads(payload)
        if data.get("schema_version") != SCHEMA_VERSION:
            raise ValueError("unsupported vocabulary schema version")
        term_index = {e["term"]: e["index"] for e in data["terms"]}
        df = {e["term"]: e["df"] for e in data["terms"]}
        return cls(term_index=term_index, document_frequency=df, n_docs=data["n_docs"])


def fit(corpus, min_df: int = DEFAULT_MIN_DF) -> Vocabulary:
    """Build a vocabulary over all tokens with df >= min_df."""
    if not corpus:
        raise EmptyCorpus("cannot fit a vocabulary on an empty corpus")
    if min_df < 1:
        raise ValueError("min_df must be >= 1")
    df: dict[str, int] = {}
    for doc in corpus:
        for term in set(augment_tokens(_tokens_of(doc))):
            df[term] = df.get(term, 0) + 1
    kept = sorted(t for t, c in df.items() if c >= min_df)
    if not kept:
        raise EmptyCorpus("no term meets min_df; vocabulary would be empty")
    return Vocabulary(
        term_index={t: i for i, t in enumerate(kept)},
        document_frequency={t: df[t] for t in kept},
        n_docs=len(corpus),
    )


def transform(doc, vocab: Vocabulary) -> SparseVector:
    """tf-idf weights, L2-normalized; OOV tokens are ignored."""
    counts: dict[int, float] = {}
    for term in augment_tokens(_tokens_of(doc)):
        idx = vocab.term_index.get(term)
        if idx is not None:
            counts[idx] = counts.get(idx, 0.0) + 1.0
    if not counts:
        return SparseVector(indices=(), weights=())
    idf = vocab.idf_by_index()
    items = sorted(counts.items())
    weights = [tf * idf[i] for i, tf in items]
    norm = math.sqrt(sum(w * w for w in weights))
    weights = [w / norm for w in weights]
    return SparseVector(
        indices=tuple(i for i, _ in items), weights=tuple(weights)
    )
