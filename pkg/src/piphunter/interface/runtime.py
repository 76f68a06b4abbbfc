"""Shared wiring between the CLI and the API: model artifacts on disk,
the text->vector pipeline, and simulator construction from a manifest."""

from __future__ import annotations

import json
from pathlib import Path

from .. import classify, features
from ..contacts import TaggerModel, train_tagger
from ..errors import InvalidManifest
from ..osnsim import (
    RateBudget,
    SimManifest,
    Simulator,
    generate_corpus,
    generate_ner_corpus,
    post_document,
)
from ..textnorm import tokenize
from .config import PipelineConfig

VOCAB_FILE = "vocab.json"
BINARY_MODEL_FILE = "binary_model.json"
MULTICLASS_MODEL_FILE = "multiclass_model.json"
TAGGER_FILE = "tagger.json"


def doc_tokens(text: str) -> tuple[str, ...]:
    return features.augment_tokens(tokenize(text).tokens)


def vectorize(text: str, vocab: features.Vocabulary) -> features.SparseVector:
    return features.transform(doc_tokens(text), vocab)


class Runtime:
    """Lazily built artifacts over one store directory."""

    def __init__(self, config: PipelineConfig):
        config.validate()
        self.config = config
        self.root = Path(config.store_dir)
        self._vocab: features.Vocabulary | None = None
        self._binary: classify.LinearModel | None = None
        self._multiclass: classify.LinearModel | None = None
        self._tagger: TaggerModel | None = None
        self._corpus = None
        self._sim: Simulator | None = None

    # -- simulator -----------------------------------------------------

    def manifest(self) -> SimManifest:
        if not self.config.manifest:
            raise InvalidManifest("no manifest configured")
        return SimManifest.load(self.config.manifest)

    def corpus(self):
        if self._corpus is None:
            self._corpus = generate_corpus(self.manifest())
        return self._corpus

    def simulator(self) -> Simulator:
        if self._sim is None:
            budget = None
            if self.config.rate_requests:
                budget = RateBudget(
                    max_requests=self.config.rate_requests,
                    window_days=self.config.rate_window_days,
                )
            self._sim = Simulator(self.corpus(), rate_budget=budget)
        return self._sim

    # -- feature space -------------------------------------------------

    def train_config(self) -> classify.TrainConfig:
        c = self.config
        return classify.TrainConfig(
            learning_rate=c.learning_rate,
            l2=c.l2,
            epochs=c.epochs,
            seed=c.seed,
            batch_size=c.batch_size,
            threshold=c.threshold,
        )

    def training_samples(self):
        """(vector, is_pip, category) per generated post, fitting the
        vocabulary on first use."""
        corpus = self.corpus()
        docs = [doc_tokens(post_document(p)) for p in corpus.posts]
        if self._vocab is None:
            self._vocab = features.fit(docs)
            self._save_json(VOCAB_FILE, json.loads(self._vocab.to_json()))
        out = []
        for p, toks in zip(corpus.posts, docs):
            lab = corpus.labels[p.id]
            vec = features.transform(toks, self._vocab)
            out.append((vec, lab["is_pip"], lab["category"]))
        return out

    @property
    def vocab(self) -> features.Vocabulary:
        if self._vocab is None:
            path = self.root / VOCAB_FILE
            if path.exists():
                self._vocab = features.Vocabulary.from_json(path.read_text("utf-8"))
            else:
                self.training_samples()
        return self._vocab

    # -- models --------------------------------------------------------

    def train_binary(self) -> classify.LinearModel:
        samples = [(v, pip) for v, pip, _ in self.training_samples()]
        model = classify.train_binary(
            samples, self.train_config(), dim=len(self.vocab.term_index)
        )
        self._binary = model
        self._save_json(BINARY_MODEL_FILE, json.loads(model.to_json()))
        return model

    def train_multiclass(self) -> classify.LinearModel:
        samples = [(v, cat) for v, pip, cat in self.training_samples() if pip]
        model = classify.train_multiclass(
            samples, self.train_config(), dim=len(self.vocab.term_index)
        )
        self._multiclass = model
        self._save_json(MULTICLASS_MODEL_FILE, json.loads(model.to_json()))
        return model

    def binary_model(self) -> classify.LinearModel:
        if self._binary is None:
            path = self.root / BINARY_MODEL_FILE
            if path.exists():
                self._binary = classify.LinearModel.from_json(path.read_text("utf-8"))
            else:
                self.train_binary()
        return self._binary

    def multiclass_model(self) -> classify.LinearModel:
        if self._multiclass is None:
            path = self.root / MULTICLASS_MODEL_FILE
            if path.exists():
                self._multiclass = classify.LinearModel.from_json(path.read_text("utf-8"))
            else:
                self.train_multiclass()
        return self._multiclass

    def classifier(self):
        """text -> PipLabel closure for the hunter."""
        model = self.binary_model()
        vocab = self.vocab
        threshold = self.config.threshold

        def score(text: str):
            return classify.predict_binary(model, vectorize(text, vocab), threshold)

        return score

    def categorizer(self):
        model = self.multiclass_model()
        vocab = self.vocab

        def categorize(text: str) -> str:
            return classify.predict_multiclass(model, vectorize(text, vocab))

        return categorize

    # -- tagger --------------------------------------------------------

    def tagger(self) -> TaggerModel:
        if self._tagger is None:
            path = self.root / TAGGER_FILE
            if path.exists():
                data = json.loads(path.read_text("utf-8"))
                self._tagger = TaggerModel(weights=data["weights"])
            else:
                corpus = generate_ner_corpus(seed=self.config.seed, n=400)
                self._tagger = train_tagger(corpus)
                self._save_json(TAGGER_FILE, {"weights": self._tagger.weights})
        return self._tagger

    def _save_json(self, name: str, payload: dict) -> None:
        self.root.mkdir(parents=True, exist_ok=True)
        (self.root / name).write_text(
            json.dumps(payload, ensure_ascii=False), encoding="utf-8"
        )
