"""Shared fixtures: a mid-sized generated corpus with its feature space
and trained models, reused across test modules (session-scoped because
generation + training dominate suite runtime)."""

import pytest

from piphunter import classify, features
from piphunter.osnsim import Simulator, generate_corpus, post_document, table1_manifest
from piphunter.textnorm import tokenize


@pytest.fixture(scope="session")
def manifest():
    return table1_manifest(seed=7, n_pips=1200, n_benign=900)


@pytest.fixture(scope="session")
def corpus(manifest):
    return generate_corpus(manifest)


@pytest.fixture(scope="session")
def feature_space(corpus):
    docs = [features.augment_tokens(tokenize(post_document(p)).tokens) for p in corpus.posts]
    vocab = features.fit(docs)
    vecs = [features.transform(d, vocab) for d in docs]
    return vocab, vecs


@pytest.fixture(scope="session")
def binary_model(corpus, feature_space):
    vocab, vecs = feature_space
    samples = [(v, corpus.labels[p.id]["is_pip"]) for v, p in zip(vecs, corpus.posts)]
    return classify.train_binary(samples, dim=len(vocab.term_index))


@pytest.fixture(scope="session")
def pip_classifier(binary_model, feature_space):
    vocab, _ = feature_space

    def score(text):
        toks = features.augment_tokens(tokenize(text).tokens)
        return classify.predict_binary(binary_model, features.transform(toks, vocab))

    return score


@pytest.fixture()
def simulator(corpus):
    return Simulator(corpus)


_ACCEPTANCE_LINES: list = []


@pytest.fixture(scope="session")
def record_criterion():
    """Collects one PASS line per acceptance criterion; the lines are
    echoed in the terminal summary so they survive output capture."""

    def record(criterion: str, detail: str) -> None:
        _ACCEPTANCE_LINES.append(f"PASS [{criterion}] {detail}")

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
