"""Binary and 11-way multiclass linear classifiers over TF-IDF vectors.

Logistic regression trained by seeded minibatch gradient descent: the
classic-classifier option, with calibrated confidences so the decision
threshold stays tunable. An HTTP seam is provided for plugging in an
external scorer service.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

import httpx
import numpy as np
from scipy import sparse

from .errors import (
    DegenerateTrainingSet,
    ScorerMalformedResponse,
    ScorerUnavailable,
    TooFewSamples,
    VocabularyMismatch,
)
from .features import SparseVector

MODEL_SCHEMA_VERSION = 1

CATEGORIES = (
    "Pornography",
    "Gambling",
    "IllegalDrug",
    "Surrogacy",
    "Harassment",
    "MoneyLaundering",
    "WeaponSales",
    "DataTheftLeakage",
    "ForgeryFakeDocuments",
    "Crowdturfing",
    "Others",
)


@dataclass(frozen=True)
class PipLabel:
    is_pip: bool
    confidence: float


@dataclass
class TrainConfig:
    learning_rate: float = 0.1
    l2: float = 1e-4
    epochs: int = 50
    seed: int = 42
    batch_size: int = 64
    threshold: float = 0.5


@dataclass
class LinearModel:
    weights: np.ndarray  # (dim,) binary, (n_classes, dim) multiclass
    bias: np.ndarray  # scalar array binary, (n_classes,) multiclass
    dim: int
    classes: tuple[str, ...] | None  # None for binary models
    training_meta: dict = field(default_factory=dict)

    def to_json(self, vocab_hash: str | None = None) -> str:
        return json.dumps(
            {
                "schema_version": MODEL_SCHEMA_VERSION,
                "weights": self.weights.tolist(),
                "bias": self.bias.tolist(),
                "dim": self.dim,
                "classes": list(self.classes) if self.classes else None,
                "training_meta": self.training_meta,
                "vocab_hash": vocab_hash,
            }
        )

    @classmethod
    def from_json(cls, payload: str) -> "LinearModel":
        data = json.loads(payload)
        if data.get("schema_version") != MODEL_SCHEMA_VERSION:
            raise ValueError("unsupported model schema version")
        return cls(
            weights=np.asarray(data["weights"], dtype=np.float64),
            bias=np.asarray(data["bias"], dtype=np.float64),
            dim=data["dim"],
            classes=tuple(data["classes"]) if data["classes"] else None,
            training_meta=data.get("training_meta", {}),
        )


def vocab_hash(vocab_json: str) -> str:
    return hashlib.sha256(vocab_json.encode("utf-8")).hexdigest()[:16]


def _to_csr(vectors: list[SparseVector], dim: int) -> sparse.csr_matrix:
    indptr = [0]
    indices: list[int] = []
    data: list[float] = []
    for v in vectors:
        indices.extend(v.indices)
        data.extend(v.weights)
        indptr.append(len(indices))
    return sparse.csr_matrix(
        (np.asarray(data), np.asarray(indices, dtype=np.int64), np.asarray(indptr)),
        shape=(len(vectors), dim),
    )


def _dim_of(vectors: list[SparseVector]) -> int:
    return max((v.indices[-1] + 1 for v in vectors if v.indices), default=1)


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _sgd(
    x: sparse.csr_matrix,
    y: np.ndarray,
    config: TrainConfig,
    sample_weight: np.ndarray | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Minibatch logistic SGD; y is (n,) or (n, k) in {0,1}.

    Deterministic: fixed seed drives the per-epoch shuffle and nothing else
    is stochastic. `sample_weight` (same shape as y) rescales each
    example's gradient contribution, e.g. for class balancing.
    """
    n, dim = x.shape
    k = 1 if y.ndim == 1 else y.shape[1]
    yk = y.reshape(n, k).astype(np.float64)
    wk = None if sample_weight is None else sample_weight.reshape(n, k)
    w = np.zeros((dim, k))
    b = np.zeros(k)
    rng = np.random.default_rng(config.seed)
    order = np.arange(n)
    for _ in range(config.epochs):
        rng.shuffle(order)
        for start in range(0, n, config.batch_size):
            idx = order[start : start + config.batch_size]
            xb = x[idx]
            p = _sigmoid(xb @ w + b)
            err = p - yk[idx]
            if wk is not None:
                err = err * wk[idx]
            grad_w = xb.T @ err / len(idx) + config.l2 * w
            grad_b = err.mean(axis=0)
            w -= config.learning_rate * grad_w
            b -= config.learning_rate * grad_b
    return w, b


def train_binary(
    samples: list[tuple[SparseVector, bool]],
    config: TrainConfig | None = None,
    dim: int | None = None,
) -> LinearModel:
    """Train the binary classifier; both classes must be present."""
    config = config or TrainConfig()
    labels = {bool(lab) for _, lab in samples}
    if labels != {True, False}:
        raise DegenerateTrainingSet("binary training needs both classes")
    vectors = [v for v, _ in samples]
    dim = dim or _dim_of(vectors)
    x = _to_csr(vectors, dim)
    y = np.asarray([1.0 if lab else 0.0 for _, lab in samples])
    w, b = _sgd(x, y, config)
    return LinearModel(
        weights=w[:, 0],
        bias=b[:1],
        dim=dim,
        classes=None,
        training_meta={
            "epochs": config.epochs,
            "learning_rate": config.learning_rate,
            "l2": config.l2,
            "seed": config.seed,
        },
    )


def _check_dim(model: LinearModel, vec: SparseVector) -> None:
    if vec.indices and vec.indices[-1] >= model.dim:
        raise VocabularyMismatch(
            f"vector index {vec.indices[-1]} exceeds model dimension {model.dim}"
        )


def decision_value(model: LinearModel, vec: SparseVector) -> float:
    _check_dim(model, vec)
    return float(
        sum(model.weights[i] * w for i, w in zip(vec.indices, vec.weights))
        + model.bias[0]
    )


def predict_binary(
    model: LinearModel, vec: SparseVector, threshold: float = 0.5
) -> PipLabel:
    """confidence = sigmoid(w.x + b); is_pip when above the threshold."""
    z = decision_value(model, vec)
    conf = float(_sigmoid(np.asarray([z]))[0])
    return PipLabel(is_pip=conf > threshold, confidence=conf)


def train_multiclass(
    samples: list[tuple[SparseVector, str]],
    config: TrainConfig | None = None,
    classes: tuple[str, ...] = CATEGORIES,
    dim: int | None = None,
) -> LinearModel:
    """One-vs-rest logistic models sharing the minibatch schedule."""
    config = config or TrainConfig()
    present = {lab for _, lab in samples}
    unknown = present - set(classes)
    if unknown:
        raise ValueError(f"unknown categories: {sorted(unknown)}")
    if len(present) < 2:
        raise DegenerateTrainingSet("multiclass training needs >=2 categories")
    vectors = [v for v, _ in samples]
    dim = dim or _dim_of(vectors)
    x = _to_csr(vectors, dim)
    class_index = {c: j for j, c in enumerate(classes)}
    n = len(samples)
    y = np.zeros((n, len(classes)))
    for i, (_, lab) in enumerate(samples):
        y[i, class_index[lab]] = 1.0
    # Balanced per-class weights so rare categories are not drowned out
    # by the dominant one in the shared one-vs-rest schedule.
    pos = y.sum(axis=0)
    w_pos = np.where(pos > 0, n / (2.0 * np.maximum(pos, 1.0)), 1.0)
    w_neg = np.where(pos < n, n / (2.0 * np.maximum(n - pos, 1.0)), 1.0)
    sample_weight = y * w_pos + (1.0 - y) * w_neg
    w, b = _sgd(x, y, config, sample_weight=sample_weight)
    return LinearModel(
        weights=w.T,
        bias=b,
        dim=dim,
        classes=tuple(classes),
        training_meta={
            "epochs": config.epochs,
            "learning_rate": config.learning_rate,
            "l2": config.l2,
            "seed": config.seed,
        },
    )


def predict_multiclass(model: LinearModel, vec: SparseVector) -> str:
    """argmax of per-class scores; ties break by class declaration order."""
    _check_dim(model, vec)
    scores = model.bias.copy()
    for i, w in zip(vec.indices, vec.weights):
        scores += model.weights[:, i] * w
    return model.classes[int(np.argmax(scores))]


@dataclass
class EvalReport:
    precision: float
    recall: float
    f1: float
    macro_precision: float
    macro_recall: float
    per_fold: list[dict]
    confusion: dict[str, dict[str, int]]


def _prf(tp: int, fp: int, fn: int) -> tuple[float, float, float]:
    p = tp / (tp + fp) if tp + fp else 0.0
    r = tp / (tp + fn) if tp + fn else 0.0
    f = 2 * p * r / (p + r) if p + r else 0.0
    return p, r, f


def stratified_folds(labels: list, k: int, seed: int) -> list[list[int]]:
    """Deterministic stratified fold assignment by seeded shuffle."""
    rng = np.random.default_rng(seed)
    by_label: dict = {}
    for i, lab in enumerate(labels):
        by_label.setdefault(lab, []).append(i)
    folds: list[list[int]] = [[] for _ in range(k)]
    cursor = 0
    for lab in sorted(by_label, key=str):
        idx = np.asarray(by_label[lab])
        rng.shuffle(idx)
        for i in idx:
            folds[cursor % k].append(int(i))
            cursor += 1
    return folds


def cross_validate(
    samples: list[tuple[SparseVector, object]],
    k: int,
    fit,
    predict,
    seed: int = 42,
    positive=True,
) -> EvalReport:
    """Stratified k-fold evaluation.

    `fit` maps a training subset to a model; `predict` maps (model, vector)
    to a label. Micro metrics treat `positive` as the positive class for
    binary labels; for multi-valued labels micro precision equals accuracy.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    if k > len(samples):
        raise TooFewSamples(f"k={k} exceeds sample count {len(samples)}")
    labels = [lab for _, lab in samples]
    label_set = sorted({str(lab) for lab in labels})
    folds = stratified_folds(labels, k, seed)
    confusion = {a: {b: 0 for b in label_set} for a in label_set}
    per_fold = []
    binary = set(labels) <= {True, False}
    for fold_id, test_idx in enumerate(folds):
        test_set = set(test_idx)
        train = [s for i, s in enumerate(samples) if i not in test_set]
        model = fit(train)
        tp = fp = fn = correct = 0
        for i in test_idx:
            vec, gold = samples[i]
            pred = predict(model, vec)
            confusion[str(gold)][str(pred)] += 1
            if pred == gold:
                correct += 1
            if binary:
                if pred == positive and gold == positive:
                    tp += 1
                elif pred == positive and gold != positive:
                    fp += 1
                elif pred != positive and gold == positive:
                    fn += 1
        per_fold.append(
            {
                "fold": fold_id,
                "n_test": len(test_idx),
                "accuracy": correct / len(test_idx) if test_idx else 0.0,
            }
        )
    if binary:
        pos, neg = str(positive), str(not positive)
        tp = confusion[pos][pos]
        fp = confusion[neg][pos]
        fn = confusion[pos][neg]
        precision, recall, f1 = _prf(tp, fp, fn)
    else:
        total = sum(sum(row.values()) for row in confusion.values())
        correct = sum(confusion[c][c] for c in label_set)
        precision = recall = correct / total if total else 0.0
        f1 = precision
    macro_p = []
    macro_r = []
    for c in label_set:
        tp_c = confusion[c][c]
        fp_c = sum(confusion[g][c] for g in label_set) - tp_c
        fn_c = sum(confusion[c].values()) - tp_c
        p, r, _ = _prf(tp_c, fp_c, fn_c)
        macro_p.append(p)
        macro_r.append(r)
    return EvalReport(
        precision=precision,
        recall=recall,
        f1=f1,
        macro_precision=sum(macro_p) / len(macro_p),
        macro_recall=sum(macro_r) / len(macro_r),
        per_fold=per_fold,
        confusion=confusion,
    )


def score_external(endpoint: str, text: str, timeout: float = 5.0) -> PipLabel:
    """POST the text to an external scorer; failures are raised, never
    silently defaulted."""
    try:
        resp = httpx.post(f"{endpoint.rstrip('/')}/score", json={"text": text}, timeout=timeout)
        resp.raise_for_status()
    except httpx.HTTPError as exc:
        raise ScorerUnavailable(str(exc)) from exc
    try:
        data = resp.json()
        return PipLabel(is_pip=bool(data["is_pip"]), confidence=float(data["confidence"]))
    except (ValueError, KeyError, TypeError) as exc:
        raise ScorerMalformedResponse(str(exc)) from exc
