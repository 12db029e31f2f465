"""Bag-of-words features and five from-scratch supervised classifiers.

Multinomial and Bernoulli naive Bayes (closed form, Laplace smoothing),
L2-regularized logistic regression (full-batch gradient descent with
backtracking), PA-I passive-aggressive, and SGD-trained hinge-loss
linear model. Everything is deterministic given data and seed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.special import expit, logsumexp

from agora.corpus import NON_POLITICAL, POLITICAL

MODEL_KINDS = ("mnb", "bnb", "lr", "pa", "sgd")
NB_KINDS = ("mnb", "bnb")
LINEAR_KINDS = ("lr", "pa", "sgd")
PROBABILISTIC_KINDS = ("mnb", "bnb", "lr")

# class axis order used throughout NB parameter arrays
CLASS_ORDER = (NON_POLITICAL, POLITICAL)

DEFAULT_HYPERPARAMETERS = {
    "mnb": {"alpha": 1.0},
    "bnb": {"alpha": 1.0},
    "lr": {"learning_rate": 0.1, "max_epochs": 1000, "tol": 1e-6, "l2": None},
    "pa": {"C": 1.0, "epochs": 5},
    "sgd": {"learning_rate": 0.01, "l2": 1e-4, "epochs": 5},
}

FeatureVector = tuple[tuple[int, float], ...]


class ModelError(ValueError):
    """Raised for invalid training data or unsupported model operations."""


@dataclass(frozen=True)
class FeatureSpace:
    """Term-to-column mapping built from training data only."""

    vocabulary: dict[str, int]

    @property
    def size(self) -> int:
        return len(self.vocabulary)


@dataclass(frozen=True)
class ProbThreshold:
    p: float

    def __post_init__(self):
        if not 0.0 < self.p < 1.0:
            raise ModelError(f"probability threshold must lie in (0, 1), got {self.p}")


@dataclass
class TrainedModel:
    kind: str
    feature_space: FeatureSpace
    parameters: dict[str, np.ndarray | float]
    hyperparameters: dict
    loss_trace: list[float] = field(default_factory=list)


def fit_feature_space(train_docs) -> FeatureSpace:
    """Index all distinct training tokens, sorted lexicographically."""
    vocab: set[str] = set()
    for doc in train_docs:
        vocab.update(_tokens_of(doc))
    if not vocab:
        raise ModelError("empty vocabulary: no tokens in training data")
    return FeatureSpace(vocabulary={t: i for i, t in enumerate(sorted(vocab))})


def _tokens_of(doc):
    return doc.tokens if hasattr(doc, "tokens") else doc


def vectorize(doc, space: FeatureSpace, binary: bool = False) -> FeatureVector:
    """Sparse (index, value) pairs; out-of-vocabulary tokens are dropped."""
    counts: dict[int, float] = {}
    for tok in _tokens_of(doc):
        idx = space.vocabulary.get(tok)
        if idx is not None:
            counts[idx] = 1.0 if binary else counts.get(idx, 0.0) + 1.0
    return tuple(sorted(counts.items()))


def _to_csr(vectors, size: int) -> csr_matrix:
    indptr = [0]
    indices: list[int] = []
    data: list[float] = []
    for vec in vectors:
        for idx, val in vec:
            indices.append(idx)
            data.append(val)
        indptr.append(len(indices))
    return csr_matrix((data, indices, indptr), shape=(len(indptr) - 1, size))


def _signed_labels(labels) -> np.ndarray:
    return np.array([1.0 if lab == POLITICAL else -1.0 for lab in labels])


def _check_two_classes(labels):
    present = set(labels)
    if present != {POLITICAL, NON_POLITICAL}:
        raise ModelError(f"training data must contain both classes, got {sorted(present)}")


# ---------------------------------------------------------------------------
# Naive Bayes
# ---------------------------------------------------------------------------


def _fit_mnb(vectors, labels, space, alpha):
    v = space.size
    term_counts = np.zeros((2, v))
    doc_counts = np.zeros(2)
    for vec, lab in zip(vectors, labels):
        c = CLASS_ORDER.index(lab)
        doc_counts[c] += 1
        for idx, val in vec:
            term_counts[c, idx] += val
    log_prior = np.log(doc_counts / doc_counts.sum())
    totals = term_counts.sum(axis=1, keepdims=True)
    log_prob = np.log(term_counts + alpha) - np.log(totals + alpha * v)
    return {"class_log_prior": log_prior, "feature_log_prob": log_prob}


def _fit_bnb(vectors, labels, space, alpha):
    v = space.size
    present_counts = np.zeros((2, v))
    doc_counts = np.zeros(2)
    for vec, lab in zip(vectors, labels):
        c = CLASS_ORDER.index(lab)
        doc_counts[c] += 1
        for idx, val in vec:
            if val > 0:
                present_counts[c, idx] += 1
    log_prior = np.log(doc_counts / doc_counts.sum())
    p = (present_counts + alpha) / (doc_counts[:, None] + 2.0 * alpha)
    return {
        "class_log_prior": log_prior,
        "feature_log_prob": np.log(p),
        "feature_log_neg_prob": np.log1p(-p),
    }


def _nb_joint_log_likelihood(model: TrainedModel, vec: FeatureVector) -> np.ndarray:
    params = model.parameters
    joint = params["class_log_prior"].copy()
    if model.kind == "mnb":
        for idx, val in vec:
            joint += val * params["feature_log_prob"][:, idx]
    else:
        joint += params["feature_log_neg_prob"].sum(axis=1)
        for idx, val in vec:
            if val > 0:
                joint += (
                    params["feature_log_prob"][:, idx]
                    - params["feature_log_neg_prob"][:, idx]
                )
    return joint


# ---------------------------------------------------------------------------
# Logistic regression
# ---------------------------------------------------------------------------


def lr_loss(w: np.ndarray, b: float, x: csr_matrix, y: np.ndarray, l2: float) -> float:
    """Mean logistic loss plus (l2/2)||w||^2; the bias is unregularized."""
    z = x @ w + b
    return float(np.mean(np.logaddexp(0.0, -y * z)) + 0.5 * l2 * np.dot(w, w))


def lr_gradient(w: np.ndarray, b: float, x: csr_matrix, y: np.ndarray, l2: float):
    """Analytic gradient of :func:`lr_loss` with respect to (w, b)."""
    n = x.shape[0]
    z = x @ w + b
    s = expit(-y * z)
    grad_w = -(x.T @ (y * s)) / n + l2 * w
    grad_b = -float(np.mean(y * s))
    return grad_w, grad_b


def _fit_lr(vectors, labels, space, hp):
    x = _to_csr(vectors, space.size)
    y = _signed_labels(labels)
    l2 = hp["l2"] if hp["l2"] is not None else 1.0 / len(labels)
    w = np.zeros(space.size)
    b = 0.0
    loss = lr_loss(w, b, x, y, l2)
    trace = [loss]
    for _ in range(hp["max_epochs"]):
        grad_w, grad_b = lr_gradient(w, b, x, y, l2)
        gnorm = float(np.sqrt(np.dot(grad_w, grad_w) + grad_b**2))
        if gnorm <= hp["tol"]:
            break
        # backtracking keeps the per-epoch loss monotonically non-increasing
        step = hp["learning_rate"]
        for _ in range(50):
            new_w = w - step * grad_w
            new_b = b - step * grad_b
            new_loss = lr_loss(new_w, new_b, x, y, l2)
            if new_loss <= loss:
                break
            step *= 0.5
        if new_loss > loss:
            break
        w, b, loss = new_w, new_b, new_loss
        trace.append(loss)
    return {"w": w, "b": b, "l2": l2}, trace


# ---------------------------------------------------------------------------
# Online linear models
# ---------------------------------------------------------------------------


def _fit_pa(vectors, labels, space, hp, seed):
    w = np.zeros(space.size)
    b = 0.0
    y = _signed_labels(labels)
    rng = np.random.default_rng(seed)
    for _ in range(hp["epochs"]):
        for i in rng.permutation(len(vectors)):
            vec = vectors[i]
            if not vec:
                continue
            idx = np.array([j for j, _ in vec], dtype=int)
            val = np.array([v for _, v in vec])
            margin = y[i] * (float(w[idx] @ val) + b)
            loss = max(0.0, 1.0 - margin)
            if loss > 0.0:
                tau = min(hp["C"], loss / float(val @ val))
                w[idx] += tau * y[i] * val
                b += tau * y[i]
    return {"w": w, "b": b}


def _fit_sgd(vectors, labels, space, hp, seed):
    w = np.zeros(space.size)
    b = 0.0
    y = _signed_labels(labels)
    rng = np.random.default_rng(seed)
    t = 0
    for _ in range(hp["epochs"]):
        for i in rng.permutation(len(vectors)):
            eta = hp["learning_rate"] / (1.0 + t)
            t += 1
            w *= 1.0 - eta * hp["l2"]
            vec = vectors[i]
            if not vec:
                continue
            idx = np.array([j for j, _ in vec], dtype=int)
            val = np.array([v for _, v in vec])
            margin = y[i] * (float(w[idx] @ val) + b)
            if margin < 1.0:
                w[idx] += eta * y[i] * val
                b += eta * y[i]
    return {"w": w, "b": b}


def train(
    kind: str,
    train_vectors,
    space: FeatureSpace,
    hyperparameters: dict | None = None,
    seed: int = 42,
) -> TrainedModel:
    """Fit one model kind on (FeatureVector, label) pairs."""
    pairs = list(train_vectors)
    vectors = [vec for vec, _ in pairs]
    labels = [lab for _, lab in pairs]
    return train_model(kind, space, vectors, labels, hyperparameters, seed)


def train_model(
    kind: str,
    space: FeatureSpace,
    vectors,
    labels,
    hyperparameters: dict | None = None,
    seed: int = 42,
) -> TrainedModel:
    """Fit one model kind on vectorized documents."""
    if kind not in MODEL_KINDS:
        raise ModelError(f"unknown model kind {kind!r}")
    labels = list(labels)
    vectors = list(vectors)
    _check_two_classes(labels)
    hp = dict(DEFAULT_HYPERPARAMETERS[kind])
    if hyperparameters:
        hp.update(hyperparameters)
    trace: list[float] = []
    if kind == "mnb":
        params = _fit_mnb(vectors, labels, space, hp["alpha"])
    elif kind == "bnb":
        params = _fit_bnb(vectors, labels, space, hp["alpha"])
    elif kind == "lr":
        params, trace = _fit_lr(vectors, labels, space, hp)
    elif kind == "pa":
        params = _fit_pa(vectors, labels, space, hp, seed)
    else:
        params = _fit_sgd(vectors, labels, space, hp, seed)
    return TrainedModel(
        kind=kind,
        feature_space=space,
        parameters=params,
        hyperparameters=hp,
        loss_trace=trace,
    )


def decision_value(model: TrainedModel, vec: FeatureVector) -> float:
    """Raw margin for linear kinds, political-minus-other log posterior for NB."""
    if model.kind in NB_KINDS:
        joint = _nb_joint_log_likelihood(model, vec)
        return float(joint[1] - joint[0])
    w, b = model.parameters["w"], model.parameters["b"]
    return float(sum(w[i] * v for i, v in vec) + b)


def predict(model: TrainedModel, vec: FeatureVector) -> str:
    """Label for one vector; a raw score of exactly 0 maps to non-political."""
    return POLITICAL if decision_value(model, vec) > 0.0 else NON_POLITICAL


def predict_proba(model: TrainedModel, vec: FeatureVector) -> float:
    """P(political | vec) for the probabilistic kinds (MNB, BNB, LR)."""
    if model.kind not in PROBABILISTIC_KINDS:
        raise ModelError(f"margin model {model.kind!r} has no calibrated probability")
    if model.kind == "lr":
        return float(expit(decision_value(model, vec)))
    joint = _nb_joint_log_likelihood(model, vec)
    return float(np.exp(joint[1] - logsumexp(joint)))


def classify_with_threshold(model: TrainedModel, vec: FeatureVector, t: ProbThreshold) -> str:
    """Political iff the political-class probability reaches t.p (inclusive)."""
    return POLITICAL if predict_proba(model, vec) >= t.p else NON_POLITICAL


# ---------------------------------------------------------------------------
# Serialization: versioned JSON, bit-exact round trip
# ---------------------------------------------------------------------------

_FORMAT_VERSION = 1


def save_model(model: TrainedModel, path) -> None:
    params = {}
    for key, value in model.parameters.items():
        params[key] = value.tolist() if isinstance(value, np.ndarray) else value
    payload = {
        "format_version": _FORMAT_VERSION,
        "kind": model.kind,
        "hyperparameters": model.hyperparameters,
        "vocabulary": model.feature_space.vocabulary,
        "parameters": params,
        "array_keys": [k for k, v in model.parameters.items() if isinstance(v, np.ndarray)],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, ensure_ascii=False)


def load_model(path) -> TrainedModel:
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    if payload.get("format_version") != _FORMAT_VERSION:
        raise ModelError(f"unsupported model format version {payload.get('format_version')!r}")
    array_keys = set(payload["array_keys"])
    params = {
        k: (np.array(v, dtype=float) if k in array_keys else v)
        for k, v in payload["parameters"].items()
    }
    return TrainedModel(
        kind=payload["kind"],
        feature_space=FeatureSpace(vocabulary={k: int(v) for k, v in payload["vocabulary"].items()}),
        parameters=params,
        hyperparameters=payload["hyperparameters"],
    )
