"""Bernoulli Naive Bayes diagnosis model with add-alpha smoothing.

The posterior over diseases multiplies, for every symptom in the
vocabulary, the smoothed probability of that symptom being present or
absent. Scores are accumulated in log space: with 100+ binary factors a
direct product underflows float64.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import IO, Iterable, Mapping, Union

import numpy as np

from medclarify.corpus import TrainingExample
from medclarify.kb import KnowledgeBase

MODEL_FORMAT_VERSION = 1


@dataclass(frozen=True)
class NaiveBayesModel:
    """Immutable trained model: raw counts plus derived log-probability tables.

    disease_counts[d] is the number of training examples labelled d;
    joint_counts[d][s] the number of those that mention symptom s.
    """

    symptom_vocab: tuple[str, ...]
    disease_list: tuple[str, ...]
    alpha: float
    disease_counts: Mapping[str, int]
    joint_counts: Mapping[str, Mapping[str, int]]
    total_examples: int

    @cached_property
    def symptom_index(self) -> dict[str, int]:
        return {s: i for i, s in enumerate(self.symptom_vocab)}

    @cached_property
    def _log_tables(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        # (log P(s=1|d), log P(s=0|d)) as (|S|, |D|) arrays plus log prior (|D|,)
        n_s = len(self.symptom_vocab)
        n_d = len(self.disease_list)
        joint = np.zeros((n_s, n_d), dtype=np.float64)
        per_disease = np.zeros(n_d, dtype=np.float64)
        for j, disease in enumerate(self.disease_list):
            per_disease[j] = self.disease_counts.get(disease, 0)
            for symptom, count in self.joint_counts.get(disease, {}).items():
                joint[self.symptom_index[symptom], j] = count
        p1 = (joint + self.alpha) / (per_disease + 2.0 * self.alpha)
        prior = (per_disease + self.alpha) / (
            self.total_examples + self.alpha * n_d
        )
        return np.log(p1), np.log1p(-p1), np.log(prior)

    def conditional(self, symptom: str, disease: str) -> float:
        """Smoothed P(symptom present | disease)."""
        n_sd = self.joint_counts.get(disease, {}).get(symptom, 0)
        n_d = self.disease_counts.get(disease, 0)
        return (n_sd + self.alpha) / (n_d + 2.0 * self.alpha)

    def prior(self, disease: str) -> float:
        """Smoothed P(disease)."""
        return (self.disease_counts.get(disease, 0) + self.alpha) / (
            self.total_examples + self.alpha * len(self.disease_list)
        )


def train(
    examples: Iterable[TrainingExample], kb: KnowledgeBase, alpha: float = 1.0
) -> NaiveBayesModel:
    """Tally symptom/disease co-occurrence counts over the training examples.

    The vocabulary and disease list cover the whole knowledge base, sorted
    by id, so the model shape does not depend on which terms the data
    happened to mention.
    """
    if not alpha > 0:
        raise ValueError(f"alpha must be > 0, got {alpha}")
    vocab = tuple(sorted(kb.symptom_ids()))
    diseases = tuple(sorted(kb.disease_ids()))
    known_symptoms = set(vocab)
    known_diseases = set(diseases)

    disease_counts = {d: 0 for d in diseases}
    joint_counts: dict[str, dict[str, int]] = {d: {} for d in diseases}
    total = 0
    for example in examples:
        if example.diagnosis not in known_diseases:
            raise ValueError(f"unknown disease id {example.diagnosis!r} in training data")
        per_disease = joint_counts[example.diagnosis]
        for symptom in set(example.symptoms):
            if symptom not in known_symptoms:
                raise ValueError(f"unknown symptom id {symptom!r} in training data")
            per_disease[symptom] = per_disease.get(symptom, 0) + 1
        disease_counts[example.diagnosis] += 1
        total += 1

    return NaiveBayesModel(
        symptom_vocab=vocab,
        disease_list=diseases,
        alpha=float(alpha),
        disease_counts=disease_counts,
        joint_counts={d: dict(sorted(c.items())) for d, c in joint_counts.items()},
        total_examples=total,
    )


def log_scores(model: NaiveBayesModel, mentioned: Iterable[str]) -> np.ndarray:
    """Unnormalized per-disease log scores for a mentioned-symptom set.

    Every vocabulary symptom contributes a factor: P(s=1|d) if mentioned,
    1 - P(s=1|d) otherwise.
    """
    log_p1, log_p0, log_prior = model._log_tables
    present = np.zeros(len(model.symptom_vocab), dtype=bool)
    for symptom in mentioned:
        idx = model.symptom_index.get(symptom)
        if idx is None:
            raise ValueError(f"unknown symptom id {symptom!r}")
        present[idx] = True
    return log_prior + np.where(present[:, None], log_p1, log_p0).sum(axis=0)


def posterior(model: NaiveBayesModel, mentioned: Iterable[str]) -> dict[str, float]:
    """Normalized diagnosis posterior given the mentioned symptoms."""
    scores = log_scores(model, mentioned)
    shifted = np.exp(scores - scores.max())
    probs = shifted / shifted.sum()
    return dict(zip(model.disease_list, probs.tolist()))


def save_model(model: NaiveBayesModel) -> bytes:
    """Serialize the model as UTF-8 JSON.

    Raw counts, not probabilities, are stored: integer counts are
    bit-stable across platforms where floats may not be.
    """
    doc = {
        "version": MODEL_FORMAT_VERSION,
        "alpha": model.alpha,
        "symptom_vocab": list(model.symptom_vocab),
        "disease_list": list(model.disease_list),
        "total_examples": model.total_examples,
        "disease_counts": {d: model.disease_counts.get(d, 0) for d in model.disease_list},
        "joint_counts": {
            d: {s: c for s, c in sorted(model.joint_counts.get(d, {}).items()) if c}
            for d in model.disease_list
        },
    }
    return json.dumps(doc, sort_keys=True, ensure_ascii=True).encode("utf-8")


def load_model(source: Union[bytes, str, IO]) -> NaiveBayesModel:
    """Deserialize and validate a model written by save_model."""
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    try:
        doc = json.loads(source)
    except json.JSONDecodeError as exc:
        raise ValueError(f"model file is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ValueError("model file must contain a JSON object")
    version = doc.get("version")
    if version != MODEL_FORMAT_VERSION:
        raise ValueError(
            f"unsupported model version {version!r}; "
            f"this build reads version {MODEL_FORMAT_VERSION}"
        )
    try:
        model = NaiveBayesModel(
            symptom_vocab=tuple(doc["symptom_vocab"]),
            disease_list=tuple(doc["disease_list"]),
            alpha=float(doc["alpha"]),
            disease_counts={d: int(c) for d, c in doc["disease_counts"].items()},
            joint_counts={
                d: {s: int(c) for s, c in counts.items()}
                for d, counts in doc["joint_counts"].items()
            },
            total_examples=int(doc["total_examples"]),
        )
    except (KeyError, TypeError, AttributeError) as exc:
        raise ValueError(f"malformed model file: {exc}") from exc
    _validate_model(model)
    return model


def _validate_model(model: NaiveBayesModel) -> None:
    if not model.alpha > 0:
        raise ValueError(f"model alpha must be > 0, got {model.alpha}")
    vocab = set(model.symptom_vocab)
    diseases = set(model.disease_list)
    if sum(model.disease_counts.values()) != model.total_examples:
        raise ValueError("disease counts do not sum to total_examples")
    for disease, counts in model.joint_counts.items():
        if disease not in diseases:
            raise ValueError(f"joint counts reference unknown disease {disease!r}")
        n_d = model.disease_counts.get(disease, 0)
        for symptom, count in counts.items():
            if symptom not in vocab:
                raise ValueError(f"joint counts reference unknown symptom {symptom!r}")
            if not 0 <= count <= n_d:
                raise ValueError(
                    f"count for ({symptom!r}, {disease!r}) is {count}, "
                    f"outside [0, {n_d}]"
                )


def load_model_file(path: str) -> NaiveBayesModel:
    """Load a model from a file path, naming the path on I/O failure."""
    try:
        with open(path, "rb") as fh:
            return load_model(fh)
    except OSError as exc:
        raise ValueError(f"cannot read model {path!r}: {exc}") from exc
