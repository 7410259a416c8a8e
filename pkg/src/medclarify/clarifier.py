"""Candidate clarification-question ranking.

Each not-yet-mentioned symptom is scored by assuming the patient has it,
recomputing the diagnosis posterior, and taking the ratio of the top two
disease probabilities: a large ratio means that answer would settle the
diagnosis. The normalizer cancels in the quotient, so normalized and raw
scores induce the same ranking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from medclarify.nbmodel import NaiveBayesModel, log_scores


@dataclass(frozen=True)
class CandidateScore:
    symptom: str
    ratio: float
    top_disease: str
    runner_up: str


@dataclass(frozen=True)
class CandidateRanking:
    query_symptoms: frozenset[str]
    excluded: frozenset[str]
    candidates: tuple[CandidateScore, ...]


def _candidate_log_scores(
    model: NaiveBayesModel,
    mentioned: frozenset[str],
    excluded: frozenset[str],
) -> list[tuple[str, np.ndarray]]:
    """Unnormalized log scores per candidate, as shared base plus delta.

    Flipping only the candidate's own absent-to-present factor keeps
    candidates with identical count profiles bit-identical, so exact ties
    fall through to the id tie-break in every downstream comparison.
    """
    log_p1, log_p0, _ = model._log_tables
    base = log_scores(model, mentioned)
    rows = []
    for symptom in model.symptom_vocab:
        if symptom in mentioned or symptom in excluded:
            continue
        idx = model.symptom_index[symptom]
        rows.append((symptom, base + (log_p1[idx] - log_p0[idx])))
    return rows


def _score_candidates(
    model: NaiveBayesModel,
    mentioned: frozenset[str],
    excluded: frozenset[str],
    normalized: bool,
) -> tuple[CandidateScore, ...]:
    # Top-two selection happens on the requested scale; the ratio itself
    # is the exponentiated log-score gap, where the posterior normalizer
    # cancels exactly instead of leaving 1-ulp residue that would defeat
    # the id tie-break on mathematically equal candidates.
    scores = []
    for symptom, cand_scores in _candidate_log_scores(model, mentioned, excluded):
        if normalized:
            shifted = np.exp(cand_scores - cand_scores.max())
            values = (shifted / shifted.sum()).tolist()
        else:
            values = np.exp(cand_scores).tolist()
        ordered = sorted(
            zip(model.disease_list, values, cand_scores.tolist()),
            key=lambda t: (-t[1], t[0]),
        )
        (d1, _, l1), (d2, _, l2) = ordered[0], ordered[1]
        scores.append(
            CandidateScore(
                symptom=symptom,
                ratio=math.exp(abs(l1 - l2)),
                top_disease=d1,
                runner_up=d2,
            )
        )
    scores.sort(key=lambda c: (-c.ratio, c.symptom))
    return tuple(scores)


def _validate_query(
    model: NaiveBayesModel, mentioned: frozenset[str], excluded: frozenset[str]
) -> None:
    if len(model.disease_list) < 2:
        raise ValueError(
            "candidate ranking needs a model with at least 2 diseases; "
            f"got {len(model.disease_list)}"
        )
    overlap = mentioned & excluded
    if overlap:
        raise ValueError(
            f"mentioned and excluded symptom sets overlap: {sorted(overlap)}"
        )
    for symptom in sorted(excluded):
        if symptom not in model.symptom_index:
            raise ValueError(f"unknown symptom id {symptom!r}")


def rank_candidates(
    model: NaiveBayesModel,
    mentioned: Iterable[str],
    excluded: Iterable[str] = (),
) -> CandidateRanking:
    """Score every candidate symptom outside `mentioned` and `excluded`.

    Candidates are evaluated with the candidate assumed present; denied
    symptoms belong in `excluded`, which only removes them from the
    candidate pool. Sorted by ratio descending, ties by symptom id.
    """
    mentioned_set = frozenset(mentioned)
    excluded_set = frozenset(excluded)
    _validate_query(model, mentioned_set, excluded_set)
    return CandidateRanking(
        query_symptoms=mentioned_set,
        excluded=excluded_set,
        candidates=_score_candidates(model, mentioned_set, excluded_set, normalized=True),
    )


def rank_candidates_unnormalized(
    model: NaiveBayesModel,
    mentioned: Iterable[str],
    excluded: Iterable[str] = (),
) -> CandidateRanking:
    """Ranking with top-two selection on raw (unnormalized) scores.

    Must order identically to rank_candidates: the posterior normalizer
    cancels in the top-two quotient. Kept as a verification surface.
    """
    mentioned_set = frozenset(mentioned)
    excluded_set = frozenset(excluded)
    _validate_query(model, mentioned_set, excluded_set)
    return CandidateRanking(
        query_symptoms=mentioned_set,
        excluded=excluded_set,
        candidates=_score_candidates(model, mentioned_set, excluded_set, normalized=False),
    )


def top_clarification(ranking: CandidateRanking, k: int) -> list[str]:
    """First min(k, len(candidates)) symptom ids in ranking order."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    return [c.symptom for c in ranking.candidates[:k]]
