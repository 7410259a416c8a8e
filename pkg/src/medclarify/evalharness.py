"""Recall@k / precision@k scoring of clarification predictions.

For each evaluation instance the full candidate ranking is computed from
the reduced symptom set and the 1-based rank of the hidden symptom is
recorded. With exactly one hidden target per instance, precision@k is
recall@k divided by k.

CSV rows carry shortest-round-trip decimal floats, so parsing the file
reproduces the report values exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

from medclarify.clarifier import rank_candidates
from medclarify.corpus import ClarificationInstance
from medclarify.nbmodel import NaiveBayesModel

UNRANKED = "unranked"


@dataclass(frozen=True)
class EvalReport:
    k_max: int
    recall_at: tuple[float, ...]
    precision_at: tuple[float, ...]
    n_instances: int
    per_instance_rank: dict[str, Union[int, str]]


def evaluate(
    model: NaiveBayesModel,
    instances: Iterable[ClarificationInstance],
    k_max: int,
) -> EvalReport:
    """Rank every instance's candidates and aggregate recall/precision curves."""
    instances = list(instances)
    if k_max < 1:
        raise ValueError(f"k_max must be >= 1, got {k_max}")
    if not instances:
        raise ValueError("cannot evaluate an empty instance list")

    per_instance_rank: dict[str, Union[int, str]] = {}
    ranks: list[int] = []
    for instance in instances:
        if instance.hidden_symptom in instance.reduced_symptoms:
            raise ValueError(
                f"instance {instance.id!r}: hidden symptom "
                f"{instance.hidden_symptom!r} appears in reduced_symptoms; "
                "the conversion that produced it is corrupted"
            )
        ranking = rank_candidates(model, instance.reduced_symptoms, ())
        ordered = [c.symptom for c in ranking.candidates]
        try:
            rank = ordered.index(instance.hidden_symptom) + 1
        except ValueError:
            per_instance_rank[instance.id] = UNRANKED
            continue
        per_instance_rank[instance.id] = rank
        ranks.append(rank)

    n = len(instances)
    recall_at = []
    precision_at = []
    for k in range(1, k_max + 1):
        hits = sum(1 for r in ranks if r <= k)
        recall = hits / n
        recall_at.append(recall)
        precision_at.append(recall / k)
    return EvalReport(
        k_max=k_max,
        recall_at=tuple(recall_at),
        precision_at=tuple(precision_at),
        n_instances=n,
        per_instance_rank=per_instance_rank,
    )


def render_report(report: EvalReport, format: str = "text") -> bytes:
    """Render the recall/precision curve as a text table or CSV."""
    if format == "csv":
        lines = ["k,recall,precision"]
        for i in range(report.k_max):
            lines.append(
                f"{i + 1},{report.recall_at[i]!r},{report.precision_at[i]!r}"
            )
        return ("\n".join(lines) + "\n").encode("utf-8")
    if format == "text":
        lines = [
            f"instances: {report.n_instances}",
            f"{'k':>3}  {'recall':>10}  {'precision':>10}",
        ]
        for i in range(report.k_max):
            lines.append(
                f"{i + 1:>3}  {report.recall_at[i]:>10.6f}  "
                f"{report.precision_at[i]:>10.6f}"
            )
        return ("\n".join(lines) + "\n").encode("utf-8")
    raise ValueError(f"unknown report format {format!r}; expected 'text' or 'csv'")
