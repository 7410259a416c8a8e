"""Synthetic single-turn dialogue generator.

Produces template English patient/doctor exchanges from a per-disease
symptom profile derived deterministically from the KB and seed, so the
whole pipeline can run without any external data. A slice of dialogues
deliberately carries zero or two disease mentions to exercise the
single-diagnosis filter.
"""

from __future__ import annotations

import json
import random
from typing import Iterable

from medclarify.kb import KnowledgeBase, Term

_PATIENT_TEMPLATES = (
    "I have been having {symptoms} for the last {days} days. What could this be?",
    "Hello doctor, I am suffering from {symptoms}. Please advise.",
    "For about {days} days now I have {symptoms}. Should I be worried?",
    "My main complaints are {symptoms}. It started {days} days ago.",
)

_DOCTOR_REPEAT_TEMPLATES = (
    "Your {repeated} could point to {disease}. Please rest and drink fluids.",
    "Given the {repeated} you describe, this looks like {disease}.",
    "The {repeated} you mention suggests {disease}. Let us monitor it closely.",
)

_DOCTOR_PLAIN_TEMPLATES = (
    "This sounds like {disease}. It should settle within a week.",
    "Most likely this is {disease}. Come back if it gets worse.",
)

_DOCTOR_TWO_DISEASE_TEMPLATE = (
    "This could be {d1} or possibly {d2}; we should run some tests first."
)

_DOCTOR_NO_DISEASE_TEMPLATE = (
    "Please keep track of how it develops and come back for an exam."
)


def _surface(term: Term, rng: random.Random) -> str:
    if term.synonyms and rng.random() < 0.2:
        return rng.choice(term.synonyms)
    return term.canonical


def _join_phrases(phrases: list[str]) -> str:
    if len(phrases) == 1:
        return phrases[0]
    return ", ".join(phrases[:-1]) + " and " + phrases[-1]


def build_disease_profiles(
    kb: KnowledgeBase, seed: int
) -> dict[str, tuple[str, ...]]:
    """Assign each disease a characteristic symptom subset, deterministically."""
    rng = random.Random(seed)
    symptom_ids = sorted(kb.symptom_ids())
    profiles = {}
    for disease_id in sorted(kb.disease_ids()):
        size = rng.randint(3, min(7, len(symptom_ids)))
        profiles[disease_id] = tuple(sorted(rng.sample(symptom_ids, size)))
    return profiles


def generate_corpus(kb: KnowledgeBase, n: int, seed: int) -> list[dict]:
    """Generate `n` dialogue records `{"id", "patient", "doctor"}`."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    profiles = build_disease_profiles(kb, seed)
    rng = random.Random(seed * 2654435761 % 2**31 + 1)
    disease_ids = sorted(kb.disease_ids())
    symptom_ids = sorted(kb.symptom_ids())

    records = []
    for i in range(n):
        disease_id = rng.choice(disease_ids)
        profile = profiles[disease_id]
        n_symptoms = rng.randint(1, min(4, len(profile)))
        patient_ids = list(rng.sample(profile, n_symptoms))
        if rng.random() < 0.1:
            extra = rng.choice(symptom_ids)
            if extra not in patient_ids:
                patient_ids.append(extra)

        patient_phrases = [_surface(kb.by_id[s], rng) for s in patient_ids]
        patient_text = rng.choice(_PATIENT_TEMPLATES).format(
            symptoms=_join_phrases(patient_phrases), days=rng.randint(2, 14)
        )

        roll = rng.random()
        if roll < 0.05:
            doctor_text = _DOCTOR_NO_DISEASE_TEMPLATE
        elif roll < 0.15:
            other = rng.choice([d for d in disease_ids if d != disease_id])
            doctor_text = _DOCTOR_TWO_DISEASE_TEMPLATE.format(
                d1=kb.by_id[disease_id].canonical, d2=kb.by_id[other].canonical
            )
        elif roll < 0.5:
            repeated_ids = rng.sample(patient_ids, rng.randint(1, len(patient_ids)))
            repeated = _join_phrases(
                [kb.by_id[s].canonical for s in repeated_ids]
            )
            doctor_text = rng.choice(_DOCTOR_REPEAT_TEMPLATES).format(
                repeated=repeated, disease=kb.by_id[disease_id].canonical
            )
        else:
            doctor_text = rng.choice(_DOCTOR_PLAIN_TEMPLATES).format(
                disease=kb.by_id[disease_id].canonical
            )

        records.append(
            {"id": f"dlg-{i:05d}", "patient": patient_text, "doctor": doctor_text}
        )
    return records


def dump_corpus(records: Iterable[dict]) -> str:
    """Serialize generated records as line-delimited JSON."""
    return "".join(json.dumps(r, ensure_ascii=True) + "\n" for r in records)
