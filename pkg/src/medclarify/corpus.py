"""Single-turn dialogue ingestion and conversion to the clarification task.

Dialogues whose doctor response names exactly one disease are kept; of
those, the ones with a symptom repeated by the doctor become evaluation
instances (one repeated symptom hidden at random), the rest become
training examples.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import IO, Iterable, Union

from medclarify.kb import DISEASE, SYMPTOM, KnowledgeBase, extract_mentions

# Lehmer / Park-Miller multiplicative congruential generator. Pinned so the
# hidden-symptom pick is reproducible in any implementation language.
_LCG_MULTIPLIER = 16807
_LCG_MODULUS = 2147483647


@dataclass(frozen=True)
class DialoguePair:
    id: str
    patient_text: str
    doctor_text: str


@dataclass(frozen=True)
class ProcessedDialogue:
    id: str
    patient_symptoms: tuple[str, ...]
    doctor_symptoms: tuple[str, ...]
    diagnoses: tuple[str, ...]


@dataclass(frozen=True)
class TrainingExample:
    symptoms: tuple[str, ...]
    diagnosis: str


@dataclass(frozen=True)
class ClarificationInstance:
    id: str
    reduced_symptoms: tuple[str, ...]
    hidden_symptom: str
    diagnosis: str


@dataclass(frozen=True)
class CorpusSplit:
    training: tuple[TrainingExample, ...]
    evaluation: tuple[ClarificationInstance, ...]
    seed: int


def ingest_corpus(source: Union[bytes, str, IO]) -> list[DialoguePair]:
    """Parse a line-delimited corpus file into DialoguePairs, order preserved."""
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        source = source.decode("utf-8")

    pairs: list[DialoguePair] = []
    seen: set[str] = set()
    for lineno, line in enumerate(source.splitlines(), start=1):
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ValueError(f"corpus line {lineno}: invalid JSON ({exc})") from exc
        if not isinstance(record, dict):
            raise ValueError(f"corpus line {lineno}: expected a JSON object")
        pair_id = record.get("id")
        if not isinstance(pair_id, str) or not pair_id:
            raise ValueError(f"corpus line {lineno}: missing non-empty string 'id'")
        if pair_id in seen:
            raise ValueError(f"corpus line {lineno}: duplicate dialogue id {pair_id!r}")
        seen.add(pair_id)
        patient = record.get("patient")
        doctor = record.get("doctor")
        if not isinstance(patient, str) or not isinstance(doctor, str):
            raise ValueError(
                f"corpus line {lineno}: 'patient' and 'doctor' must be strings"
            )
        pairs.append(DialoguePair(id=pair_id, patient_text=patient, doctor_text=doctor))
    return pairs


def process_dialogue(pair: DialoguePair, kb: KnowledgeBase) -> ProcessedDialogue:
    """Extract symptom and disease mentions from both sides of a dialogue."""
    return ProcessedDialogue(
        id=pair.id,
        patient_symptoms=tuple(extract_mentions(pair.patient_text, kb, SYMPTOM)),
        doctor_symptoms=tuple(extract_mentions(pair.doctor_text, kb, SYMPTOM)),
        diagnoses=tuple(extract_mentions(pair.doctor_text, kb, DISEASE)),
    )


def filter_single_diagnosis(
    dialogues: Iterable[ProcessedDialogue],
) -> list[ProcessedDialogue]:
    """Keep only dialogues where the doctor proposes exactly one diagnosis."""
    return [d for d in dialogues if len(d.diagnoses) == 1]


def convert_to_clarification(
    dialogues: Iterable[ProcessedDialogue], seed: int
) -> CorpusSplit:
    """Split filtered dialogues into training examples and evaluation instances.

    A dialogue whose patient and doctor symptom sets intersect yields an
    evaluation instance with one of the repeated symptoms hidden; the pick
    uses the pinned LCG, one draw per dialogue in corpus order, indexing
    into the lexicographically sorted candidate list. Dialogues without a
    repeat become training examples.
    """
    state = max(seed, 1)
    training: list[TrainingExample] = []
    evaluation: list[ClarificationInstance] = []
    for dialogue in dialogues:
        state = (_LCG_MULTIPLIER * state) % _LCG_MODULUS
        if len(dialogue.diagnoses) != 1:
            raise ValueError(
                f"dialogue {dialogue.id!r} has {len(dialogue.diagnoses)} diagnoses; "
                "convert_to_clarification requires exactly one"
            )
        diagnosis = dialogue.diagnoses[0]
        repeated = sorted(set(dialogue.patient_symptoms) & set(dialogue.doctor_symptoms))
        if repeated:
            hidden = repeated[state % len(repeated)]
            reduced = tuple(s for s in dialogue.patient_symptoms if s != hidden)
            evaluation.append(
                ClarificationInstance(
                    id=dialogue.id,
                    reduced_symptoms=reduced,
                    hidden_symptom=hidden,
                    diagnosis=diagnosis,
                )
            )
        else:
            training.append(
                TrainingExample(symptoms=dialogue.patient_symptoms, diagnosis=diagnosis)
            )
    return CorpusSplit(training=tuple(training), evaluation=tuple(evaluation), seed=seed)


def dump_training(examples: Iterable[TrainingExample]) -> str:
    """Serialize training examples as line-delimited JSON (symptoms sorted)."""
    lines = [
        json.dumps(
            {"symptoms": sorted(ex.symptoms), "diagnosis": ex.diagnosis},
            ensure_ascii=True,
        )
        for ex in examples
    ]
    return "".join(line + "\n" for line in lines)


def dump_evaluation(instances: Iterable[ClarificationInstance]) -> str:
    """Serialize evaluation instances as line-delimited JSON (symptoms sorted)."""
    lines = [
        json.dumps(
            {
                "id": inst.id,
                "reduced_symptoms": sorted(inst.reduced_symptoms),
                "hidden_symptom": inst.hidden_symptom,
                "diagnosis": inst.diagnosis,
            },
            ensure_ascii=True,
        )
        for inst in instances
    ]
    return "".join(line + "\n" for line in lines)


def load_training(source: Union[bytes, str, IO]) -> list[TrainingExample]:
    """Parse a train.jsonl stream back into TrainingExamples."""
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    examples = []
    for lineno, line in enumerate(source.splitlines(), start=1):
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ValueError(f"training line {lineno}: invalid JSON ({exc})") from exc
        try:
            examples.append(
                TrainingExample(
                    symptoms=tuple(record["symptoms"]), diagnosis=record["diagnosis"]
                )
            )
        except (KeyError, TypeError) as exc:
            raise ValueError(f"training line {lineno}: malformed record") from exc
    return examples


def load_evaluation(source: Union[bytes, str, IO]) -> list[ClarificationInstance]:
    """Parse an eval.jsonl stream back into ClarificationInstances."""
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    instances = []
    for lineno, line in enumerate(source.splitlines(), start=1):
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ValueError(f"eval line {lineno}: invalid JSON ({exc})") from exc
        try:
            instance = ClarificationInstance(
                id=record["id"],
                reduced_symptoms=tuple(record["reduced_symptoms"]),
                hidden_symptom=record["hidden_symptom"],
                diagnosis=record["diagnosis"],
            )
        except (KeyError, TypeError) as exc:
            raise ValueError(f"eval line {lineno}: malformed record") from exc
        if instance.hidden_symptom in instance.reduced_symptoms:
            raise ValueError(
                f"eval line {lineno}: hidden symptom {instance.hidden_symptom!r} "
                "also present in reduced_symptoms"
            )
        instances.append(instance)
    return instances
