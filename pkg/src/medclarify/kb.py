"""Symptom/disease knowledge base: loading and exact-match mention extraction.

Matching is case-insensitive, word-boundary aware (tokens are maximal
alphanumeric runs), longest-match-first, and non-overlapping. Multi-word
terms must appear as a contiguous token sequence.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import cached_property
from typing import IO, Union

SYMPTOM = "symptom"
DISEASE = "disease"
_KINDS = (SYMPTOM, DISEASE)

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


def tokenize(text: str) -> list[str]:
    """Lowercase `text` and split it on non-alphanumeric boundaries."""
    return _TOKEN_RE.findall(text.lower())


@dataclass(frozen=True)
class Term:
    """One knowledge-base entry: a symptom or disease with its surface forms."""

    id: str
    canonical: str
    synonyms: tuple[str, ...]
    kind: str

    def surfaces(self) -> tuple[str, ...]:
        return (self.canonical, *self.synonyms)


@dataclass(frozen=True)
class KnowledgeBase:
    """Immutable collection of symptom and disease terms.

    Safe for concurrent reads; all lookup structures are built once.
    """

    symptoms: tuple[Term, ...]
    diseases: tuple[Term, ...]

    def terms(self, kind: str) -> tuple[Term, ...]:
        if kind == SYMPTOM:
            return self.symptoms
        if kind == DISEASE:
            return self.diseases
        raise ValueError(f"unknown term kind {kind!r}; expected one of {_KINDS}")

    @cached_property
    def by_id(self) -> dict[str, Term]:
        return {t.id: t for t in self.symptoms + self.diseases}

    def symptom_ids(self) -> list[str]:
        return [t.id for t in self.symptoms]

    def disease_ids(self) -> list[str]:
        return [t.id for t in self.diseases]

    def canonical(self, term_id: str) -> str:
        return self.by_id[term_id].canonical

    @cached_property
    def _surface_index(self) -> dict[str, dict[tuple[str, ...], str]]:
        # token-sequence -> term id, one index per kind
        index: dict[str, dict[tuple[str, ...], str]] = {SYMPTOM: {}, DISEASE: {}}
        for term in self.symptoms + self.diseases:
            for surface in term.surfaces():
                index[term.kind][tuple(tokenize(surface))] = term.id
        return index

    @cached_property
    def _max_surface_tokens(self) -> dict[str, int]:
        return {
            kind: max((len(k) for k in idx), default=0)
            for kind, idx in self._surface_index.items()
        }


def _validate_surface(surface: object, term_id: str) -> str:
    if not isinstance(surface, str) or not surface:
        raise ValueError(f"term {term_id!r} has an empty or non-string surface")
    if surface != surface.strip():
        raise ValueError(
            f"term {term_id!r}: surface {surface!r} has leading/trailing whitespace"
        )
    if surface != surface.lower():
        raise ValueError(f"term {term_id!r}: surface {surface!r} must be lowercase")
    if not tokenize(surface):
        raise ValueError(
            f"term {term_id!r}: surface {surface!r} contains no matchable tokens"
        )
    return surface


def _parse_term(raw: object, kind: str) -> Term:
    if not isinstance(raw, dict):
        raise ValueError(f"{kind} entry must be an object, got {type(raw).__name__}")
    term_id = raw.get("id")
    if not isinstance(term_id, str) or not term_id:
        raise ValueError(f"{kind} entry missing a non-empty string 'id': {raw!r}")
    canonical = _validate_surface(raw.get("canonical"), term_id)
    synonyms = raw.get("synonyms", [])
    if not isinstance(synonyms, list):
        raise ValueError(f"term {term_id!r}: 'synonyms' must be a list")
    cleaned = []
    for syn in synonyms:
        syn = _validate_surface(syn, term_id)
        if syn != canonical and syn not in cleaned:
            cleaned.append(syn)
    return Term(id=term_id, canonical=canonical, synonyms=tuple(cleaned), kind=kind)


def load_kb(source: Union[bytes, str, IO]) -> KnowledgeBase:
    """Parse a KB file and validate every type invariant.

    `source` may be raw bytes, a JSON string, or a readable file object.
    Raises ValueError naming the offending id/surface on any violation.
    """
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    try:
        doc = json.loads(source)
    except json.JSONDecodeError as exc:
        raise ValueError(f"knowledge base is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ValueError("knowledge base file must contain a JSON object")

    symptoms = [_parse_term(t, SYMPTOM) for t in doc.get("symptoms", [])]
    diseases = [_parse_term(t, DISEASE) for t in doc.get("diseases", [])]

    seen_ids: set[str] = set()
    for term in symptoms + diseases:
        if term.id in seen_ids:
            raise ValueError(f"duplicate term id {term.id!r}")
        seen_ids.add(term.id)

    # A surface (compared as its token sequence) may belong to only one id,
    # across both kinds: surface -> id lookup must be single-valued.
    claimed: dict[tuple[str, ...], tuple[str, str]] = {}
    for term in symptoms + diseases:
        for surface in term.surfaces():
            key = tuple(tokenize(surface))
            if key in claimed and claimed[key][0] != term.id:
                raise ValueError(
                    f"surface {surface!r} is claimed by both "
                    f"{claimed[key][0]!r} and {term.id!r}"
                )
            claimed[key] = (term.id, surface)

    return KnowledgeBase(symptoms=tuple(symptoms), diseases=tuple(diseases))


def load_kb_file(path: str) -> KnowledgeBase:
    """Load a KB from a file path, naming the path on I/O failure."""
    try:
        with open(path, "rb") as fh:
            return load_kb(fh)
    except OSError as exc:
        raise ValueError(f"cannot read knowledge base {path!r}: {exc}") from exc


def extract_mentions(text: str, kb: KnowledgeBase, kind: str) -> list[str]:
    """Return ids of every `kind` term mentioned in `text`.

    Each id appears once, ordered by first occurrence. Longest match wins
    at each position and matched tokens are consumed (non-overlapping).
    """
    if kind not in _KINDS:
        raise ValueError(f"unknown term kind {kind!r}; expected one of {_KINDS}")
    index = kb._surface_index[kind]
    max_len = kb._max_surface_tokens[kind]
    tokens = tokenize(text)

    found: list[str] = []
    seen: set[str] = set()
    i = 0
    n = len(tokens)
    while i < n:
        matched = False
        for length in range(min(max_len, n - i), 0, -1):
            term_id = index.get(tuple(tokens[i : i + length]))
            if term_id is not None:
                if term_id not in seen:
                    seen.add(term_id)
                    found.append(term_id)
                i += length
                matched = True
                break
        if not matched:
            i += 1
    return found
