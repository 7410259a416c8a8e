"""Rule-based FAQ clarification pipeline: retrieve, split, generate.

An incomplete user question is matched against the FAQ bank by cosine
similarity over idf-weighted tokens. The matched question is split into a
condition clause plus core question (or a list of compared entities), and
a clarification is generated for whichever part the user left out.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, replace
from typing import IO, Iterable, Optional, Union

from medclarify.kb import tokenize

DEFAULT_THETA = 0.35

# Fraction of a condition's content tokens that must appear in the user
# question for the condition to count as already supplied.
CONDITION_PRESENCE_THRESHOLD = 0.6

CLARIFY = "clarify"
ANSWER = "answer"
NO_MATCH = "no_match"

CONDITIONAL = "conditional"
DIFFERENCE = "difference"
UNSPLIT = "unsplit"

STOPWORDS = frozenset(
    """a an the i you he she it we they me my your his her its our their is are
    was were be been am do does did have has had will would can could should
    may might must and or but not to of in on at by for with from as this that
    these those there what which who how also still get about""".split()
)

_MARKERS = ("if", "when", "while", "after", "before", "during")
_MARKER_ALT = "|".join(_MARKERS)
_C1_RE = re.compile(rf"^\s*(?:{_MARKER_ALT})\b[^,]*,\s*\S.*$", re.IGNORECASE)
_C1_SPLIT_RE = re.compile(r",")
_C2_RE = re.compile(
    rf"^(.*\S)\s+({_MARKER_ALT})\s+(\S.*)$", re.IGNORECASE
)
_D1_RE = re.compile(r"\bdifferences?\s+between\s+(.+)$", re.IGNORECASE)
_ENTITY_SEP_RE = re.compile(r"\s*,\s*|\s+and\s+|\s+or\s+", re.IGNORECASE)
_LEADING_MARKER_RE = re.compile(rf"^\s*(?:{_MARKER_ALT})\b\s*", re.IGNORECASE)


@dataclass(frozen=True)
class FaqEntry:
    id: str
    question: str
    answer: str


@dataclass(frozen=True)
class FaqIndex:
    entries: tuple[FaqEntry, ...]
    idf: dict[str, float]
    default_idf: float
    term_weights: tuple[dict[str, float], ...]
    norms_sq: tuple[float, ...]


@dataclass(frozen=True)
class SplitQuestion:
    kind: str
    condition: Optional[str] = None
    core: Optional[str] = None
    entities: Optional[tuple[str, ...]] = None


@dataclass(frozen=True)
class FaqOutcome:
    kind: str
    clarification: Optional[str] = None
    answer: Optional[str] = None
    matched_entry: Optional[str] = None
    score: float = 0.0


@dataclass(frozen=True)
class AnnotatedQuestion:
    incomplete_question: str
    should_clarify: bool
    gold_entry: Optional[str] = None


def _content_tokens(text: str) -> list[str]:
    return [t for t in tokenize(text) if t not in STOPWORDS]


def _weights(text: str, idf: dict[str, float], default_idf: float) -> dict[str, float]:
    counts: dict[str, int] = {}
    for token in _content_tokens(text):
        counts[token] = counts.get(token, 0) + 1
    return {t: c * idf.get(t, default_idf) for t, c in counts.items()}


def _norm_sq(weights: dict[str, float]) -> float:
    return sum(w * w for w in weights.values())


def _cosine(u: dict[str, float], nu: float, v: dict[str, float], nv: float) -> float:
    if nu <= 0.0 or nv <= 0.0:
        return 0.0
    dot = 0.0
    for token, w in u.items():
        wv = v.get(token)
        if wv is not None:
            dot += w * wv
    if dot == 0.0:
        return 0.0
    return dot / math.sqrt(nu * nv)


def build_index(entries: Iterable[FaqEntry]) -> FaqIndex:
    """Build the idf-weighted retrieval index over the FAQ questions."""
    entries = tuple(entries)
    if not entries:
        raise ValueError("cannot build an FAQ index from an empty entry list")
    seen: set[str] = set()
    for entry in entries:
        if not entry.question:
            raise ValueError(f"FAQ entry {entry.id!r} has an empty question")
        if entry.id in seen:
            raise ValueError(f"duplicate FAQ entry id {entry.id!r}")
        seen.add(entry.id)

    df: dict[str, int] = {}
    for entry in entries:
        for token in set(_content_tokens(entry.question)):
            df[token] = df.get(token, 0) + 1
    n = len(entries)
    # smoothed idf keeps every weight strictly positive, so a question's
    # similarity with itself is always exactly 1.0
    idf = {t: math.log((1 + n) / (1 + c)) + 1.0 for t, c in df.items()}
    default_idf = math.log(1 + n) + 1.0

    term_weights = tuple(_weights(e.question, idf, default_idf) for e in entries)
    norms_sq = tuple(_norm_sq(w) for w in term_weights)
    return FaqIndex(
        entries=entries,
        idf=idf,
        default_idf=default_idf,
        term_weights=term_weights,
        norms_sq=norms_sq,
    )


def _best_entry(index: FaqIndex, user_question: str) -> tuple[FaqEntry, float]:
    query = _weights(user_question, index.idf, index.default_idf)
    qn = _norm_sq(query)
    best: Optional[tuple[FaqEntry, float]] = None
    for entry, weights, norm_sq in zip(
        index.entries, index.term_weights, index.norms_sq
    ):
        score = _cosine(query, qn, weights, norm_sq)
        if best is None or score > best[1] or (score == best[1] and entry.id < best[0].id):
            best = (entry, score)
    assert best is not None
    return best


def retrieve(
    index: FaqIndex, user_question: str, theta: float = DEFAULT_THETA
) -> Optional[tuple[str, float]]:
    """Best-matching entry id and cosine score, or None below the threshold."""
    entry, score = _best_entry(index, user_question)
    if score < theta:
        return None
    return entry.id, score


def split_question(question: str) -> SplitQuestion:
    """Decompose an FAQ question by the first matching rule.

    Rules, in order: leading condition clause ending at a comma; trailing
    condition clause introduced by a subordinate marker; "difference
    between X and Y" entity comparisons. No rule leaves it unsplit.
    """
    if _C1_RE.match(question):
        condition, core = _C1_SPLIT_RE.split(question, maxsplit=1)
        return SplitQuestion(
            kind=CONDITIONAL, condition=condition.strip(), core=core.strip()
        )
    m = _C2_RE.match(question)
    if m:
        condition = (m.group(2) + " " + m.group(3)).strip().rstrip(" \t.?!,;:")
        core = m.group(1).strip().rstrip(" \t,;:")
        if condition and core:
            return SplitQuestion(kind=CONDITIONAL, condition=condition, core=core)
    m = _D1_RE.search(question)
    if m:
        listing = m.group(1).strip().rstrip(" \t.?!")
        entities = tuple(e.strip() for e in _ENTITY_SEP_RE.split(listing) if e.strip())
        if len(entities) >= 2:
            return SplitQuestion(kind=DIFFERENCE, entities=entities)
    return SplitQuestion(kind=UNSPLIT)


def _condition_supplied(condition: str, user_question: str) -> bool:
    content = [
        t for t in dict.fromkeys(_content_tokens(condition)) if t not in _MARKERS
    ]
    if not content:
        return True
    user_tokens = set(tokenize(user_question))
    present = sum(1 for t in content if t in user_tokens)
    return present / len(content) >= CONDITION_PRESENCE_THRESHOLD


def _entity_named(entity: str, user_tokens: set[str]) -> bool:
    content = _content_tokens(entity)
    return bool(content) and all(t in user_tokens for t in content)


def generate_clarification(split: SplitQuestion, user_question: str) -> FaqOutcome:
    """Clarify whichever split part the user question is missing.

    Returns only the kind/clarification fragment; the pipeline fills in
    the matched entry, score, and answer text.
    """
    if split.kind == CONDITIONAL:
        if _condition_supplied(split.condition, user_question):
            return FaqOutcome(kind=ANSWER)
        focus = _LEADING_MARKER_RE.sub("", split.condition.lower()).rstrip(" \t.?!,;:")
        return FaqOutcome(
            kind=CLARIFY,
            clarification=(
                "To answer that, I need one more detail — "
                f'does this apply to you: "{focus}"?'
            ),
        )
    if split.kind == DIFFERENCE:
        user_tokens = set(tokenize(user_question))
        named = sum(1 for e in split.entities if _entity_named(e, user_tokens))
        if named >= 2:
            return FaqOutcome(kind=ANSWER)
        listed = ", ".join(f'"{e}"' for e in split.entities)
        return FaqOutcome(
            kind=CLARIFY,
            clarification=(
                f"Are you asking about {listed}, or the difference between them?"
            ),
        )
    raise ValueError("generate_clarification requires a conditional or difference split")


def faq_pipeline(
    index: FaqIndex, user_question: str, theta: float = DEFAULT_THETA
) -> FaqOutcome:
    """Retrieve, split, and generate: the full rule-based FAQ flow."""
    entry, score = _best_entry(index, user_question)
    if score < theta:
        return FaqOutcome(kind=NO_MATCH, score=score)
    split = split_question(entry.question)
    if split.kind == UNSPLIT:
        return FaqOutcome(
            kind=ANSWER, answer=entry.answer, matched_entry=entry.id, score=score
        )
    fragment = generate_clarification(split, user_question)
    if fragment.kind == CLARIFY:
        return replace(fragment, matched_entry=entry.id, score=score)
    return FaqOutcome(
        kind=ANSWER, answer=entry.answer, matched_entry=entry.id, score=score
    )


def measure_coverage(
    index: FaqIndex,
    annotated: Iterable[AnnotatedQuestion],
    theta: float = DEFAULT_THETA,
) -> float:
    """Fraction of should-clarify questions the pipeline actually clarifies."""
    items = [a for a in annotated if a.should_clarify]
    if not items:
        raise ValueError("coverage needs at least one should-clarify item")
    clarified = sum(
        1
        for item in items
        if faq_pipeline(index, item.incomplete_question, theta).kind == CLARIFY
    )
    return clarified / len(items)


def load_faq_entries(source: Union[bytes, str, IO]) -> list[FaqEntry]:
    """Parse a line-delimited FAQ file."""
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    entries = []
    for lineno, line in enumerate(source.splitlines(), start=1):
        try:
            record = json.loads(line)
            entries.append(
                FaqEntry(
                    id=record["id"],
                    question=record["question"],
                    answer=record.get("answer", ""),
                )
            )
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise ValueError(f"FAQ line {lineno}: malformed record ({exc})") from exc
    return entries


def load_annotated(source: Union[bytes, str, IO]) -> list[AnnotatedQuestion]:
    """Parse a line-delimited annotated incomplete-question file."""
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    items = []
    for lineno, line in enumerate(source.splitlines(), start=1):
        try:
            record = json.loads(line)
            items.append(
                AnnotatedQuestion(
                    incomplete_question=record["incomplete_question"],
                    should_clarify=bool(record["should_clarify"]),
                    gold_entry=record.get("gold_entry"),
                )
            )
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise ValueError(
                f"annotated line {lineno}: malformed record ({exc})"
            ) from exc
    return items
