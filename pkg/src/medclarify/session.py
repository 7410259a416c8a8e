"""Multi-turn dialog state machine over the diagnosis model.

A session ingests one free-text symptom description, then loops: ask
about the top-ranked candidate symptom, fold the yes/no answer in, and
stop with a diagnosis ranking once the posterior is confident enough,
the question budget is spent, or no candidates remain. Transitions are
pure functions of the previous state; callers serialize writes per
session.
"""

from __future__ import annotations

import uuid
from dataclasses import dataclass, replace
from typing import Optional

from medclarify.clarifier import rank_candidates
from medclarify.kb import SYMPTOM, KnowledgeBase, extract_mentions
from medclarify.nbmodel import NaiveBayesModel, posterior

AWAITING_DESCRIPTION = "awaiting_description"
AWAITING_ANSWER = "awaiting_answer"
CONCLUDED = "concluded"

DEFAULT_TAU = 0.8
DEFAULT_MAX_QUESTIONS = 3

_ANSWER_ALIASES = {"yes": "yes", "y": "yes", "no": "no", "n": "no"}


class SessionStatusError(ValueError):
    """A transition was attempted from the wrong session status."""


@dataclass(frozen=True)
class SessionState:
    session_id: str
    affirmed: tuple[str, ...]
    denied: tuple[str, ...]
    pending_question: Optional[str]
    turn_log: tuple[tuple[str, str], ...]
    status: str
    asked: tuple[str, ...]


@dataclass(frozen=True)
class SystemAction:
    kind: str  # "ask" | "diagnose"
    question_symptom: Optional[str] = None
    question_text: Optional[str] = None
    diagnosis_ranking: Optional[tuple[tuple[str, float], ...]] = None


def normalize_answer(text: str) -> Optional[str]:
    """Map free-text yes/no variants to 'yes'/'no', or None if unrecognized."""
    return _ANSWER_ALIASES.get(text.strip().lower())


class DialogEngine:
    """Shared immutable model/KB plus the ask-or-diagnose policy.

    Diagnose when the top posterior reaches `tau`, when `max_questions`
    clarifications have been asked, or when no candidates remain;
    otherwise ask about the top-ranked candidate. Denied symptoms count
    as absent in the posterior and are excluded from future candidates.
    """

    def __init__(
        self,
        model: NaiveBayesModel,
        kb: KnowledgeBase,
        tau: float = DEFAULT_TAU,
        max_questions: int = DEFAULT_MAX_QUESTIONS,
    ):
        if len(model.disease_list) < 2:
            raise ValueError(
                "a dialog needs a model with at least 2 diseases; "
                f"got {len(model.disease_list)}"
            )
        if not 0 < tau <= 1:
            raise ValueError(f"tau must be in (0, 1], got {tau}")
        if max_questions < 1:
            raise ValueError(f"max_questions must be >= 1, got {max_questions}")
        if set(model.symptom_vocab) != set(kb.symptom_ids()):
            raise ValueError("model symptom vocabulary does not match the KB")
        self.model = model
        self.kb = kb
        self.tau = tau
        self.max_questions = max_questions

    def start_session(self) -> SessionState:
        return SessionState(
            session_id=uuid.uuid4().hex,
            affirmed=(),
            denied=(),
            pending_question=None,
            turn_log=(),
            status=AWAITING_DESCRIPTION,
            asked=(),
        )

    def question_text(self, symptom: str) -> str:
        return f"Do you also have {self.kb.canonical(symptom)}?"

    def ranked_posterior(self, affirmed: tuple[str, ...]) -> tuple[tuple[str, float], ...]:
        probs = posterior(self.model, affirmed)
        return tuple(sorted(probs.items(), key=lambda kv: (-kv[1], kv[0])))

    def _decide(self, state: SessionState) -> SystemAction:
        ranking_posterior = self.ranked_posterior(state.affirmed)
        top_probability = ranking_posterior[0][1]
        if top_probability < self.tau and len(state.asked) < self.max_questions:
            candidates = rank_candidates(self.model, state.affirmed, state.denied)
            if candidates.candidates:
                symptom = candidates.candidates[0].symptom
                return SystemAction(
                    kind="ask",
                    question_symptom=symptom,
                    question_text=self.question_text(symptom),
                )
        return SystemAction(kind="diagnose", diagnosis_ranking=ranking_posterior)

    def _apply(self, state: SessionState, action: SystemAction) -> SessionState:
        if action.kind == "ask":
            return replace(
                state,
                pending_question=action.question_symptom,
                status=AWAITING_ANSWER,
                turn_log=state.turn_log + (("system", action.question_text),),
                asked=state.asked + (action.question_symptom,),
            )
        summary = ", ".join(f"{d} {p:.4f}" for d, p in action.diagnosis_ranking)
        return replace(
            state,
            pending_question=None,
            status=CONCLUDED,
            turn_log=state.turn_log + (("system", f"diagnosis: {summary}"),),
        )

    def user_message(
        self, state: SessionState, text: str
    ) -> tuple[SessionState, SystemAction]:
        """Ingest the initial symptom description and run the policy."""
        if state.status != AWAITING_DESCRIPTION:
            raise SessionStatusError(
                f"session {state.session_id} is {state.status}; "
                "a description was already provided"
            )
        mentioned = tuple(extract_mentions(text, self.kb, SYMPTOM))
        state = replace(
            state, affirmed=mentioned, turn_log=state.turn_log + (("user", text),)
        )
        action = self._decide(state)
        return self._apply(state, action), action

    def answer_clarification(
        self, state: SessionState, answer: str
    ) -> tuple[SessionState, SystemAction]:
        """Fold a yes/no answer into the state and run the policy again."""
        if state.status != AWAITING_ANSWER:
            raise SessionStatusError(
                f"session {state.session_id} is {state.status}; "
                "no clarification question is pending"
            )
        if answer not in ("yes", "no"):
            raise ValueError(f"answer must be 'yes' or 'no', got {answer!r}")
        symptom = state.pending_question
        state = replace(
            state,
            affirmed=state.affirmed + (symptom,) if answer == "yes" else state.affirmed,
            denied=state.denied + (symptom,) if answer == "no" else state.denied,
            pending_question=None,
            turn_log=state.turn_log + (("user", answer),),
        )
        action = self._decide(state)
        return self._apply(state, action), action
