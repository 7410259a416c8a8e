"""Clarifying-question dialog engine for medical symptom triage.

Learns symptom-disease co-occurrence from single-turn patient/doctor
exchanges, picks the most diagnosis-discriminating symptom to ask about
next, and handles incomplete FAQ-style questions with a rule-based
retrieval/split/generate pipeline.
"""

from medclarify.kb import KnowledgeBase, Term, extract_mentions, load_kb
from medclarify.nbmodel import NaiveBayesModel, load_model, posterior, save_model, train
from medclarify.clarifier import CandidateRanking, rank_candidates, top_clarification

__all__ = [
    "KnowledgeBase",
    "Term",
    "extract_mentions",
    "load_kb",
    "NaiveBayesModel",
    "train",
    "posterior",
    "save_model",
    "load_model",
    "CandidateRanking",
    "rank_candidates",
    "top_clarification",
]
