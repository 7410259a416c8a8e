"""Paths to the bundled data files (knowledge bases, corpus, FAQ bank)."""

from pathlib import Path

DATA_DIR = Path(__file__).parent / "data"

KB_SMALL = "kb_small.json"
KB_LARGE = "kb_large.json"
SYNTHETIC_CORPUS = "synthetic_corpus.jsonl"
FAQ_BANK = "faq.jsonl"
FAQ_ANNOTATED = "faq_annotated.jsonl"


def data_path(name: str) -> Path:
    return DATA_DIR / name
