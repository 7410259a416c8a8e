import json
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from medclarify import nbmodel
from medclarify.corpus import TrainingExample
from medclarify.kb import load_kb

FIXTURE_SYMPTOMS = ["cough", "fever", "headache", "rash"]
FIXTURE_DISEASES = ["flu", "measles"]


def make_kb(symptoms, diseases, synonyms=None):
    synonyms = synonyms or {}
    doc = {
        "symptoms": [
            {"id": s, "canonical": s.replace("_", " "), "synonyms": synonyms.get(s, [])}
            for s in symptoms
        ],
        "diseases": [
            {"id": d, "canonical": d.replace("_", " "), "synonyms": synonyms.get(d, [])}
            for d in diseases
        ],
    }
    return load_kb(json.dumps(doc))


@pytest.fixture(scope="session")
def fixture_kb():
    return make_kb(FIXTURE_SYMPTOMS, FIXTURE_DISEASES)


FIXTURE_TRAINING = [
    TrainingExample(symptoms=("fever", "cough"), diagnosis="flu"),
    TrainingExample(symptoms=("cough",), diagnosis="flu"),
    TrainingExample(symptoms=("fever", "rash"), diagnosis="measles"),
]


@pytest.fixture(scope="session")
def fixture_model(fixture_kb):
    return nbmodel.train(FIXTURE_TRAINING, fixture_kb, alpha=1.0)
