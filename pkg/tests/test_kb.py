import json

import pytest
from hypothesis import given, strategies as st

from medclarify.datafiles import data_path
from medclarify.kb import extract_mentions, load_kb, load_kb_file, tokenize

from conftest import make_kb


def kb_json(symptoms, diseases):
    return json.dumps({"symptoms": symptoms, "diseases": diseases})


class TestLoadKb:
    def test_direct_load_counts(self):
        kb = load_kb(
            kb_json(
                [
                    {"id": "fever", "canonical": "fever", "synonyms": []},
                    {"id": "cough", "canonical": "cough", "synonyms": []},
                ],
                [{"id": "flu", "canonical": "flu", "synonyms": []}],
            )
        )
        assert len(kb.symptoms) == 2
        assert len(kb.diseases) == 1

    def test_surface_claimed_by_two_ids(self):
        doc = kb_json(
            [
                {"id": "s1", "canonical": "fever", "synonyms": []},
                {"id": "s2", "canonical": "chills", "synonyms": ["fever"]},
            ],
            [],
        )
        with pytest.raises(ValueError, match="fever"):
            load_kb(doc)

    def test_surface_claimed_across_kinds(self):
        doc = kb_json(
            [{"id": "s1", "canonical": "fever", "synonyms": []}],
            [{"id": "d1", "canonical": "fever", "synonyms": []}],
        )
        with pytest.raises(ValueError, match="fever"):
            load_kb(doc)

    def test_duplicate_id(self):
        doc = kb_json(
            [
                {"id": "x", "canonical": "fever", "synonyms": []},
                {"id": "x", "canonical": "chills", "synonyms": []},
            ],
            [],
        )
        with pytest.raises(ValueError, match="'x'"):
            load_kb(doc)

    def test_parse_failure(self):
        with pytest.raises(ValueError, match="JSON"):
            load_kb(b"{nope")

    @pytest.mark.parametrize(
        "bad", ["Fever", " fever", "fever ", "", "!!!"], ids=repr
    )
    def test_invalid_surfaces(self, bad):
        doc = kb_json([{"id": "s1", "canonical": bad, "synonyms": []}], [])
        with pytest.raises(ValueError):
            load_kb(doc)

    def test_large_bundled_kb(self):
        kb = load_kb_file(str(data_path("kb_large.json")))
        assert len(kb.symptoms) == 131
        assert len(kb.diseases) == 31

    def test_missing_file_names_path(self):
        with pytest.raises(ValueError, match="no/such/kb.json"):
            load_kb_file("no/such/kb.json")


@pytest.fixture(scope="module")
def mention_kb():
    return make_kb(["fever", "cough", "rash"], ["flu"])


class TestExtractMentions:
    @pytest.fixture()
    def kb(self, mention_kb):
        return mention_kb

    def test_direct_presence(self, kb):
        assert extract_mentions("I have a fever and dry cough", kb, "symptom") == [
            "fever",
            "cough",
        ]

    def test_empty_text(self, kb):
        assert extract_mentions("", kb, "symptom") == []

    def test_word_boundary(self, kb):
        assert extract_mentions("feeling feverish today", kb, "symptom") == []

    def test_synonym_maps_to_id(self):
        kb = make_kb(["fever"], ["flu"], synonyms={"fever": ["high temperature"]})
        assert extract_mentions("high temperature since Monday", kb, "symptom") == [
            "fever"
        ]

    def test_longest_match_consumes(self):
        kb = make_kb(["pain", "chest_pain"], ["flu"])
        assert extract_mentions("chest pain", kb, "symptom") == ["chest_pain"]

    def test_first_occurrence_order_and_dedupe(self, kb):
        out = extract_mentions("rash, then fever, then rash again, fever", kb, "symptom")
        assert out == ["rash", "fever"]

    def test_kind_filter(self, kb):
        assert extract_mentions("flu and fever", kb, "disease") == ["flu"]
        assert extract_mentions("flu and fever", kb, "symptom") == ["fever"]

    def test_unknown_kind(self, kb):
        with pytest.raises(ValueError, match="kind"):
            extract_mentions("fever", kb, "diagnosis")

    def test_case_invariance_example(self, kb):
        text = "Fever and COUGH and rash"
        assert extract_mentions(text.upper(), kb, "symptom") == extract_mentions(
            text, kb, "symptom"
        )

    @given(st.text(max_size=120))
    def test_results_subset_of_kb_ids(self, text):
        kb = make_kb(["fever", "cough", "rash"], ["flu"])
        out = extract_mentions(text, kb, "symptom")
        assert set(out) <= {"fever", "cough", "rash"}
        assert len(out) == len(set(out))

    @given(st.text(alphabet=st.characters(codec="ascii"), max_size=80))
    def test_case_invariance_property(self, text):
        kb = make_kb(["fever", "cough", "rash"], ["flu"])
        assert extract_mentions(text.upper(), kb, "symptom") == extract_mentions(
            text, kb, "symptom"
        )

    def test_canonical_text_yields_exactly_that_id(self, fixture_kb):
        for term in fixture_kb.symptoms:
            assert extract_mentions(term.canonical, fixture_kb, "symptom") == [term.id]


def test_tokenize_boundaries():
    assert tokenize("Chest-pain, fever!") == ["chest", "pain", "fever"]
    assert tokenize("a_b") == ["a", "b"]
    assert tokenize("") == []
