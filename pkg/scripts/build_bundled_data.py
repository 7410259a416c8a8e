#!/usr/bin/env python3
"""Regenerate the bundled data files under src/medclarify/data/.

Outputs are deterministic; rerunning this script must reproduce the
committed files byte for byte.
"""

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from medclarify import corpus, faq, gencorpus
from medclarify.datafiles import DATA_DIR
from medclarify.kb import load_kb

CORPUS_SEED = 1729
CORPUS_SIZE = 2200


def slug(name: str) -> str:
    return name.replace(" ", "_").replace("-", "_")


SMALL_SYMPTOMS = [
    ("fever", ["high temperature", "pyrexia"]),
    ("cough", ["coughing"]),
    ("sore throat", []),
    ("runny nose", ["nasal discharge"]),
    ("sneezing", []),
    ("headache", ["head pain"]),
    ("nausea", ["feeling sick"]),
    ("vomiting", ["throwing up"]),
    ("diarrhea", ["loose stools"]),
    ("abdominal pain", ["stomach ache", "belly pain"]),
    ("chest pain", []),
    ("shortness of breath", ["breathlessness"]),
    ("wheezing", []),
    ("fatigue", ["tiredness", "exhaustion"]),
    ("chills", []),
    ("muscle aches", ["body aches"]),
    ("joint pain", []),
    ("rash", ["skin eruption"]),
    ("itching", ["pruritus"]),
    ("dizziness", ["lightheadedness"]),
    ("loss of appetite", ["poor appetite"]),
    ("weight loss", []),
    ("night sweats", []),
    ("ear pain", ["earache"]),
    ("eye redness", ["red eyes"]),
    ("blurred vision", []),
    ("back pain", []),
    ("neck stiffness", ["stiff neck"]),
    ("swollen glands", ["swollen lymph nodes"]),
    ("mouth ulcers", []),
    ("heartburn", ["acid reflux"]),
    ("bloating", []),
    ("constipation", []),
    ("dry mouth", []),
    ("excessive thirst", []),
    ("frequent urination", []),
    ("palpitations", ["racing heart"]),
    ("ankle swelling", ["swollen ankles"]),
    ("tingling hands", []),
    ("insomnia", ["trouble sleeping"]),
]

SMALL_DISEASES = [
    ("influenza", ["flu"]),
    ("common cold", ["head cold"]),
    ("migraine", []),
    ("gastroenteritis", ["stomach flu"]),
    ("pneumonia", []),
    ("asthma", []),
    ("measles", []),
    ("chickenpox", ["varicella"]),
    ("strep throat", []),
    ("food poisoning", []),
]

EXTRA_SYMPTOMS = [
    ("shoulder pain", []),
    ("knee pain", []),
    ("hip pain", []),
    ("elbow pain", []),
    ("wrist pain", []),
    ("foot pain", []),
    ("heel pain", []),
    ("jaw pain", []),
    ("tooth pain", ["toothache"]),
    ("facial pain", []),
    ("pelvic pain", []),
    ("flank pain", []),
    ("rib pain", []),
    ("tailbone pain", []),
    ("facial swelling", []),
    ("knee swelling", []),
    ("hand swelling", []),
    ("leg swelling", []),
    ("neck swelling", []),
    ("dry skin", []),
    ("itchy scalp", []),
    ("hair loss", []),
    ("brittle nails", []),
    ("skin peeling", []),
    ("hives", []),
    ("acne", []),
    ("bruising", []),
    ("pale skin", []),
    ("yellow skin", ["jaundice"]),
    ("night itching", []),
    ("nasal congestion", ["blocked nose"]),
    ("postnasal drip", []),
    ("hoarseness", ["hoarse voice"]),
    ("snoring", []),
    ("rapid breathing", []),
    ("shallow breathing", []),
    ("dry cough", []),
    ("indigestion", []),
    ("excessive gas", []),
    ("black stools", []),
    ("bloody stools", []),
    ("rectal bleeding", []),
    ("difficulty swallowing", []),
    ("bad breath", []),
    ("metallic taste", []),
    ("loss of taste", []),
    ("loss of smell", []),
    ("painful urination", []),
    ("blood in urine", []),
    ("dark urine", []),
    ("cloudy urine", []),
    ("urinary urgency", []),
    ("bedwetting", []),
    ("numbness", []),
    ("tremor", ["shaking"]),
    ("seizures", []),
    ("memory loss", []),
    ("confusion", []),
    ("slurred speech", []),
    ("fainting", []),
    ("poor balance", []),
    ("double vision", []),
    ("light sensitivity", []),
    ("sound sensitivity", []),
    ("ringing ears", ["tinnitus"]),
    ("rapid heartbeat", []),
    ("slow heartbeat", []),
    ("leg cramps", []),
    ("cold hands", []),
    ("cold feet", []),
    ("varicose veins", []),
    ("low grade fever", []),
    ("weight gain", []),
    ("excessive sweating", []),
    ("poor concentration", []),
    ("irritability", []),
    ("anxiety", []),
    ("restlessness", []),
    ("daytime sleepiness", []),
    ("swollen tonsils", []),
    ("white patches", []),
    ("gum bleeding", []),
    ("nosebleeds", []),
    ("eye discharge", []),
    ("watery eyes", []),
    ("dry eyes", []),
    ("eyelid drooping", []),
    ("muscle weakness", []),
    ("muscle cramps", []),
    ("stiff joints", []),
    ("swollen joints", []),
]

EXTRA_DISEASES = [
    ("bronchitis", []),
    ("sinusitis", []),
    ("tonsillitis", []),
    ("appendicitis", []),
    ("urinary tract infection", []),
    ("kidney stones", []),
    ("gallstones", []),
    ("anemia", []),
    ("hypothyroidism", []),
    ("hyperthyroidism", []),
    ("diabetes", []),
    ("hypertension", []),
    ("gerd", []),
    ("eczema", []),
    ("psoriasis", []),
    ("conjunctivitis", []),
    ("otitis media", []),
    ("mononucleosis", []),
    ("malaria", []),
    ("dengue fever", []),
    ("typhoid", []),
]

FAQ_ENTRIES = [
    # leading condition clause (comma)
    ("faq-001", "If I am pregnant, should I still get a TSH test?",
     "Yes. Thyroid needs change in pregnancy, so TSH is routinely checked "
     "against trimester-specific reference ranges."),
    ("faq-002", "If I take blood thinners, is it safe to have a blood draw?",
     "Yes, but tell the phlebotomist first; pressure is held on the site "
     "longer to prevent bruising."),
    ("faq-003", "When my cholesterol panel is scheduled in the morning, do I need to fast overnight?",
     "Most panels no longer require fasting, but follow your clinician's "
     "instruction; 9 to 12 hours is the traditional protocol."),
    ("faq-004", "After a positive strep test, how long should I stay home from work?",
     "Until you have taken antibiotics for a full 24 hours and no longer "
     "have a fever."),
    ("faq-005", "Before a glucose tolerance test, what am I allowed to eat?",
     "Eat normally for three days, then fast 8 to 14 hours right before "
     "the test; plain water is allowed."),
    ("faq-006", "While taking biotin supplements, can my thyroid results be wrong?",
     "Yes. High-dose biotin interferes with many immunoassays; stop biotin "
     "72 hours before the draw."),
    ("faq-007", "If my ferritin result is low, does that always mean anemia?",
     "Low ferritin shows depleted iron stores and often precedes anemia; a "
     "complete blood count confirms whether anemia is present."),
    ("faq-008", "During a 24-hour urine collection, do I keep the sample refrigerated?",
     "Yes, keep the container cold for the entire collection period."),
    ("faq-009", "If I exercised heavily yesterday, will my creatine kinase be elevated?",
     "Yes, strenuous exercise can raise creatine kinase for several days; "
     "mention it so the result is interpreted correctly."),
    ("faq-010", "When a urine culture comes back contaminated, do I have to repeat it?",
     "Usually yes; a clean-catch midstream sample reduces contamination."),
    # trailing condition clause
    ("faq-011", "Do I need to fast before a triglycerides test?",
     "Yes, fast 9 to 12 hours; triglycerides rise sharply after meals."),
    ("faq-012", "Should my potassium be rechecked after starting a diuretic?",
     "Yes, typically within one to two weeks, since diuretics commonly "
     "shift potassium levels."),
    ("faq-013", "Is a d-dimer test reliable during pregnancy?",
     "D-dimer rises normally through pregnancy, so a positive result is "
     "less specific and is interpreted with imaging."),
    ("faq-014", "Can I drink coffee before a cortisol blood draw?",
     "Avoid caffeine that morning; it can raise cortisol and skew the result."),
    ("faq-015", "Do hormone levels change while fasting for long periods?",
     "Yes, prolonged fasting shifts cortisol, insulin, and thyroid values; "
     "tell the lab how long you fasted."),
    # entity comparisons
    ("faq-016", "What is the difference between TSH and T4 tests?",
     "TSH measures the pituitary signal telling the thyroid to work; T4 "
     "measures the hormone the thyroid actually produces."),
    ("faq-017", "What is the difference between HDL and LDL cholesterol?",
     "HDL carries cholesterol away from arteries; LDL deposits it in them. "
     "Higher HDL and lower LDL are the favorable pattern."),
    ("faq-018", "What is the difference between a CT scan and an MRI?",
     "CT uses X-rays and is fast; MRI uses magnetic fields, takes longer, "
     "and shows soft tissue in more detail."),
    ("faq-019", "What are the differences between type 1 and type 2 diabetes?",
     "Type 1 is autoimmune loss of insulin production; type 2 is insulin "
     "resistance, usually developing gradually in adults."),
    ("faq-020", "What is the difference between hemoglobin and hematocrit?",
     "Hemoglobin is the oxygen-carrying protein concentration; hematocrit "
     "is the fraction of blood volume occupied by red cells."),
    # no split rule applies
    ("faq-021", "What does a basic metabolic panel measure?",
     "Glucose, calcium, electrolytes, and kidney markers: eight tests from "
     "one blood draw."),
    ("faq-022", "Why would my doctor order a liver panel?",
     "To screen for liver damage or disease, check medication effects, or "
     "follow up abnormal results."),
    ("faq-023", "How is an A1C test performed?",
     "A small blood sample is analyzed for glycated hemoglobin; no fasting "
     "is needed."),
    ("faq-024", "What causes a high white blood cell count?",
     "Most often infection or inflammation; also stress responses, some "
     "medications, and marrow disorders."),
    ("faq-025", "What does CRP stand for?",
     "C-reactive protein, a marker of inflammation made by the liver."),
    ("faq-026", "How accurate are rapid antigen tests?",
     "They are most reliable early in symptomatic illness; negatives with "
     "symptoms are usually confirmed by PCR."),
    ("faq-027", "What is a normal range for vitamin D?",
     "Most labs consider 20 to 50 nanograms per milliliter sufficient for "
     "healthy adults."),
    ("faq-028", "Who should consider PSA screening?",
     "Discuss it with your clinician from age 50, or 45 with risk factors "
     "such as family history."),
    ("faq-029", "How often are cholesterol panels recommended for adults?",
     "Every four to six years for average-risk adults; more often with "
     "risk factors or abnormal results."),
    ("faq-030", "What does an elevated eosinophil count mean?",
     "Commonly allergy or parasitic infection; persistent elevation needs "
     "follow-up."),
]

# (incomplete question, should_clarify, gold entry)
FAQ_ANNOTATED = [
    ("Should I still get a TSH test?", True, "faq-001"),
    ("Is it safe to have a blood draw?", True, "faq-002"),
    ("Do I need to fast overnight?", True, "faq-003"),
    ("How long should I stay home from work?", True, "faq-004"),
    ("What am I allowed to eat before the test?", True, "faq-005"),
    ("Can my thyroid results be wrong?", True, "faq-006"),
    ("Does that always mean anemia?", True, "faq-007"),
    ("Do I keep the sample refrigerated?", True, "faq-008"),
    ("Will my creatine kinase be elevated?", True, "faq-009"),
    ("Is a d-dimer test reliable?", True, "faq-013"),
    ("Can I drink coffee beforehand?", True, "faq-014"),
    ("Should my potassium be rechecked?", True, "faq-012"),
    ("Is TSH the same as T4?", True, "faq-016"),
    ("Is HDL cholesterol good?", True, "faq-017"),
    ("Do I need a CT scan?", True, "faq-018"),
    ("What does my hemoglobin mean?", True, "faq-020"),
    ("What about type 1 versus type 2?", True, "faq-019"),
    ("Is this dangerous?", True, None),
    ("Can stress affect my numbers?", True, None),
    ("What does a metabolic panel measure?", True, "faq-021"),
    ("How accurate are antigen tests?", True, "faq-026"),
    ("Do I need to fast for a triglycerides test?", True, "faq-011"),
    ("Why would a doctor order a liver panel?", True, "faq-022"),
    ("What is a normal vitamin D level?", True, "faq-027"),
    ("Is a high white blood cell count bad?", True, "faq-024"),
]


def kb_doc(symptoms, diseases):
    return {
        "symptoms": [
            {"id": slug(name), "canonical": name, "synonyms": syns}
            for name, syns in symptoms
        ],
        "diseases": [
            {"id": slug(name), "canonical": name, "synonyms": syns}
            for name, syns in diseases
        ],
    }


def write_json(path: Path, doc) -> None:
    path.write_text(json.dumps(doc, indent=1, ensure_ascii=True) + "\n", encoding="utf-8")


def main() -> int:
    DATA_DIR.mkdir(exist_ok=True)

    small = kb_doc(SMALL_SYMPTOMS, SMALL_DISEASES)
    kb_small = load_kb(json.dumps(small))
    assert len(kb_small.symptoms) == 40 and len(kb_small.diseases) == 10
    write_json(DATA_DIR / "kb_small.json", small)

    large = kb_doc(SMALL_SYMPTOMS + EXTRA_SYMPTOMS, SMALL_DISEASES + EXTRA_DISEASES)
    kb_large = load_kb(json.dumps(large))
    assert len(kb_large.symptoms) == 131, len(kb_large.symptoms)
    assert len(kb_large.diseases) == 31, len(kb_large.diseases)
    write_json(DATA_DIR / "kb_large.json", large)

    records = gencorpus.generate_corpus(kb_small, CORPUS_SIZE, CORPUS_SEED)
    (DATA_DIR / "synthetic_corpus.jsonl").write_text(
        gencorpus.dump_corpus(records), encoding="utf-8"
    )
    processed = [
        corpus.process_dialogue(p, kb_small) for p in corpus.ingest_corpus(
            gencorpus.dump_corpus(records)
        )
    ]
    filtered = corpus.filter_single_diagnosis(processed)
    split = corpus.convert_to_clarification(filtered, seed=7)
    print(
        f"corpus: {len(records)} dialogues, {len(filtered)} single-diagnosis, "
        f"{len(split.training)} training, {len(split.evaluation)} evaluation"
    )

    faq_lines = [
        json.dumps({"id": i, "question": q, "answer": a}, ensure_ascii=True)
        for i, q, a in FAQ_ENTRIES
    ]
    (DATA_DIR / "faq.jsonl").write_text(
        "".join(line + "\n" for line in faq_lines), encoding="utf-8"
    )
    annotated_lines = [
        json.dumps(
            {"incomplete_question": q, "should_clarify": f, "gold_entry": g},
            ensure_ascii=True,
        )
        for q, f, g in FAQ_ANNOTATED
    ]
    (DATA_DIR / "faq_annotated.jsonl").write_text(
        "".join(line + "\n" for line in annotated_lines), encoding="utf-8"
    )

    index = faq.build_index(faq.load_faq_entries((DATA_DIR / "faq.jsonl").read_bytes()))
    annotated = faq.load_annotated((DATA_DIR / "faq_annotated.jsonl").read_bytes())
    for item in annotated:
        outcome = faq.faq_pipeline(index, item.incomplete_question)
        print(
            f"  {outcome.kind:<9} score={outcome.score:.3f} "
            f"match={outcome.matched_entry} gold={item.gold_entry} "
            f"| {item.incomplete_question}"
        )
    coverage = faq.measure_coverage(index, annotated)
    print(f"faq coverage: {coverage:.3f} over {len(annotated)} items")
    for entry in index.entries:
        hit = faq.retrieve(index, entry.question)
        assert hit is not None and hit[0] == entry.id and hit[1] == 1.0, (
            entry.id,
            hit,
        )
    print("faq self-retrieval: all exactly 1.0")
    return 0


if __name__ == "__main__":
    sys.exit(main())
