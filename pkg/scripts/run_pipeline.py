#!/usr/bin/env python3
"""End-to-end experiment on the bundled synthetic corpus.

Ingest, filter, convert, train, evaluate; prints the recall/precision
curve and a couple of example clarification queries.
"""

import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from medclarify import corpus, evalharness, nbmodel
from medclarify.clarifier import rank_candidates, top_clarification
from medclarify.datafiles import data_path
from medclarify.kb import load_kb_file


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--alpha", type=float, default=1.0)
    parser.add_argument("--k", type=int, default=10)
    args = parser.parse_args()

    started = time.monotonic()
    kb = load_kb_file(str(data_path("kb_small.json")))
    pairs = corpus.ingest_corpus(data_path("synthetic_corpus.jsonl").read_bytes())
    processed = [corpus.process_dialogue(p, kb) for p in pairs]
    filtered = corpus.filter_single_diagnosis(processed)
    split = corpus.convert_to_clarification(filtered, seed=args.seed)
    print(
        f"dialogues={len(pairs)} single_diagnosis={len(filtered)} "
        f"training={len(split.training)} evaluation={len(split.evaluation)}"
    )

    model = nbmodel.train(split.training, kb, alpha=args.alpha)
    report = evalharness.evaluate(model, split.evaluation, k_max=args.k)
    sys.stdout.write(evalharness.render_report(report, format="text").decode())
    print(f"elapsed: {time.monotonic() - started:.2f}s")

    sample = split.evaluation[0]
    ranking = rank_candidates(model, sample.reduced_symptoms, ())
    print(
        f"\nexample instance {sample.id}: mentioned={sorted(sample.reduced_symptoms)}"
        f" hidden={sample.hidden_symptom}"
    )
    print(f"top-5 clarification candidates: {top_clarification(ranking, 5)}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
