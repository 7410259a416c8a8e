"""Command-line driver: offline pipeline, terminal chat, and the server.

Exit codes: 0 success, 1 runtime error, 2 usage error. Data goes to
stdout (or the named output files); diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys

from medclarify import clarifier, corpus, evalharness, faq, gencorpus, nbmodel
from medclarify.kb import load_kb_file
from medclarify.nbmodel import load_model_file
from medclarify.session import DialogEngine, normalize_answer


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number")
    if value <= 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {text}")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {text}")
    return value


def _unit_interval(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number")
    if not 0 <= value <= 1:
        raise argparse.ArgumentTypeError(f"must be within [0, 1], got {text}")
    return value


def _read_bytes(path: str) -> bytes:
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as exc:
        raise ValueError(f"cannot read {path!r}: {exc}") from exc


def _write_text(path: str, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise ValueError(f"cannot write {path!r}: {exc}") from exc


def _cmd_gen_corpus(args) -> int:
    kb = load_kb_file(args.kb)
    records = gencorpus.generate_corpus(kb, args.n, args.seed)
    text = gencorpus.dump_corpus(records)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        _write_text(args.out, text)
        print(f"wrote {len(records)} dialogues to {args.out}", file=sys.stderr)
    return 0


def _cmd_convert(args) -> int:
    kb = load_kb_file(args.kb)
    pairs = corpus.ingest_corpus(_read_bytes(args.corpus))
    processed = [corpus.process_dialogue(p, kb) for p in pairs]
    filtered = corpus.filter_single_diagnosis(processed)
    split = corpus.convert_to_clarification(filtered, args.seed)
    _write_text(args.out_train, corpus.dump_training(split.training))
    _write_text(args.out_eval, corpus.dump_evaluation(split.evaluation))
    print(
        f"dialogues={len(pairs)} single_diagnosis={len(filtered)} "
        f"training={len(split.training)} evaluation={len(split.evaluation)} "
        f"seed={split.seed}"
    )
    return 0


def _cmd_train(args) -> int:
    kb = load_kb_file(args.kb)
    examples = corpus.load_training(_read_bytes(args.train))
    model = nbmodel.train(examples, kb, alpha=args.alpha)
    try:
        with open(args.out_model, "wb") as fh:
            fh.write(nbmodel.save_model(model))
    except OSError as exc:
        raise ValueError(f"cannot write {args.out_model!r}: {exc}") from exc
    print(
        f"examples={model.total_examples} symptoms={len(model.symptom_vocab)} "
        f"diseases={len(model.disease_list)} alpha={model.alpha}"
    )
    return 0


def _parse_symptom_list(text: str, model: nbmodel.NaiveBayesModel) -> list[str]:
    symptoms = [s.strip() for s in text.split(",") if s.strip()]
    for symptom in symptoms:
        if symptom not in model.symptom_index:
            raise ValueError(
                f"unknown symptom id {symptom!r}; valid ids: "
                + ", ".join(model.symptom_vocab)
            )
    return symptoms


def _cmd_rank(args) -> int:
    model = load_model_file(args.model)
    mentioned = _parse_symptom_list(args.symptoms, model)
    excluded = _parse_symptom_list(args.excluded, model) if args.excluded else []
    ranking = clarifier.rank_candidates(model, mentioned, excluded)
    print(f"{'rank':>4}  {'symptom':<24}  {'ratio':>12}  {'top':<16}  {'runner_up':<16}")
    for i, cand in enumerate(ranking.candidates[: args.k], start=1):
        print(
            f"{i:>4}  {cand.symptom:<24}  {cand.ratio:>12.6f}  "
            f"{cand.top_disease:<16}  {cand.runner_up:<16}"
        )
    return 0


def _cmd_eval(args) -> int:
    model = load_model_file(args.model)
    instances = corpus.load_evaluation(_read_bytes(args.eval))
    report = evalharness.evaluate(model, instances, args.k)
    sys.stdout.buffer.write(evalharness.render_report(report, format=args.format))
    return 0


def _cmd_faq(args) -> int:
    entries = faq.load_faq_entries(_read_bytes(args.faq))
    index = faq.build_index(entries)
    outcome = faq.faq_pipeline(index, args.question, theta=args.theta)
    print(
        json.dumps(
            {
                "kind": outcome.kind,
                "clarification": outcome.clarification,
                "answer": outcome.answer,
                "matched_entry": outcome.matched_entry,
                "score": outcome.score,
            }
        )
    )
    return 0


def _cmd_chat(args) -> int:
    model = load_model_file(args.model)
    kb = load_kb_file(args.kb)
    engine = DialogEngine(model, kb, tau=args.tau, max_questions=args.max_turns)
    state = engine.start_session()
    print("Describe your symptoms:")
    try:
        text = input()
    except EOFError:
        return 0
    state, action = engine.user_message(state, text)
    while action.kind == "ask":
        print(f"{action.question_text} [yes/no]")
        try:
            raw = input()
        except EOFError:
            return 0
        answer = normalize_answer(raw)
        if answer is None:
            print("Please answer yes or no.")
            continue
        state, action = engine.answer_clarification(state, answer)
    print("Diagnosis ranking:")
    for i, (disease, prob) in enumerate(action.diagnosis_ranking, start=1):
        print(f"{i:>3}. {kb.canonical(disease)} ({disease}) {prob:.4f}")
    return 0


def _parse_bind(bind: str) -> tuple[str, int]:
    host, sep, port = bind.rpartition(":")
    if not sep or not host:
        raise ValueError(f"bind address must look like host:port, got {bind!r}")
    try:
        port_num = int(port)
    except ValueError:
        raise ValueError(f"invalid port in bind address {bind!r}") from None
    if not 0 <= port_num <= 65535:
        raise ValueError(f"port out of range in bind address {bind!r}")
    return host, port_num


def _cmd_serve(args) -> int:
    import uvicorn

    from medclarify.service import ServiceConfig, create_app

    host, port = _parse_bind(args.bind)
    config = ServiceConfig(
        bind=args.bind,
        model_path=args.model,
        kb_path=args.kb,
        faq_path=args.faq,
        tau=args.tau,
        max_turns=args.max_turns,
        theta=args.theta,
    )
    app = create_app(config)
    uvicorn.run(app, host=host, port=port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="medclarify",
        description="clarifying-question dialog engine for medical triage",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-corpus", help="generate a synthetic dialogue corpus")
    p.add_argument("--kb", required=True)
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", default="-")
    p.set_defaults(func=_cmd_gen_corpus)

    p = sub.add_parser("convert", help="convert dialogues to the clarification task")
    p.add_argument("--corpus", required=True)
    p.add_argument("--kb", required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out-train", required=True)
    p.add_argument("--out-eval", required=True)
    p.set_defaults(func=_cmd_convert)

    p = sub.add_parser("train", help="train the diagnosis model")
    p.add_argument("--train", required=True)
    p.add_argument("--kb", required=True)
    p.add_argument("--alpha", type=_positive_float, default=1.0)
    p.add_argument("--out-model", required=True)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("rank", help="rank candidate clarification symptoms")
    p.add_argument("--model", required=True)
    p.add_argument("--symptoms", required=True, help="comma-separated symptom ids")
    p.add_argument("--excluded", default="", help="comma-separated symptom ids")
    p.add_argument("--k", type=_positive_int, default=10)
    p.set_defaults(func=_cmd_rank)

    p = sub.add_parser("eval", help="score an evaluation set")
    p.add_argument("--model", required=True)
    p.add_argument("--eval", required=True)
    p.add_argument("--k", type=_positive_int, default=10)
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("faq", help="run the FAQ clarification pipeline once")
    p.add_argument("--faq", required=True)
    p.add_argument("--question", required=True)
    p.add_argument("--theta", type=_unit_interval, default=faq.DEFAULT_THETA)
    p.set_defaults(func=_cmd_faq)

    p = sub.add_parser("chat", help="interactive terminal chat")
    p.add_argument("--model", required=True)
    p.add_argument("--kb", required=True)
    p.add_argument("--tau", type=_unit_interval, default=0.8)
    p.add_argument("--max-turns", type=_positive_int, default=3)
    p.set_defaults(func=_cmd_chat)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--bind", default="127.0.0.1:8000")
    p.add_argument("--model", required=True)
    p.add_argument("--kb", required=True)
    p.add_argument("--faq", default=None)
    p.add_argument("--tau", type=_unit_interval, default=0.8)
    p.add_argument("--max-turns", type=_positive_int, default=3)
    p.add_argument("--theta", type=_unit_interval, default=faq.DEFAULT_THETA)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
