"""Command-line interface.

Subcommands cover the full benchmark lifecycle: mine tuples, generate
positives, derive negatives, diversity-filter, split, export fine-tuning
data, evaluate a subject model, and re-render reports from transcripts.

Exit codes: 0 on success, 1 on validation/data errors, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import clients, divfilter, evalharness, miner, pipeline, store
from .errors import PunbenchError
from .lexres import frequency, morphy, prondict, wordnetdb


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    config = json.loads(_read(path))
    if not isinstance(config, dict):
        raise PunbenchError("config file must contain a JSON object")
    return config


def _miner_config(config: dict) -> miner.MinerConfig:
    fields = {k: v for k, v in config.items()
              if k in miner.MinerConfig.__dataclass_fields__}
    for name in ("visual_lexnames", "natural_lexnames"):
        if name in fields:
            fields[name] = frozenset(fields[name])
    return miner.MinerConfig(**fields)


def _load_wordnet(args: argparse.Namespace) -> wordnetdb.WordNetDb:
    exc_text = _read(args.wordnet_exc) if args.wordnet_exc else None
    return wordnetdb.parse_wordnet(
        _read(args.wordnet_index), _read(args.wordnet_data), exc_text)


def _resource_fingerprints(args: argparse.Namespace) -> dict[str, str]:
    prints = {}
    for name in ("prondict", "freq", "wordnet_index", "wordnet_data", "wordnet_exc"):
        path = getattr(args, name, None)
        if path:
            prints[name.replace("_", "-")] = store.fingerprint(_read(path))
    return prints


def _mock_clients(args: argparse.Namespace):
    if not args.mock:
        raise PunbenchError(
            "live generation needs --endpoint configuration; run with --mock "
            "for the deterministic offline clients")
    textgen = clients.MockTextGenerator()
    imagegen = clients.MockImageGenerator(out_dir=args.images_dir)
    return textgen, imagegen


def _cmd_mine_homophones(args: argparse.Namespace) -> int:
    cfg = _miner_config(_load_config(args.config))
    tuples = miner.mine_homophones(
        prondict.parse_pron_dict(_read(args.prondict)),
        frequency.parse_frequency_table(_read(args.freq)),
        _load_wordnet(args), cfg)
    _write(args.out, miner.dump_tuples(tuples))
    print(f"mined {len(tuples)} homophonic tuples -> {args.out}")
    return 0


def _cmd_mine_homographs(args: argparse.Namespace) -> int:
    cfg = _miner_config(_load_config(args.config))
    tuples = miner.mine_homographs(
        frequency.parse_frequency_table(_read(args.freq)),
        _load_wordnet(args), cfg)
    _write(args.out, miner.dump_tuples(tuples))
    print(f"mined {len(tuples)} homographic tuples -> {args.out}")
    return 0


def _cmd_generate(args: argparse.Namespace) -> int:
    tuples = miner.load_tuples(_read(args.tuples))
    if args.limit is not None:
        tuples = tuples[:args.limit]
    textgen, imagegen = _mock_clients(args)
    samples = [pipeline.build_positive(tup, textgen, imagegen, seed=args.seed)
               for tup in tuples]
    store.save_dataset(samples, args.out, seed=args.seed,
                       resource_fingerprints=_resource_fingerprints(args))
    print(f"built {len(samples)} positive samples -> {args.out}")
    return 0


def _cmd_negatives(args: argparse.Namespace) -> int:
    positives, manifest = store.load_dataset(args.dataset)
    if any(not s.is_pun for s in positives):
        raise PunbenchError("input dataset must contain only positives")
    textgen, imagegen = _mock_clients(args)
    pool = pipeline.load_substitute_pool()
    samples = list(positives)
    for positive in positives:
        samples.append(pipeline.build_es_negative(positive, textgen, seed=args.seed))
        samples.append(pipeline.build_rs_negative(
            positive, textgen, imagegen, pool, seed=args.seed))
    new_manifest = store.save_dataset(
        samples, args.out, seed=args.seed,
        resource_fingerprints=manifest.resource_fingerprints)
    if not new_manifest.is_balanced():
        raise PunbenchError(f"dataset is not 2:1 balanced: {new_manifest.counts}")
    print(f"wrote {len(samples)} samples (2:1 negatives) -> {args.out}")
    return 0


def _cmd_divfilter(args: argparse.Namespace) -> int:
    if args.embeddings:
        em = divfilter.load_embeddings(_read(args.embeddings))
        kept, d_min = divfilter.diversity_filter(em, args.k)
        _write(args.out, "".join(f"{kid}\n" for kid in kept))
        print(f"kept {len(kept)} of {len(em)} (min distance {d_min:.6f}) "
              f"-> {args.out}")
        return 0
    samples, manifest = store.load_dataset(args.dataset)
    if not args.mock:
        raise PunbenchError("embedding samples requires --mock or --embeddings")
    kept, d_min = pipeline.dedupe_by_diversity(
        samples, clients.MockEmbedder(), args.k)
    store.save_dataset(kept, args.out, seed=manifest.seed,
                       resource_fingerprints=manifest.resource_fingerprints)
    print(f"kept {len(kept)} of {len(samples)} samples "
          f"(min distance {d_min:.6f}) -> {args.out}")
    return 0


def _parse_counts(raw: str | None) -> dict[str, int]:
    counts = {}
    if raw:
        for part in raw.split(","):
            name, _, value = part.partition("=")
            counts[name.strip()] = int(value)
    return counts


def _cmd_split(args: argparse.Namespace) -> int:
    samples, manifest = store.load_dataset(args.dataset)
    if not manifest.is_balanced():
        raise PunbenchError(f"dataset is not 2:1 balanced: {manifest.counts}")
    overrides = _parse_counts(args.train_counts)
    spec = store.default_split_spec(samples, seed=args.seed)
    if overrides:
        spec = store.SplitSpec(
            train_positives={**spec.train_positives, **overrides}, seed=args.seed)
    train, test = store.split_dataset(samples, spec)
    store.save_dataset(train, args.out_train, seed=args.seed,
                       resource_fingerprints=manifest.resource_fingerprints)
    store.save_dataset(test, args.out_test, seed=args.seed,
                       resource_fingerprints=manifest.resource_fingerprints)
    print(f"split {len(samples)} samples into {len(train)} train / "
          f"{len(test)} test")
    return 0


def _cmd_export_sft(args: argparse.Namespace) -> int:
    train, _ = store.load_dataset(args.train)
    records = store.export_sft(train)
    _write(args.out, store.dump_sft(records))
    print(f"exported {len(records)} fine-tuning records -> {args.out}")
    return 0


def _specs_from_args(args: argparse.Namespace) -> list[evalharness.TaskSpec]:
    tasks = evalharness.TASKS if args.task == "all" else (args.task,)
    biases = evalharness.BIASES if args.bias == "both" else (args.bias,)
    return [evalharness.TaskSpec(task=task, bias=bias, strategy=args.strategy)
            for task in tasks for bias in biases
            if not (args.strategy == "pun-cot" and task != "explanation")]


def _lemmer_from_args(args: argparse.Namespace):
    if args.wordnet_index and args.wordnet_data:
        db = _load_wordnet(args)
        return lambda word: morphy.lemmatize(db, word)
    return None


def _cmd_evaluate(args: argparse.Namespace) -> int:
    samples, _ = store.load_dataset(args.dataset)
    specs = _specs_from_args(args)
    if not args.mock:
        raise PunbenchError(
            "live evaluation needs --endpoint configuration; run with --mock "
            "for the deterministic offline subject")
    gold = {s.caption: _gold_answer(s) for s in samples}
    subject = clients.ScriptedSubject(policy=args.subject_policy, gold=gold)
    report, transcript = evalharness.evaluate(
        samples, subject, specs, seed=args.seed, repeats=args.repeats,
        lemmer=_lemmer_from_args(args), judge=clients.MockJudge())
    _write(args.out_report, report.to_json() + "\n")
    if args.transcript:
        _write(args.transcript,
               "".join(json.dumps(line, ensure_ascii=False) + "\n"
                       for line in transcript))
    print(evalharness.render_text_table(report), end="")
    return 0


def _gold_answer(sample: pipeline.Sample) -> dict:
    if not sample.is_pun:
        return {"is_pun": False}
    tup = sample.tuple
    return {
        "is_pun": True,
        "type": tup.kind.capitalize(),
        "explanation": sample.interpretation or "",
        "tuple": {"wp": tup.w_p, "wa": tup.w_a,
                  "Sp": tup.s_p_gloss, "Sa": tup.s_a_gloss},
    }


def _cmd_report(args: argparse.Namespace) -> int:
    with open(args.transcript, encoding="utf-8") as fh:
        lines = [json.loads(line) for line in fh if line.strip()]
    keys = sorted({line["spec"] for line in lines})
    specs = []
    for key in keys:
        task, bias, strategy = key.split("/")
        specs.append(evalharness.TaskSpec(task=task, bias=bias, strategy=strategy))
    report = evalharness.aggregate_transcript(
        lines, specs, seed=args.seed, lemmer=_lemmer_from_args(args),
        judge=clients.MockJudge() if args.mock else None)
    _write(args.out_report, report.to_json() + "\n")
    print(evalharness.render_text_table(report), end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="punbench",
        description="Build and score the multimodal pun benchmark.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0,
                        help="master seed for all derived randomness")
    common.add_argument("--config", help="JSON config file with thresholds")
    common.add_argument("--mock", action="store_true",
                        help="use the deterministic offline clients")
    common.add_argument("--prondict", help="pronouncing dictionary path")
    common.add_argument("--freq", help="word frequency table path")
    common.add_argument("--wordnet-index", help="noun index file path")
    common.add_argument("--wordnet-data", help="noun data file path")
    common.add_argument("--wordnet-exc", help="noun exception list path")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mine-homophones", parents=[common],
                       help="mine homophonic tuples")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_mine_homophones)

    p = sub.add_parser("mine-homographs", parents=[common],
                       help="mine homographic tuples")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_mine_homographs)

    p = sub.add_parser("generate", parents=[common],
                       help="build positive samples from tuples")
    p.add_argument("--tuples", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--images-dir", required=True)
    p.add_argument("--limit", type=int)
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("negatives", parents=[common],
                       help="derive ES and RS negatives for every positive")
    p.add_argument("--dataset", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--images-dir", required=True)
    p.set_defaults(func=_cmd_negatives)

    p = sub.add_parser("divfilter", parents=[common],
                       help="prune near-duplicates by embedding distance")
    p.add_argument("--dataset", help="sample dataset to embed and filter")
    p.add_argument("--embeddings", help="precomputed id+vector JSONL")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_divfilter)

    p = sub.add_parser("split", parents=[common],
                       help="split into train/test, negatives follow positives")
    p.add_argument("--dataset", required=True)
    p.add_argument("--out-train", required=True)
    p.add_argument("--out-test", required=True)
    p.add_argument("--train-counts",
                   help="per-type train positives, e.g. homophonic=97,homographic=125")
    p.set_defaults(func=_cmd_split)

    p = sub.add_parser("export-sft", parents=[common],
                       help="emit fine-tuning records from a train split")
    p.add_argument("--train", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_export_sft)

    p = sub.add_parser("evaluate", parents=[common],
                       help="run the benchmark against a subject model")
    p.add_argument("--dataset", required=True)
    p.add_argument("--task", default="all",
                   choices=["all", *evalharness.TASKS])
    p.add_argument("--bias", default="both", choices=["both", *evalharness.BIASES])
    p.add_argument("--strategy", default="vanilla", choices=evalharness.STRATEGIES)
    p.add_argument("--repeats", type=int, default=1)
    p.add_argument("--subject-policy", default="gold",
                   choices=["gold", "always-pun", "never-pun", "bias-follow"])
    p.add_argument("--out-report", required=True)
    p.add_argument("--transcript")
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("report", parents=[common],
                       help="re-aggregate metrics from a saved transcript")
    p.add_argument("--transcript", required=True)
    p.add_argument("--out-report", required=True)
    p.set_defaults(func=_cmd_report)

    return parser


def cli(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except (PunbenchError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
