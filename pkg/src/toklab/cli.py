"""Command-line interface: one subcommand per pipeline stage.

Exit codes: 0 success, 1 usage error, 2 data or validation error.
Subcommands never mutate their inputs; outputs go to explicit paths or
stdout as JSON.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Optional

from . import corpus as corpus_mod
from . import corruptor as corruptor_mod
from . import metrics as metrics_mod
from . import normalize as normalize_mod
from . import subword as subword_mod
from .errors import ToklabError
from .surface import SurfaceTokenizer

USAGE_ERROR = 1
DATA_ERROR = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse default exits 2
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(USAGE_ERROR)


def _emit(payload, out: Optional[str]) -> None:
    text = json.dumps(payload, ensure_ascii=False, indent=2)
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)


def _load_manifest(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        manifest = json.load(fh)
    for key in ("train_ids", "test_ids"):
        if key not in manifest:
            raise ToklabError(f"split manifest lacks {key!r}")
    return manifest


# -- subcommand implementations ----------------------------------------------


def _cmd_validate(args) -> int:
    corpus = corpus_mod.load_corpus(args.infile)
    _emit(
        {
            "documents": len(corpus),
            "total_tokens": corpus.total_tokens,
            "languages": sorted({d.language for d in corpus.documents}),
        },
        args.out,
    )
    return 0


def _cmd_stats(args) -> int:
    corpus = corpus_mod.load_corpus(args.infile)
    _emit(corpus_mod.corpus_stats(corpus), args.out)
    return 0


def _cmd_clean(args) -> int:
    config = normalize_mod.CleanConfig()
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            config = normalize_mod.CleanConfig.from_dict(json.load(fh))
    corpus = corpus_mod.load_corpus(args.infile)
    from dataclasses import replace

    cleaned = corpus_mod.Corpus(
        [replace(d, text=normalize_mod.clean(d.text, config)) for d in corpus.documents]
    )
    corpus_mod.save_corpus(cleaned, args.out)
    return 0


def _cmd_standardize(args) -> int:
    rules = normalize_mod.load_rules(args.rules)
    corpus = corpus_mod.load_corpus(args.infile)
    from dataclasses import replace

    out = corpus_mod.Corpus(
        [replace(d, text=normalize_mod.standardize(d.text, rules)) for d in corpus.documents]
    )
    corpus_mod.save_corpus(out, args.out)
    return 0


def _cmd_split(args) -> int:
    corpus = corpus_mod.load_corpus(args.infile)
    spec = corpus_mod.SplitSpec(seed=args.seed, test_fraction=args.test_fraction)
    train_ids, test_ids = corpus_mod.split_corpus(corpus, spec)
    _emit(
        {
            "seed": args.seed,
            "test_fraction": args.test_fraction,
            "train_ids": train_ids,
            "test_ids": test_ids,
        },
        args.out,
    )
    return 0


def _cmd_verify_split(args) -> int:
    corpus = corpus_mod.load_corpus(args.infile)
    manifest = _load_manifest(args.manifest)
    docs = corpus.by_id()
    vocab: set[str] = set()
    for doc_id in manifest["train_ids"]:
        if doc_id in docs:
            vocab.update(docs[doc_id].text.split())
    report = corpus_mod.verify_split(corpus, manifest["train_ids"], manifest["test_ids"], vocab)
    _emit(report.to_dict(), args.out)
    if report.id_intersection:
        sys.stderr.write(
            f"critical: train/test intersection of {len(report.id_intersection)} ids: "
            f"{report.id_intersection[:10]}\n"
        )
        return DATA_ERROR
    return 0


def _cmd_train(args) -> int:
    if args.word_freqs:
        freqs = subword_mod.load_word_freqs(args.word_freqs)
    elif args.infile:
        corpus = corpus_mod.load_corpus(args.infile)
        freqs = subword_mod.count_words(
            (d.text for d in corpus.documents), workers=args.workers
        )
    else:
        raise ToklabError("train needs --in or --word-freqs")
    cfg = subword_mod.TrainConfig(
        algorithm=args.algo,
        vocab_size=args.vocab_size,
        min_frequency=args.min_freq,
        seed=args.seed,
        max_piece_len=args.max_piece_len,
        unigram_seed_multiplier=args.seed_multiplier,
        unigram_prune_fraction=args.prune_fraction,
        unigram_em_iters_per_round=args.em_iters,
        workers=args.workers,
    )
    model = subword_mod.train(freqs, cfg)
    subword_mod.save_model(model, args.out)
    sys.stderr.write(
        f"trained {args.algo} model: {model.vocab_size} vocab entries -> {args.out}\n"
    )
    return 0


def _cmd_encode(args) -> int:
    model = subword_mod.load_model(args.model)
    corpus = corpus_mod.load_corpus(args.infile)
    with open(args.out, "w", encoding="utf-8") as fh:
        for doc in corpus.documents:
            segments = [
                {"tokens": seg.tokens, "ids": seg.ids, "offsets": [list(o) for o in seg.offsets]}
                for seg in subword_mod.encode(model, doc.text)
            ]
            fh.write(json.dumps({"id": doc.id, "segments": segments}, ensure_ascii=False))
            fh.write("\n")
    return 0


def _cmd_decode(args) -> int:
    model = subword_mod.load_model(args.model)
    with open(args.infile, "r", encoding="utf-8") as fh, open(
        args.out, "w", encoding="utf-8"
    ) as out:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            segs = [
                subword_mod.Segmentation(
                    tokens=s["tokens"],
                    ids=s["ids"],
                    offsets=[tuple(o) for o in s["offsets"]],
                )
                for s in rec["segments"]
            ]
            text = subword_mod.decode(model, segs)
            out.write(json.dumps({"id": rec["id"], "text": text}, ensure_ascii=False))
            out.write("\n")
    return 0


def _cmd_eval(args) -> int:
    corpus = corpus_mod.load_corpus(args.infile)
    manifest = _load_manifest(args.manifest)
    methods = []
    if args.with_whitespace:
        methods.append(metrics_mod.surface_method("whitespace", SurfaceTokenizer()))
    for model_path in args.model or []:
        model = subword_mod.load_model(model_path)
        name = Path(model_path).name
        for suffix in (".model.json", ".json"):
            if name.endswith(suffix):
                name = name[: -len(suffix)]
                break
        methods.append(metrics_mod.subword_method(name, model))
    for item in args.external or []:
        if "=" not in item:
            raise ToklabError(f"--external expects name=path, got {item!r}")
        name, _, path = item.partition("=")
        methods.append(
            metrics_mod.external_method(name, metrics_mod.load_external_tokenization(path))
        )
    if not methods:
        raise ToklabError("eval needs at least one method (--model/--external/--with-whitespace)")
    nests = metrics_mod.load_nests(args.nests) if args.nests else None

    reports = metrics_mod.compare_methods(
        corpus, manifest["train_ids"], manifest["test_ids"], methods, nests
    )

    freq: dict[str, int] = {}
    for doc in corpus.documents:
        for token in doc.text.split():
            freq[token] = freq.get(token, 0) + 1
    points = metrics_mod.zipf_points(freq)
    fit = metrics_mod.zipf_fit(freq) if len(points) >= 2 else None

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    metrics_mod.write_reports_csv(reports, out_dir / "metrics.csv")
    metrics_mod.write_zipf_csv(points, out_dir / "zipf.csv")
    corpus_id = args.corpus_id or Path(args.infile).stem
    report_doc = {
        "corpus_id": corpus_id,
        "rows": [r.to_dict() for r in reports],
        "zipf": {
            "fit": fit.to_dict() if fit else None,
            "points": [list(p) for p in points],
        },
    }
    with (out_dir / f"{corpus_id}.report.json").open("w", encoding="utf-8") as fh:
        json.dump(report_doc, fh, ensure_ascii=False, indent=2)
        fh.write("\n")
    sys.stderr.write(f"wrote metrics.csv, zipf.csv, {corpus_id}.report.json to {out_dir}\n")
    return 0


def _cmd_zipf(args) -> int:
    corpus = corpus_mod.load_corpus(args.infile)
    freq: dict[str, int] = {}
    for doc in corpus.documents:
        for token in doc.text.split():
            freq[token] = freq.get(token, 0) + 1
    fit = metrics_mod.zipf_fit(freq)
    if args.points:
        metrics_mod.write_zipf_csv(metrics_mod.zipf_points(freq), args.points)
    _emit(fit.to_dict(), args.out)
    return 0


def _cmd_corrupt(args) -> int:
    rules = corruptor_mod.load_corruption_rules(args.rules)
    corpus = corpus_mod.load_corpus(args.infile)
    allowed = None
    if args.manifest:
        allowed = set(_load_manifest(args.manifest)["test_ids"])
    corrupted = corruptor_mod.corrupt_corpus(
        corpus, rules, args.ratio, args.seed, allowed_test_ids=allowed
    )
    corpus_mod.save_corpus(corrupted, args.out)
    return 0


def _cmd_datasheet(args) -> int:
    corpus = corpus_mod.load_corpus(args.infile)
    licenses = None
    if args.licenses:
        with open(args.licenses, "r", encoding="utf-8") as fh:
            licenses = json.load(fh)
    sheet = corpus_mod.build_datasheet(
        corpus,
        processing_description=args.processing,
        name=args.name,
        version=args.version,
        known_limitations=args.limitation or [],
        source_licenses=licenses,
    )
    _emit(sheet.to_dict(), args.out)
    return 0


def _cmd_serve(args) -> int:
    from .service import serve

    models_dir = os.environ.get("TOKLAB_MODELS_DIR") or args.models
    if not models_dir:
        raise ToklabError("serve needs --models or TOKLAB_MODELS_DIR")
    static_dir = Path(args.static) if args.static else None
    serve(Path(models_dir), addr=args.addr, static_dir=static_dir)
    return 0


def _cmd_selftest(args) -> int:
    from .selftest import run_selftest

    results = run_selftest()
    width = max(len(name) for name, _ in results)
    failed = 0
    for name, ok in results:
        print(f"{name:<{width}}  {'PASS' if ok else 'FAIL'}")
        if not ok:
            failed += 1
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 0 if failed == 0 else DATA_ERROR


# -- parser wiring -------------------------------------------------------------


def build_parser() -> _Parser:
    parser = _Parser(prog="toklab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="load and validate a JSONL corpus")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("stats", help="descriptive corpus statistics")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("clean", help="clean every document text")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--config", help="CleanConfig JSON file")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_clean)

    p = sub.add_parser("standardize", help="apply marker rules to every document")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--rules", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_standardize)

    p = sub.add_parser("split", help="deterministic train/test split manifest")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--test-fraction", required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_split)

    p = sub.add_parser("verify-split", help="check a split manifest for leakage")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--manifest", required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_verify_split)

    p = sub.add_parser("train", help="train a subword model")
    p.add_argument("--algo", choices=sorted(subword_mod.ALGORITHMS), required=True)
    p.add_argument("--vocab-size", type=int, required=True)
    p.add_argument("--min-freq", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--in", dest="infile")
    p.add_argument("--word-freqs", help="TSV word<TAB>count instead of a corpus")
    p.add_argument("--out", required=True)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--max-piece-len", type=int, default=16)
    p.add_argument("--seed-multiplier", type=int, default=8)
    p.add_argument("--prune-fraction", type=float, default=0.2)
    p.add_argument("--em-iters", type=int, default=2)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("encode", help="segment a corpus with a trained model")
    p.add_argument("--model", required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_encode)

    p = sub.add_parser("decode", help="reconstruct text from encode output")
    p.add_argument("--model", required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_decode)

    p = sub.add_parser("eval", help="run the method comparison harness")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--manifest", required=True)
    p.add_argument("--model", action="append", help="trained model file (repeatable)")
    p.add_argument("--external", action="append", help="name=tokenization.jsonl (repeatable)")
    p.add_argument("--with-whitespace", action="store_true", help="include the whitespace baseline")
    p.add_argument("--nests", help="lexeme nest TSV for semantic consistency")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--corpus-id")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("zipf", help="rank-frequency fit over the corpus")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--points", help="write the (rank,count) CSV here")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_zipf)

    p = sub.add_parser("corrupt", help="inject typos into a (test) corpus")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--rules", required=True)
    p.add_argument("--ratio", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--manifest", help="split manifest; enforces test-only corruption")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_corrupt)

    p = sub.add_parser("datasheet", help="emit a corpus datasheet")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--name", default="corpus")
    p.add_argument("--version", default="1.0.0")
    p.add_argument("--processing", default="", help="processing description text")
    p.add_argument("--limitation", action="append", help="known limitation (repeatable)")
    p.add_argument("--licenses", help="JSON file mapping source name to license")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_datasheet)

    p = sub.add_parser("serve", help="start the playground HTTP service")
    p.add_argument("--models", help="directory of *.model.json / *.rules.json / *.report.json")
    p.add_argument("--addr", default="127.0.0.1:8080")
    p.add_argument("--static", help="directory with the playground static build")
    p.set_defaults(func=_cmd_serve)

    p = sub.add_parser("selftest", help="run the built-in invariant checks")
    p.set_defaults(func=_cmd_selftest)

    return parser


def cli_dispatch(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE_ERROR
    try:
        return args.func(args)
    except ToklabError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return DATA_ERROR
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return DATA_ERROR
    except json.JSONDecodeError as exc:
        sys.stderr.write(f"error: invalid JSON input: {exc}\n")
        return DATA_ERROR


def main() -> None:
    raise SystemExit(cli_dispatch())


if __name__ == "__main__":
    main()
