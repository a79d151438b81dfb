"""Command-line pipeline: generate, ingest, check, serve, sample, mine, export.

Exit codes: 0 success, 1 usage, 2 file/store I/O, 3 provider failure,
4 validation (bad transcripts, bad filters, bad config values).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import AppConfig, ConfigError, Resources, load_config, load_resources
from .curation import GATE_CSV_HEADER, CurationError, auto_check, gate_csv_row, gate_to_dict
from .generator import (
    HttpChatProvider,
    MockChatProvider,
    PromptSpec,
    ProviderError,
    generate_batch,
)
from .lexicons import LexiconError
from .sampler import (
    CapTooSmall,
    EmptyStratum,
    Stratum,
    experiment_csv,
    explicit_vs_implicit_csv,
    run_experiment,
    run_explicit_vs_implicit,
)
from .store import CorpusStore, DuplicateId, StoreError, StoreLocked, make_record, mine_chain_patterns
from .textmetrics import (
    METRIC_CSV_HEADER,
    DegenerateText,
    join_texts,
    metric_csv_row,
    score_text,
)
from .transcript import (
    AGENT,
    CEFR_LEVELS,
    CLIENT,
    EMOTIONS,
    Dialogue,
    DialogueMeta,
    TranscriptError,
    parse_transcript,
    redact_brands,
    serialize_transcript,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_PROVIDER = 3
EXIT_VALIDATION = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _setup(args) -> tuple[AppConfig, Resources]:
    cfg = load_config(args.config)
    if getattr(args, "store", None):
        cfg = AppConfig(**{**cfg.__dict__, "store_path": args.store})
    return cfg, load_resources(cfg)


def _prepare_dialogue(raw_text: str, meta: DialogueMeta, resources: Resources) -> Dialogue:
    from dataclasses import replace

    d = parse_transcript(raw_text)
    d = redact_brands(d, sorted(resources.brands.entries))
    d = replace(d, meta=meta)
    d.validate()
    return d


def _store_dialogue(store: CorpusStore, d: Dialogue, cfg: AppConfig, resources: Resources) -> str:
    gate = auto_check(d, resources.lexicon, cfg.bands)
    report = score_text(join_texts(t.text for t in d.client_turns()), resources.score_config)
    return store.append(make_record(d, gate, report))


def cmd_generate(args) -> int:
    cfg, resources = _setup(args)
    if args.grid:
        cells = [(e, l, imp) for e in EMOTIONS for l in CEFR_LEVELS for imp in (False, True)]
    else:
        if not args.emotion or not args.cefr:
            print("error: --emotion and --cefr are required without --grid", file=sys.stderr)
            return EXIT_USAGE
        cells = [(args.emotion, args.cefr, args.implicit)]
    specs = [
        PromptSpec(target_emotion=e, cefr=l, implicit=imp, scenario=args.scenario)
        for e, l, imp in cells
        for _ in range(args.count)
    ]
    kind = args.provider or cfg.provider_kind
    if kind == "mock":
        provider = MockChatProvider(leak_emotion_words=args.mock_leak or cfg.mock_leak_emotion_words)
    else:
        provider = HttpChatProvider(cfg.provider)
    denylists = {e: sorted(resources.lexicon.words(e)) for e in EMOTIONS}
    results = generate_batch(specs, cfg.provider, provider, denylists)

    provider_failures = parse_failures = 0
    with CorpusStore(cfg.store_path) as store:
        for result in results:
            label = f"{result.spec.target_emotion}/{result.spec.cefr}/{'implicit' if result.spec.implicit else 'explicit'}"
            if not result.ok:
                provider_failures += 1
                print(f"error: {label}: {result.error}", file=sys.stderr)
                continue
            meta = DialogueMeta(
                target_emotion=result.spec.target_emotion,
                cefr=result.spec.cefr,
                implicit=result.spec.implicit,
                scenario=result.spec.scenario,
                provider=result.provider,
            )
            try:
                d = _prepare_dialogue(result.raw_text, meta, resources)
                print(_store_dialogue(store, d, cfg, resources))
            except (TranscriptError, DegenerateText) as exc:
                parse_failures += 1
                print(f"error: {label}: {exc}", file=sys.stderr)
    if provider_failures:
        return EXIT_PROVIDER
    if parse_failures:
        return EXIT_VALIDATION
    return EXIT_OK


def cmd_ingest(args) -> int:
    cfg, resources = _setup(args)
    texts = []
    for name in args.files:
        texts.append((name, Path(name).read_text("utf-8")))
    with CorpusStore(cfg.store_path) as store:
        for name, text in texts:
            meta = DialogueMeta(
                target_emotion=args.emotion,
                cefr=args.cefr,
                implicit=args.implicit,
                scenario=args.scenario,
                provider="ingest",
            )
            d = _prepare_dialogue(text, meta, resources)
            print(_store_dialogue(store, d, cfg, resources))
    return EXIT_OK


def cmd_check(args) -> int:
    cfg, resources = _setup(args)
    store = CorpusStore(cfg.store_path, read_only=True)
    try:
        record = store.get(args.id)
    except KeyError:
        print(f"error: no dialogue with id {args.id!r}", file=sys.stderr)
        return EXIT_VALIDATION
    gate = auto_check(record.dialogue, resources.lexicon, cfg.bands)
    lo, hi = cfg.bands.interval(record.dialogue.meta.cefr)
    evidence = gate_to_dict(gate)
    evidence["band"] = [lo, None if hi == float("inf") else hi]
    evidence["stored_disposition"] = record.gate.disposition
    print(json.dumps(evidence, indent=2))
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    cfg, resources = _setup(args)
    host, _, port = args.listen.rpartition(":")
    if not host or not port.isdigit():
        print(f"error: --listen must look like HOST:PORT, got {args.listen!r}", file=sys.stderr)
        return EXIT_USAGE
    with CorpusStore(cfg.store_path) as store:
        app = create_app(store, bands=cfg.bands, ui_dir=args.ui)
        uvicorn.run(app, host=host, port=int(port), log_level="warning")
    return EXIT_OK


def cmd_sample(args) -> int:
    cfg, resources = _setup(args)
    store = CorpusStore(cfg.store_path, read_only=True)
    records = store.records()
    if args.compare_modes:
        results = {}
        for level in CEFR_LEVELS:
            try:
                results[level] = run_explicit_vs_implicit(records, level, resources.score_config)
            except EmptyStratum as exc:
                print(f"note: skipped {exc}", file=sys.stderr)
        if not results:
            print("error: no accepted dialogues to analyze", file=sys.stderr)
            return EXIT_VALIDATION
        output = explicit_vs_implicit_csv(results)
    else:
        roles = [CLIENT, AGENT] if args.role == "both" else [args.role]
        strata = [Stratum(cefr=level, role=role) for level in CEFR_LEVELS for role in roles]
        stats, skipped = run_experiment(
            records,
            strata,
            runs_per_stratum=args.runs,
            base_seed=args.seed,
            cap=args.cap,
            score_config=resources.score_config,
        )
        for stratum, reason in skipped:
            print(f"note: skipped {stratum.label}: {reason}", file=sys.stderr)
        if not stats:
            print("error: no accepted dialogues to sample", file=sys.stderr)
            return EXIT_VALIDATION
        output = experiment_csv(stats)
    if args.out:
        Path(args.out).write_text(output, encoding="utf-8")
    else:
        sys.stdout.write(output)
    return EXIT_OK


def cmd_mine(args) -> int:
    cfg, _ = _setup(args)
    store = CorpusStore(cfg.store_path, read_only=True)
    patterns = mine_chain_patterns(store, n=args.n, min_support=args.min_support, emotion=args.emotion, cefr=args.cefr)
    if args.format == "json":
        payload = [
            {"pattern": [list(entry) for entry in p.ngram], "support": p.support} for p in patterns
        ]
        print(json.dumps(payload, indent=2))
    else:
        for p in patterns:
            chain = " -> ".join(f"({role}, {attitude})" for role, attitude in p.ngram)
            print(f"{p.support}\t{chain}")
    return EXIT_OK


def cmd_export(args) -> int:
    cfg, _ = _setup(args)
    store = CorpusStore(cfg.store_path, read_only=True)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    records = store.records()
    if args.format == "transcript":
        for record in records:
            (out / f"{record.dialogue.id}.txt").write_text(serialize_transcript(record.dialogue), encoding="utf-8")
        print(f"wrote {len(records)} transcripts to {out}")
    else:
        gates = [GATE_CSV_HEADER] + [gate_csv_row(r.dialogue, r.gate) for r in records]
        (out / "gates.csv").write_text("\n".join(gates) + "\n", encoding="utf-8")
        metrics = [METRIC_CSV_HEADER] + [
            metric_csv_row(r.dialogue.id, r.metric_report) for r in records if r.metric_report
        ]
        (out / "metrics.csv").write_text("\n".join(metrics) + "\n", encoding="utf-8")
        print(f"wrote gates.csv and metrics.csv to {out}")
    return EXIT_OK


def build_parser() -> _Parser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None, help="TOML config file")
    common.add_argument("--store", default=None, help="corpus file path (overrides config)")

    parser = _Parser(prog="emocorpus", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", parents=[common], help="generate dialogues via the configured provider")
    p.add_argument("--emotion", choices=EMOTIONS)
    p.add_argument("--cefr", choices=CEFR_LEVELS)
    p.add_argument("--implicit", action="store_true")
    p.add_argument("--grid", action="store_true", help="run every (emotion, cefr, implicit) cell")
    p.add_argument("--count", type=int, default=1, help="dialogues per cell")
    p.add_argument("--scenario", default="customer service of a hypothetical phone company")
    p.add_argument("--provider", choices=["http", "mock"], default=None, help="override the configured provider kind")
    p.add_argument(
        "--mock-leak-emotion-words",
        dest="mock_leak",
        action="store_true",
        help="make the mock provider break the implicit-mode word ban (validator exercise)",
    )
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("ingest", parents=[common], help="parse and store externally produced transcripts")
    p.add_argument("files", nargs="+")
    p.add_argument("--emotion", required=True, choices=EMOTIONS)
    p.add_argument("--cefr", required=True, choices=CEFR_LEVELS)
    p.add_argument("--implicit", action="store_true")
    p.add_argument("--scenario", default="")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("check", parents=[common], help="re-run the automatic gates for one dialogue")
    p.add_argument("id")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("serve", parents=[common], help="start the review service")
    p.add_argument("--listen", default="127.0.0.1:8000")
    p.add_argument("--ui", default=None, help="directory of built UI assets to serve under /ui/")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("sample-readability", parents=[common], help="randomized readability experiment CSV")
    p.add_argument("--runs", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cap", type=int, default=1000)
    p.add_argument("--role", choices=[CLIENT, AGENT, "both"], default="both")
    p.add_argument("--compare-modes", action="store_true", help="whole-dialogue explicit vs implicit CSV instead")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("mine", parents=[common], help="frequent attitude-chain n-grams")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--min-support", type=int, default=1)
    p.add_argument("--emotion", choices=EMOTIONS, default=None)
    p.add_argument("--cefr", choices=CEFR_LEVELS, default=None)
    p.add_argument("--format", choices=["table", "json"], default="table")
    p.set_defaults(func=cmd_mine)

    p = sub.add_parser("export", parents=[common], help="export the corpus as transcripts or CSVs")
    p.add_argument("--format", choices=["transcript", "csv"], required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_export)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ProviderError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PROVIDER
    except (StoreLocked, OSError, UnicodeDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (
        TranscriptError,
        CurationError,
        LexiconError,
        ConfigError,
        DegenerateText,
        DuplicateId,
        StoreError,
        EmptyStratum,
        CapTooSmall,
        ValueError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
