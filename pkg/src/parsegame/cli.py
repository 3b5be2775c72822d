"""Command-line interface: serve, corpus tools, bot simulation, analysis.

Thin wrappers over the package modules; every command exits 0 on success
and nonzero with a category message on stderr otherwise.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .analysis import (
    Grouping,
    InsufficientDataError,
    YMode,
    analyze_rows,
    category_report,
    extract_observations,
)
from .bots import TimingModel, make_policy, run_bot_session
from .config import ServiceConfig
from .corpus import (
    CorpusParseError,
    load_corpus,
    save_corpus,
    validate_corpus,
)
from .engine import CommitMode, EngineConfig, InsufficientCorpusError, build_plan
from .fixtures import build_fixture_corpus, default_corpus_path, load_lexicon
from .logio import LogFormatError, JsonlSessionSink, load_log_dir


def _fail(category: str, message: str, code: int = 1) -> int:
    print(f"error: {category}: {message}", file=sys.stderr)
    return code


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    config = ServiceConfig.load(
        args.config,
        host=args.host,
        port=args.port,
        corpus_path=args.corpus,
        log_dir=args.logs,
        static_dir=args.static,
    )
    try:
        app = create_app(config)
    except (FileNotFoundError, CorpusParseError) as exc:
        return _fail("config", str(exc), 2)
    except Exception as exc:  # corpus validation failure aborts startup
        return _fail("startup", str(exc), 2)
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")
    return 0


def cmd_corpus_generate(args: argparse.Namespace) -> int:
    lexicon = load_lexicon(args.lexicon) if args.lexicon else None
    try:
        corpus = build_fixture_corpus(lexicon, gp_per_type=args.gp_per_type, seed=args.seed)
    except Exception as exc:
        return _fail("generate", str(exc))
    validity = validate_corpus(corpus)
    if not validity.ok:
        return _fail("generate", "; ".join(validity.violations))
    save_corpus(corpus, args.out)
    print(f"wrote {len(corpus)} sentences to {args.out}")
    return 0


def cmd_corpus_validate(args: argparse.Namespace) -> int:
    try:
        corpus = load_corpus(args.path)
    except FileNotFoundError as exc:
        return _fail("corpus", str(exc), 2)
    except CorpusParseError as exc:
        return _fail("parse", str(exc))
    validity = validate_corpus(corpus)
    if validity.ok:
        print(f"{args.path}: {len(corpus)} sentences, no violations")
        return 0
    for violation in validity.violations:
        print(violation, file=sys.stderr)
    return _fail("validate", f"{len(validity.violations)} violation(s)")


def cmd_simulate(args: argparse.Namespace) -> int:
    corpus_path = args.corpus or default_corpus_path()
    try:
        corpus = load_corpus(corpus_path)
    except (FileNotFoundError, CorpusParseError) as exc:
        return _fail("corpus", str(exc), 2)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    engine = EngineConfig(commit_mode=CommitMode(args.commit_mode))
    timing = TimingModel(mean_ms=args.timing_mean, sd_ms=args.timing_sd)
    for i in range(args.subjects):
        subject_id = f"{args.subject_prefix}{i + 1:02d}"
        policy = make_policy(args.policy, flip_prob=args.flip_prob, seed=args.seed * 977 + i)
        try:
            plan = build_plan(corpus, subject_id, seed=args.seed + i)
        except InsufficientCorpusError as exc:
            return _fail("plan", str(exc))
        path = out_dir / f"{subject_id}.jsonl"
        path.unlink(missing_ok=True)
        sink = JsonlSessionSink(path)
        log = run_bot_session(
            corpus,
            plan,
            policy,
            timing,
            config=engine,
            timing_seed=args.seed * 1313 + i,
            sink=sink,
        )
        correct = sum(t.verdict == "OK" for t in log.trials)
        print(f"{subject_id}: {correct}/{len(log.trials)} OK -> {path}")
    return 0


def cmd_analyze(args: argparse.Namespace) -> int:
    log_dir = Path(args.log_dir)
    if not log_dir.is_dir():
        return _fail("analyze", f"log directory not found: {log_dir}", 2)
    try:
        files = load_log_dir(log_dir)
    except LogFormatError as exc:
        return _fail("parse", str(exc))
    logs = [f.to_session_log() for f in files]
    usable = [
        log
        for log in logs
        if log.complete and not log.aborted and (args.include_practice or not log.practice)
    ]
    skipped = len(logs) - len(usable)
    if not usable:
        return _fail("analyze", f"no sessions found in {log_dir}", 3)

    corpus = None
    if args.corpus:
        try:
            corpus = load_corpus(args.corpus)
        except (FileNotFoundError, CorpusParseError) as exc:
            return _fail("corpus", str(exc), 2)
    rows = extract_observations(
        usable, corpus, y_mode=YMode(args.y_mode), include_practice=args.include_practice
    )
    grouping = Grouping.PER_SUBJECT if args.per_subject else Grouping.POOLED
    fits = None
    try:
        table, fits = analyze_rows(rows, grouping)
    except InsufficientDataError as exc:
        # Too few correct rows for the regression: accuracy is still
        # well-defined, so report it with the residual rows left blank.
        table = category_report(rows, {}, grouping)
        print(f"note: residual regression skipped ({exc})")

    print(
        f"sessions: {len(usable)} analyzed"
        + (f", {skipped} skipped (incomplete/practice)" if skipped else "")
    )
    print(f"rows: {len(rows)} ({sum(r.correct for r in rows)} correct)")
    print(f"regression: {grouping.value}, y = {args.y_mode}")
    if fits is not None and not isinstance(fits, dict):
        if fits.dropped_columns:
            print(f"dropped collinear column(s): {', '.join(fits.dropped_columns)}")
        print(f"n = {fits.n}, p = {fits.p}, sigma_hat = {fits.sigma_hat:.4f}")
    print()
    print(table.render_text())
    if args.out:
        Path(args.out).write_text(table.render_delimited(), encoding="utf-8")
        print(f"wrote table to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="parsegame",
        description="Shift-reduce dependency parsing game: service, corpus, bots, analysis.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the HTTP/WebSocket game service")
    serve.add_argument("--config", help="JSON config file (or $PARSEGAME_CONFIG)")
    serve.add_argument("--host", default=None)
    serve.add_argument("--port", type=int, default=None)
    serve.add_argument("--corpus", default=None, help="corpus file (default: shipped fixture)")
    serve.add_argument("--logs", default=None, help="session log directory")
    serve.add_argument("--static", default=None, help="static UI directory to serve at /")
    serve.set_defaults(func=cmd_serve)

    corpus = sub.add_parser("corpus", help="corpus tools")
    corpus_sub = corpus.add_subparsers(dest="corpus_command", required=True)
    gen = corpus_sub.add_parser("generate", help="build a corpus from the template lexicon")
    gen.add_argument("--out", required=True)
    gen.add_argument("--lexicon", help="lexicon JSON (default: shipped fixture)")
    gen.add_argument("--seed", type=int, default=2024)
    gen.add_argument("--gp-per-type", type=int, default=5)
    gen.set_defaults(func=cmd_corpus_generate)
    val = corpus_sub.add_parser("validate", help="lint a corpus file")
    val.add_argument("path")
    val.set_defaults(func=cmd_corpus_validate)

    sim = sub.add_parser("simulate", help="run bot sessions and write logs")
    sim.add_argument(
        "--policy", default="oracle", choices=["oracle", "noisy", "shift", "reduce"]
    )
    sim.add_argument("--flip-prob", type=float, default=0.3, help="noisy flip probability")
    sim.add_argument("--subjects", type=int, default=1)
    sim.add_argument("--seed", type=int, default=1)
    sim.add_argument("--corpus", default=None)
    sim.add_argument("--out", required=True, help="log output directory")
    sim.add_argument("--subject-prefix", default="bot")
    sim.add_argument("--commit-mode", default="hold", choices=["hold", "instant"])
    sim.add_argument("--timing-mean", type=float, default=900.0)
    sim.add_argument("--timing-sd", type=float, default=250.0)
    sim.set_defaults(func=cmd_simulate)

    ana = sub.add_parser("analyze", help="accuracy and residual response time per category")
    ana.add_argument("log_dir")
    ana.add_argument("--corpus", default=None, help="fallback for logs without metadata")
    ana.add_argument("--per-subject", action="store_true")
    ana.add_argument(
        "--y-mode", default="judged_sum", choices=[m.value for m in YMode]
    )
    ana.add_argument("--include-practice", action="store_true")
    ana.add_argument("--out", help="write the delimiter-separated table here")
    ana.set_defaults(func=cmd_analyze)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
