"""Command-line entry point.

Exit status is 0 on success, 1 on data errors (bad corpus, bad session,
violations found), 2 on usage errors. Reports go to stdout, diagnostics
to stderr. Corpus and session arguments accept a path, a name resolved
against $CRANNO_CORPUS_DIR, or a bundled fixture name ("scare_frag" for
the corpus, "golden" for its reference session).
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path
from typing import Sequence

from . import fixtures
from .agreement import cohen_kappa, confusion_matrix, kappa_display
from .corpus import Corpus, parse_corpus, validate_corpus
from .errors import CrannoError
from .ladder import GROUNDED_LEVELS
from .recipe import (
    GP_TAGS,
    DecisionLog,
    Session,
    annotations,
    apply_answer,
    next_prompt,
    parse_session_file,
    replay,
    serialize_log,
    start_session,
)
from .records import dump_record
from .service import AnnotationService, annotation_record, make_http_server
from .stats import (
    comparison_table,
    dialogue_stats_record,
    render_comparison_text,
    summary_record,
)

CORPUS_DIR_ENV = "CRANNO_CORPUS_DIR"


def _resolve(name: str, bundled: dict[str, str]) -> str:
    """Return file text for a path, $CRANNO_CORPUS_DIR name, or fixture."""
    path = Path(name)
    if path.is_file():
        return path.read_text("utf-8")
    corpus_dir = os.environ.get(CORPUS_DIR_ENV)
    if corpus_dir:
        for candidate in (Path(corpus_dir) / name, Path(corpus_dir) / f"{name}.jsonl"):
            if candidate.is_file():
                return candidate.read_text("utf-8")
    if name in bundled:
        return fixtures.data_text(bundled[name])
    raise CrannoError(f"cannot find {name!r} (not a file, not in "
                      f"${CORPUS_DIR_ENV}, not bundled)")


def _load_corpus(name: str) -> Corpus:
    corpus_id = Path(name).stem or name
    return parse_corpus(_resolve(name, fixtures.BUNDLED_CORPORA), corpus_id=corpus_id)


def _load_log(name: str) -> DecisionLog:
    return parse_session_file(_resolve(name, fixtures.BUNDLED_SESSIONS))


def _print_annotations_text(session: Session) -> None:
    dialogue = session.dialogue
    by_turn: dict[int, list[str]] = {}
    for a in session.annotations:
        chip = a.label.value
        if a.level is not None:
            chip += f" {a.level.value}"
        if a.source is not None:
            chip += f" src ({a.source})"
        if a.gp_tag:
            chip += f" [{a.gp_tag}]"
        by_turn.setdefault(a.turn, []).append(chip)
    for turn in dialogue.turns:
        text = turn.text if turn.text else ""
        if turn.action_note:
            text = f"{text} [{turn.action_note}]".strip()
        labels = "; ".join(by_turn.get(turn.index, [])) or "-"
        print(f"({turn.index:>2}) {turn.speaker:<3} {text:<55} {labels}")


def cmd_replay(args: argparse.Namespace) -> int:
    corpus = _load_corpus(args.corpus)
    log = _load_log(args.session)
    session = replay(corpus, log)
    if args.format == "records":
        for a in session.annotations:
            print(dump_record(annotation_record(a)))
    else:
        _print_annotations_text(session)
    return 0


def cmd_validate(args: argparse.Namespace) -> int:
    try:
        corpus = _load_corpus(args.corpus)
    except CrannoError as exc:
        print(f"violation: {exc}")
        return 1
    violations = validate_corpus(corpus)
    for v in violations:
        where = v.dialogue_id if v.index is None else f"{v.dialogue_id}#{v.index}"
        print(f"violation: {where}: {v.rule}: {v.detail}")
    if violations:
        return 1
    print(f"ok: {sum(len(d.turns) for d in corpus.dialogues)} turns in "
          f"{len(corpus.dialogues)} dialogue(s)")
    return 0


def cmd_stats(args: argparse.Namespace) -> int:
    corpus = _load_corpus(args.corpus)
    log = _load_log(args.session)
    session = replay(corpus, log)
    record = dialogue_stats_record(annotations(session), session.dialogue)
    record = {"annotator": session.annotator_id, **record}
    if args.format == "records":
        print(dump_record(record))
        return 0
    print(f"dialogue {record['dialogue']} (annotator {record['annotator']})")
    print(f"turns: {record['turns']}")
    print(f"clarifications: {record['crs']} ({record['cr_rate_percent']:.1f}% of turns)")
    if record["level_percents"]:
        split = "  ".join(
            f"{name} {value:.0f}" for name, value in record["level_percents"].items()
        )
        print(f"level split (%): {split}")
    return 0


def cmd_kappa(args: argparse.Namespace) -> int:
    corpus = _load_corpus(args.corpus)
    session_a = replay(corpus, _load_log(args.sessions[0]))
    session_b = replay(corpus, _load_log(args.sessions[1]))
    matrix = confusion_matrix(
        annotations(session_a),
        annotations(session_b),
        source_sensitive=args.source_sensitive,
    )
    report = cohen_kappa(matrix)
    if args.format == "records":
        print(dump_record({
            "kappa": report.kappa,
            "observed_agreement": report.observed_agreement,
            "expected_agreement": report.expected_agreement,
            "n_items": report.n_items,
            "undefined": report.undefined,
        }))
        return 0
    labels = matrix.labels.labels
    width = max(len(l) for l in labels) + 2
    print("confusion matrix (rows: first annotator, columns: second):")
    print(" " * width + "".join(l.rjust(width) for l in labels))
    for label, row in zip(labels, matrix.counts):
        print(label.rjust(width) + "".join(str(int(n)).rjust(width) for n in row))
    print(f"items: {report.n_items}")
    print(f"observed agreement: {report.observed_agreement:.4f}")
    print(f"expected agreement: {report.expected_agreement:.4f}")
    print(f"kappa: {kappa_display(report)}")
    return 0


def cmd_compare(args: argparse.Namespace) -> int:
    if args.fixtures != "table4":
        raise CrannoError(f"unknown fixture set {args.fixtures!r}")
    report = comparison_table(fixtures.table4_summaries())
    if args.format == "records":
        for summary in report.columns:
            print(dump_record(summary_record(summary)))
        return 0
    print(render_comparison_text(report), end="")
    return 0


def _prompt_loop(session: Session, out_path: Path) -> Session:
    """Interactive annotation: render prompt, read answer, autosave."""
    last_turn = -1
    while not session.finished:
        prompt = next_prompt(session)
        turn = session.dialogue.turns[prompt.turn]
        if prompt.turn != last_turn:
            last_turn = prompt.turn
            desc = turn.text or ""
            if turn.action_note:
                desc = f"{desc} [{turn.action_note}]".strip()
            print(f"\n--- turn ({turn.index}) {turn.speaker}: {desc}")
            for entry in reversed(session.stack.entries):
                satisfied = "".join(
                    level.value[1] if level in entry.satisfied else "-"
                    for level in GROUNDED_LEVELS
                )
                src = session.dialogue.turns[entry.source.index]
                print(f"    stack: ({entry.source.index}) \"{src.text}\" "
                      f"[evidence {satisfied}]")
        print(f"[{prompt.point.value}] {prompt.question}")
        print(f"    answers: {', '.join(prompt.answers)}"
              f"  (gp tag: append one of {', '.join(GP_TAGS)})")
        try:
            raw = input("> ").strip()
        except EOFError:
            print("\nsaved; resume by running the same command again.",
                  file=sys.stderr)
            break
        if raw in ("quit", "q"):
            break
        if not raw:
            continue
        parts = raw.split()
        answer = parts[0]
        gp_tag = parts[1] if len(parts) > 1 else None
        try:
            session = apply_answer(session, answer, gp_tag=gp_tag)
        except CrannoError as exc:
            print(f"error: {exc}", file=sys.stderr)
            continue
        out_path.write_text(serialize_log(session.log), encoding="utf-8")
    out_path.write_text(serialize_log(session.log), encoding="utf-8")
    return session


def cmd_annotate(args: argparse.Namespace) -> int:
    corpus = _load_corpus(args.corpus)
    out_path = Path(args.session)
    if out_path.is_file():
        log = parse_session_file(out_path.read_text("utf-8"))
        if log.dialogue_id != args.dialogue or log.annotator_id != args.annotator:
            raise CrannoError(
                f"existing session file is for {log.dialogue_id!r}/"
                f"{log.annotator_id!r}, not {args.dialogue!r}/{args.annotator!r}"
            )
        session = replay(corpus, log)
        print(f"resuming session at answer {session.version}", file=sys.stderr)
    else:
        session = start_session(corpus, args.dialogue, args.annotator)
    session = _prompt_loop(session, out_path)
    if session.finished:
        print(f"\ndialogue complete; session written to {out_path}", file=sys.stderr)
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    corpus = _load_corpus(args.corpus)
    service = AnnotationService({corpus.corpus_id: corpus}, args.sessions)
    server = make_http_server(service, args.port, ui_dir=args.ui)
    host, port = server.server_address[:2]
    print(f"serving corpus {corpus.corpus_id!r} on http://{host}:{port}/ "
          f"(sessions in {args.sessions})", file=sys.stderr)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cranno",
        description="Annotate clarification requests grounded in modalities.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_format(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", choices=("text", "records"), default="text")

    p = sub.add_parser("annotate", help="interactively annotate a dialogue")
    p.add_argument("--corpus", required=True)
    p.add_argument("--dialogue", required=True)
    p.add_argument("--annotator", required=True)
    p.add_argument("--session", required=True,
                   help="session file to write (resumed if it exists)")
    p.set_defaults(func=cmd_annotate)

    p = sub.add_parser("replay", help="replay a session file, print labels")
    p.add_argument("--corpus", required=True)
    p.add_argument("--session", required=True)
    add_format(p)
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("validate", help="check a corpus file")
    p.add_argument("--corpus", required=True)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("stats", help="per-dialogue clarification rates")
    p.add_argument("--corpus", required=True)
    p.add_argument("--session", required=True)
    add_format(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("kappa", help="inter-annotator agreement of two sessions")
    p.add_argument("--corpus", required=True)
    p.add_argument("--session", dest="sessions", required=True, action="append",
                   help="give twice: one per annotator")
    p.add_argument("--source-sensitive", action="store_true",
                   help="distinguish clarification sources, not just levels")
    add_format(p)
    p.set_defaults(func=cmd_kappa)

    p = sub.add_parser("compare", help="render the cross-corpus comparison")
    p.add_argument("--fixtures", default="table4")
    add_format(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("serve", help="serve the HTTP session API")
    p.add_argument("--corpus", required=True)
    p.add_argument("--port", type=int, default=8571)
    p.add_argument("--sessions", default="sessions",
                   help="directory for persisted session files")
    p.add_argument("--ui", default=None,
                   help="directory with a built web UI to serve statically")
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "kappa" and len(args.sessions) != 2:
        parser.error("kappa needs exactly two --session arguments")
    try:
        return args.func(args)
    except CrannoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
