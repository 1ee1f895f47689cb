"""Operator command line: ingest data, query, evaluate, serve.

Exit codes: 0 success, 1 usage error, 2 data error (bad files, unknown
identifiers), 3 runtime error (bind failures and the like).

Every command is scriptable: the interactive disambiguation prompt only
appears when stdin is a terminal and no `--select` was given.
"""

from __future__ import annotations

import argparse
import json
import os
import socket
import sys
from pathlib import Path

from .config import ENV_PREFIX, EngineConfig, load_config, with_overrides
from .engine import SearchEngine
from .errors import DataError, MapsenseError
from .evaluation import Evaluator, load_log
from .geo import BoundingBox
from .interpreter import Disambiguation, NoMatch, Results

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_RUNTIME = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems exit 1, not argparse's default 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(prog="mapsense", description="Concept-aware geographic search")
    parser.add_argument("--config", help=f"config file path (or ${ENV_PREFIX}CONFIG)")
    parser.add_argument("--beta", type=float, help="similar-terms threshold fraction")
    parser.add_argument("--gamma", type=float, help="edit-distance budget fraction")
    parser.add_argument("--bbox", help="default bounding box: min_lon,min_lat,max_lon,max_lat")
    sub = parser.add_subparsers(dest="command", required=True)

    p_ingest = sub.add_parser("ingest", help="load a GeoJSON FeatureCollection into the snapshot")
    p_ingest.add_argument("geojson", help="path to a FeatureCollection document")
    p_ingest.add_argument("--concept", help="concept id for every feature (else per-feature 'concept' property)")

    p_query = sub.add_parser("query", help="run one query and print the results")
    p_query.add_argument("text", help="free-text query")
    p_query.add_argument("--select", help="comma-separated concept ids for disambiguation")
    p_query.add_argument("--viewport", help="viewport box min_lon,min_lat,max_lon,max_lat")

    p_eval = sub.add_parser("eval", help="replay an annotated query log and report accuracy")
    p_eval.add_argument("log", help="path to a JSON Lines query log")
    p_eval.add_argument("--out", help="also write the machine-readable report to this path")

    p_serve = sub.add_parser("serve", help="run the HTTP API")
    p_serve.add_argument("--host")
    p_serve.add_argument("--port", type=int)

    return parser


def _load_engine(args) -> tuple[SearchEngine, EngineConfig]:
    config_path = args.config or os.environ.get(ENV_PREFIX + "CONFIG")
    if not config_path:
        raise DataError(f"no config given: use --config or ${ENV_PREFIX}CONFIG")
    config = load_config(config_path)
    config = with_overrides(config, beta=args.beta, gamma=args.gamma, bbox=args.bbox)
    return SearchEngine.from_config(config), config


def _print_outcome(result, out=None):
    out = out if out is not None else sys.stdout
    outcome = result.outcome
    if isinstance(outcome, NoMatch):
        print("No concept matched the query.", file=out)
        return
    assert isinstance(outcome, Results)
    print("Concepts: " + ", ".join(sorted(outcome.concepts)), file=out)
    qualifier_lists = outcome.qualifier_set.term_lists()
    rendered = ", ".join(" ".join(terms) for terms in qualifier_lists) if qualifier_lists else "(none)"
    print("Qualifiers: " + rendered, file=out)
    print(f"Results: {len(result.items)}", file=out)
    for item in result.items:
        name = item.properties.get("name", "")
        print(f"  {item.id}\t{name}", file=out)


def _prompt_selection(candidates) -> list[str] | None:
    print("Multiple concepts may match:")
    for index, candidate in enumerate(candidates, start=1):
        print(f"  {index}) {candidate.concept_id} — {candidate.label} (matched: {candidate.matched_keyword})")
    answer = input("Select numbers (comma-separated, empty to cancel): ").strip()
    if not answer:
        return None
    chosen = []
    for part in answer.replace(",", " ").split():
        try:
            index = int(part)
        except ValueError:
            print(f"not a number: {part}", file=sys.stderr)
            return None
        if not 1 <= index <= len(candidates):
            print(f"out of range: {index}", file=sys.stderr)
            return None
        chosen.append(candidates[index - 1].concept_id)
    return chosen


def cmd_ingest(args) -> int:
    engine, config = _load_engine(args)
    report = engine.store.ingest(args.geojson, args.concept)
    if config.snapshot is not None:
        engine.store.save_snapshot(config.snapshot)
        where = f" (snapshot: {config.snapshot})"
    else:
        where = " (no snapshot path configured; store not persisted)"
    dropped = f", {report.dropped_properties} properties dropped" if report.dropped_properties else ""
    print(f"{report.stored} items{dropped}{where}")
    return EXIT_OK


def cmd_query(args) -> int:
    engine, _ = _load_engine(args)
    viewport = BoundingBox.from_sequence(args.viewport.split(",")) if args.viewport else None
    selected = [s for s in args.select.split(",") if s] if args.select else None
    result = engine.search(args.text, viewport=viewport, selected=selected)
    if isinstance(result.outcome, Disambiguation):
        candidates = result.outcome.candidates
        if sys.stdin.isatty():
            chosen = _prompt_selection(candidates)
            if chosen:
                result = engine.search(args.text, viewport=viewport, selected=chosen)
                _print_outcome(result)
                return EXIT_OK
            print("Cancelled.", file=sys.stderr)
            return EXIT_OK
        print("Ambiguous query; pass --select with one of:")
        for candidate in candidates:
            print(f"  {candidate.concept_id}\t{candidate.label}\t(matched: {candidate.matched_keyword})")
        return EXIT_OK
    _print_outcome(result)
    return EXIT_OK


def cmd_eval(args) -> int:
    engine, _ = _load_engine(args)
    log = load_log(args.log)
    report = Evaluator(engine).evaluate(log)
    print(report.to_text(), end="")
    if args.out:
        Path(args.out).write_text(json.dumps(report.to_dict(), ensure_ascii=False, indent=1) + "\n", encoding="utf-8")
        print(f"report written to {args.out}")
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    engine, config = _load_engine(args)
    host = args.host or config.host
    port = args.port if args.port is not None else config.port
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    try:
        probe.bind((host, port))
    except OSError as exc:
        print(f"cannot bind {host}:{port}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    finally:
        probe.close()
    app = create_app(engine)
    uvicorn.run(app, host=host, port=port, log_level="info")
    return EXIT_OK


_COMMANDS = {
    "ingest": cmd_ingest,
    "query": cmd_query,
    "eval": cmd_eval,
    "serve": cmd_serve,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except MapsenseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except KeyboardInterrupt:
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
