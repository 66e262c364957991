"""Command-line interface: index, analyze, compare, evaluate, serve."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import pipeline
from .docmodel import load_document
from .errors import NontextPdError
from .evalmetrics import (
    Detection,
    EvalThresholds,
    PlagCase,
    case_doc_level,
    char_precision_recall,
    granularity,
    plagdet,
)
from .index import IndexStore, build_index
from .pipeline import ALL_METHODS, analyze_pair, detailed_analysis, retrieval_union

DEFAULT_METHODS = "bc_rel,lccs,max_gct,histo,lcis,git,sherlock,encoplot"

ENV_INDEX = "NONTEXT_PD_INDEX"


def _fail(message: str, code: int = 2) -> int:
    print(json.dumps({"error": message}), file=sys.stderr)
    return code


def _result_json(result) -> str:
    return json.dumps(result.to_dict(), sort_keys=True, ensure_ascii=False, indent=2) + "\n"


def _parse_methods(spec: str) -> list[str]:
    methods = [m.strip() for m in spec.split(",") if m.strip()]
    unknown = [m for m in methods if m not in ALL_METHODS]
    if unknown:
        raise NontextPdError(
            f"unknown methods: {', '.join(unknown)}; available: {', '.join(ALL_METHODS)}"
        )
    return methods


def _index_path(args) -> Path:
    path = getattr(args, "index", None) or os.environ.get(ENV_INDEX)
    if not path:
        raise NontextPdError(f"no index directory given (--index or ${ENV_INDEX})")
    return Path(path)


def cmd_index(args) -> int:
    source = Path(args.source)
    files = sorted(source.glob("*.json"))
    if not files:
        return _fail(f"no *.json documents in {source}")
    docs = [load_document(path.read_bytes(), base_dir=path.parent) for path in files]
    store = build_index(docs)
    store.save(args.out)
    print(json.dumps({"indexed": len(docs), "out": str(args.out)}))
    return 0


def cmd_analyze(args) -> int:
    store = IndexStore.load(_index_path(args))
    doc_path = Path(args.document)
    query = load_document(doc_path.read_bytes(), base_dir=doc_path.parent)
    methods = _parse_methods(args.methods)
    if args.against:
        candidate_ids = [c.strip() for c in args.against.split(",") if c.strip()]
        missing = [c for c in candidate_ids if c not in store.docs]
        if missing:
            return _fail(f"unknown candidate ids: {', '.join(missing)}")
    else:
        candidate_ids = retrieval_union(store, query)
    result = detailed_analysis(store, query, candidate_ids, methods)
    payload = _result_json(result)
    if args.out:
        Path(args.out).write_text(payload, encoding="utf-8")
    else:
        sys.stdout.write(payload)
    return 0


def cmd_compare(args) -> int:
    path_a, path_b = Path(args.doc_a), Path(args.doc_b)
    doc_a = load_document(path_a.read_bytes(), base_dir=path_a.parent)
    doc_b = load_document(path_b.read_bytes(), base_dir=path_b.parent)
    methods = _parse_methods(args.methods)
    analysis = analyze_pair(doc_a, doc_b, methods)
    result = pipeline.AnalysisResult(
        query_doc_id=doc_a.doc_id, methods=methods, candidates=[analysis]
    )
    payload = _result_json(result)
    if args.out:
        Path(args.out).write_text(payload, encoding="utf-8")
    else:
        sys.stdout.write(payload)
    return 0


def _load_cases(path: str) -> list[PlagCase]:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return [
        PlagCase(
            c_plg=tuple(entry["c_plg"]),
            d_plg=entry["d_plg"],
            c_src=tuple(entry["c_src"]),
            d_src=entry["d_src"],
        )
        for entry in data
    ]


def _load_detections(path: str) -> list[Detection]:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return [
        Detection(
            x_plg=tuple(entry["x_plg"]),
            d_plg=entry["d_plg"],
            x_src=tuple(entry["x_src"]),
            d_src=entry["d_src"],
        )
        for entry in data
    ]


def cmd_evaluate(args) -> int:
    cases = _load_cases(args.truth)
    detections = _load_detections(args.detections)
    pr = char_precision_recall(cases, detections)
    g = granularity(cases, detections)
    score = plagdet(cases, detections)
    thresholds = EvalThresholds(tau1=args.tau1, tau2=args.tau2)
    levels = case_doc_level(cases, detections, thresholds)
    report = {
        "precision": pr["precision"],
        "recall": pr["recall"],
        "granularity": g,
        "plagdet": score,
        **levels,
        "cases": len(cases),
        "detections": len(detections),
    }
    if args.out:
        Path(args.out).write_text(json.dumps(report, sort_keys=True, indent=2) + "\n")
    print(f"{'metric':<16}{'value':>10}")
    for key in (
        "precision",
        "recall",
        "granularity",
        "plagdet",
        "case_precision",
        "case_recall",
        "doc_precision",
        "doc_recall",
    ):
        print(f"{key:<16}{report[key]:>10.4f}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    store = IndexStore.load(_index_path(args))
    app = create_app(store, api_token=os.environ.get("NONTEXT_PD_TOKEN"))
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nontext-pd",
        description="Hybrid plagiarism detection over citations, math, images, and text",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_index = sub.add_parser("index", help="build an index from a directory of document JSON files")
    p_index.add_argument("source", help="directory containing *.json documents")
    p_index.add_argument("--out", required=True, help="output index directory")
    p_index.set_defaults(func=cmd_index)

    p_analyze = sub.add_parser("analyze", help="retrieve candidates and run detailed analysis")
    p_analyze.add_argument("document", help="query document JSON file")
    p_analyze.add_argument("--index", help=f"index directory (or ${ENV_INDEX})")
    p_analyze.add_argument("--methods", default=DEFAULT_METHODS)
    p_analyze.add_argument("--against", help="comma-separated doc ids (collusion mode)")
    p_analyze.add_argument("--out", help="write result JSON here instead of stdout")
    p_analyze.set_defaults(func=cmd_analyze)

    p_compare = sub.add_parser("compare", help="compare two documents directly")
    p_compare.add_argument("doc_a", help="suspicious document JSON")
    p_compare.add_argument("doc_b", help="comparison document JSON")
    p_compare.add_argument("--methods", default=DEFAULT_METHODS)
    p_compare.add_argument("--out", help="write result JSON here instead of stdout")
    p_compare.set_defaults(func=cmd_compare)

    p_eval = sub.add_parser("evaluate", help="score detections against ground truth")
    p_eval.add_argument("--truth", required=True, help="JSON list of plagiarism cases")
    p_eval.add_argument("--detections", required=True, help="JSON list of detections")
    p_eval.add_argument("--tau1", type=float, default=0.5, help="minimum recall threshold")
    p_eval.add_argument("--tau2", type=float, default=0.5, help="minimum precision threshold")
    p_eval.add_argument("--out", help="also write the report JSON here")
    p_eval.set_defaults(func=cmd_evaluate)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--index", help=f"index directory (or ${ENV_INDEX})")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8040)
    p_serve.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NontextPdError as exc:
        return _fail(str(exc))
    except FileNotFoundError as exc:
        return _fail(f"file not found: {exc.filename}")
    except json.JSONDecodeError as exc:
        return _fail(f"invalid JSON: {exc}")


if __name__ == "__main__":
    sys.exit(main())
