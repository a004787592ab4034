"""Batch command-line interface over the whole pipeline."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .config import Config, load_config
from .corpus import (
    corpus_stats,
    load_corpus,
    load_jsonl,
    pair_from_record,
    pair_to_record,
    save_jsonl,
    triplet_to_record,
)
from .errors import RespkitError
from .generation import (
    AuthorEdit,
    GenerationRequest,
    generate,
    refinement_request,
    request_from_record,
    request_to_record,
    result_from_record,
    result_to_record,
)
from .metrics.report import EvalReport, evaluate_response, write_report_csv
from .pair_align import extract_pairs
from .providers import AuditLog
from .retrieval import retrieve_v1
from .triplet_align import align_triplets

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="respkit", description=__doc__)
    sub = parser.add_subparsers(dest="command")

    def common(p):
        p.add_argument("--config", help="TOML config file")
        p.add_argument("--mock-providers", action="store_true", help="use offline mock providers")
        return p

    p = common(sub.add_parser("extract-pairs", help="extract review-response segment pairs"))
    p.add_argument("--corpus", required=True, help="corpus directory or file")
    p.add_argument("--out", required=True, help="output pairs.jsonl")
    p.add_argument("--no-embedder", action="store_true", help="skip the embedding condition")

    p = common(sub.add_parser("align-triplets", help="link edits to pairs"))
    p.add_argument("--corpus", required=True)
    p.add_argument("--pairs", required=True, help="pairs.jsonl from extract-pairs")
    p.add_argument("--edits", help="extra edits.jsonl beyond those in the corpus")
    p.add_argument("--out", required=True, help="output triplets.jsonl")
    p.add_argument("--classifiers", action="store_true", help="enable the classifier route")

    p = common(sub.add_parser("retrieve", help="retrieve v1 paragraphs for a segment"))
    p.add_argument("--corpus", required=True)
    p.add_argument("--paper", required=True, help="paper id")
    p.add_argument("--segment", required=True, help="file holding the review segment text")
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--out", help="output JSON (default stdout)")

    p = common(sub.add_parser("generate", help="generate responses"))
    p.add_argument("--requests", help="requests.jsonl, one generation request per line")
    p.add_argument("--setting", help="setting for a single ad-hoc request (S1..S9)")
    p.add_argument("--review", help="review segment text for the ad-hoc request")
    p.add_argument("--edit", action="append", default=[], help="author edit string (repeatable)")
    p.add_argument("--v1", action="append", default=[], help="v1 paragraph (repeatable)")
    p.add_argument("--limit", type=int, help="word limit")
    p.add_argument("--venue", default="journal", choices=["conference", "journal"])
    p.add_argument("--out", required=True, help="output results.jsonl")
    p.add_argument("--audit", help="audit log path (default: <out dir>/audit.jsonl)")

    p = common(sub.add_parser("evaluate", help="evaluate generated responses"))
    p.add_argument("--requests", required=True)
    p.add_argument("--results", required=True)
    p.add_argument("--out", required=True, help="output evals.jsonl")
    p.add_argument("--audit")

    p = common(sub.add_parser("refine", help="refine evaluated responses"))
    p.add_argument("--requests", required=True)
    p.add_argument("--results", required=True)
    p.add_argument("--evals", required=True)
    p.add_argument("--out", required=True, help="output refined results.jsonl")
    p.add_argument("--out-requests", help="also write the refinement requests")
    p.add_argument("--audit")

    p = common(sub.add_parser("report", help="aggregate eval reports into a CSV"))
    p.add_argument("--in", dest="inputs", required=True, help="evals.jsonl file or directory")
    p.add_argument("--out", default="report.csv")

    p = common(sub.add_parser("stats", help="print corpus statistics"))
    p.add_argument("--corpus", required=True)
    p.add_argument("--pairs")
    p.add_argument("--triplets")

    p = common(sub.add_parser("serve", help="run the session service"))
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--data-dir", default="respkit_data")
    p.add_argument("--frontend", help="static frontend bundle directory")

    return parser


def _load_cfg(args) -> Config:
    config = load_config(args.config) if args.config else Config()
    if getattr(args, "mock_providers", False):
        config.force_mock()
    return config


def _audit_for(args) -> AuditLog:
    path = args.audit if getattr(args, "audit", None) else Path(args.out).parent / "audit.jsonl"
    return AuditLog(path)


def cmd_extract_pairs(args) -> int:
    config = _load_cfg(args)
    embedder = None if args.no_embedder else config.make_embedder()
    corpus = load_corpus(args.corpus)
    records = []
    for bundle in corpus.bundles.values():
        for response in bundle.responses:
            for review in bundle.reviews:
                if (
                    response.reviewer_id
                    and review.reviewer_id
                    and response.reviewer_id != review.reviewer_id
                ):
                    continue
                for pair in extract_pairs(review, response, embedder, config.match):
                    records.append(pair_to_record(pair))
    save_jsonl(args.out, records)
    logger.info("wrote %d pairs to %s", len(records), args.out)
    return 0


def cmd_align_triplets(args) -> int:
    config = _load_cfg(args)
    config.triplet.classifier_enabled = args.classifiers
    corpus = load_corpus(args.corpus)
    if args.edits:
        from .corpus import edit_from_record

        for edit in load_jsonl(args.edits, edit_from_record):
            corpus.add_edit(edit)
    pairs = load_jsonl(args.pairs, pair_from_record)
    for pair in pairs:
        corpus.validate_pair(pair)
    classifier = config.make_classifier() if args.classifiers else None
    embedder = config.make_embedder()
    records = []
    for bundle in corpus.bundles.values():
        paper_pairs = [p for p in pairs if p.paper_id == bundle.paper_id]
        if not paper_pairs or not bundle.edits:
            continue
        triplets = align_triplets(
            paper_pairs,
            bundle.edits,
            corpus,
            embedder,
            ce_classifier=classifier,
            ae_classifier=classifier,
            cfg=config.triplet,
        )
        records.extend(triplet_to_record(t) for t in triplets)
    save_jsonl(args.out, records)
    logger.info("wrote %d triplets to %s", len(records), args.out)
    return 0


def cmd_retrieve(args) -> int:
    config = _load_cfg(args)
    config.retrieval.k_final = min(args.k, config.retrieval.candidate_pool)
    corpus = load_corpus(args.corpus)
    bundle = corpus.bundles.get(args.paper)
    if bundle is None or bundle.v1 is None:
        raise RespkitError(f"paper {args.paper} has no v1 document")
    segment = Path(args.segment).read_text(encoding="utf-8").strip()
    result = retrieve_v1(
        segment, bundle.v1, config.make_embedder(), config.make_reranker(), config.retrieval
    )
    payload = {
        "degraded": result.degraded,
        "paragraphs": [
            {
                "index": p.index,
                "section_title": p.section_title,
                "text": p.text,
                "score": p.score,
            }
            for p in result.paragraphs
        ],
    }
    text = json.dumps(payload, ensure_ascii=False, indent=2)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)
    return 0


def _collect_requests(args) -> list[GenerationRequest]:
    if args.requests:
        return load_jsonl(args.requests, request_from_record)
    if not args.setting:
        raise RespkitError("provide --requests or --setting with --review")
    if not args.review:
        raise RespkitError("ad-hoc generation needs --review")
    return [
        GenerationRequest(
            setting=args.setting,
            review_segment=args.review,
            author_edits=[AuthorEdit(edit=e) for e in args.edit],
            v1_paragraphs=list(args.v1),
            length_limit=args.limit,
            venue_mode=args.venue,
        )
    ]


def cmd_generate(args) -> int:
    config = _load_cfg(args)
    provider = config.make_generation(_audit_for(args))
    requests = _collect_requests(args)
    results = [generate(req, provider) for req in requests]
    save_jsonl(args.out, [result_to_record(r) for r in results])
    logger.info("wrote %d results to %s", len(results), args.out)
    return 0


def _join_results(requests, results):
    by_key = {(r.pair_id, r.setting): r for r in results}
    joined = []
    for req in requests:
        result = by_key.get((req.pair_id, req.setting))
        if result is not None:
            joined.append((req, result))
    return joined


def cmd_evaluate(args) -> int:
    config = _load_cfg(args)
    audit = _audit_for(args)
    judge = config.make_judge(audit)
    extractor, verifier = config.make_fact_providers(audit)
    requests = load_jsonl(args.requests, request_from_record)
    results = load_jsonl(args.results, result_from_record)
    records = []
    for req, result in _join_results(requests, results):
        report = evaluate_response(req, result, judge, extractor, verifier)
        records.append(report.to_record())
    save_jsonl(args.out, records)
    logger.info("wrote %d eval reports to %s", len(records), args.out)
    return 0


def cmd_refine(args) -> int:
    config = _load_cfg(args)
    provider = config.make_generation(_audit_for(args))
    requests = load_jsonl(args.requests, request_from_record)
    results = load_jsonl(args.results, result_from_record)
    evals = [EvalReport.from_record(r) for r in load_jsonl(args.evals, lambda r: r)]
    reports = {(e.pair_id, e.setting): e for e in evals}
    out_results, out_requests = [], []
    for req, result in _join_results(requests, results):
        report = reports.get((req.pair_id, req.setting))
        if report is None:
            continue
        ref_req = refinement_request(req, result, report)
        refined = generate(ref_req, provider)
        out_requests.append(request_to_record(ref_req))
        out_results.append(result_to_record(refined))
    save_jsonl(args.out, out_results)
    if args.out_requests:
        save_jsonl(args.out_requests, out_requests)
    logger.info("wrote %d refined results to %s", len(out_results), args.out)
    return 0


def cmd_report(args) -> int:
    root = Path(args.inputs)
    files = sorted(root.glob("*.jsonl")) if root.is_dir() else [root]
    reports = []
    for file in files:
        reports.extend(EvalReport.from_record(r) for r in load_jsonl(file, lambda r: r))
    write_report_csv(reports, args.out)
    logger.info("aggregated %d reports into %s", len(reports), args.out)
    return 0


def cmd_stats(args) -> int:
    corpus = load_corpus(args.corpus)
    if args.pairs:
        corpus.pairs = load_jsonl(args.pairs, pair_from_record)
    if args.triplets:
        from .corpus import triplet_from_record

        corpus.triplets = load_jsonl(args.triplets, triplet_from_record)
        for triplet in corpus.triplets:
            corpus.validate_triplet(triplet)
    print(json.dumps(corpus_stats(corpus), indent=2))
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    config = _load_cfg(args)
    app = create_app(config, data_dir=args.data_dir, frontend_dir=args.frontend)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


_HANDLERS = {
    "extract-pairs": cmd_extract_pairs,
    "align-triplets": cmd_align_triplets,
    "retrieve": cmd_retrieve,
    "generate": cmd_generate,
    "evaluate": cmd_evaluate,
    "refine": cmd_refine,
    "report": cmd_report,
    "stats": cmd_stats,
    "serve": cmd_serve,
}


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    if not args.command:
        parser.print_usage(sys.stderr)
        return 2
    try:
        return _HANDLERS[args.command](args)
    except RespkitError as exc:
        payload = {"error": type(exc).__name__, "message": str(exc)}
        field = getattr(exc, "field", None)
        if field:
            payload["field"] = field
        print(json.dumps(payload), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
