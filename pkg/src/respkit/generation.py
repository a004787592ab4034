"""Generation requests, prompt assembly, provider calls, and refinement."""

from __future__ import annotations

import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

from . import prompts
from .errors import RequestValidationError
from .taxonomy import ResponsePlan, ReviewItem
from .textnorm import word_count

VENUE_MODES = ("conference", "journal")

PLACEHOLDER_RE = re.compile(r"\[author info:[^\]]*\]", re.IGNORECASE)


def default_length_limit(human_response_word_count: int) -> int:
    """Simulated author word limit: human response length plus 50."""
    if human_response_word_count < 0:
        raise RequestValidationError("word count must be non-negative")
    return human_response_word_count + 50


@dataclass
class AuthorEdit:
    """One author input: the edit string, optionally with its paper location."""

    edit: str
    paragraph: str | None = None
    section_title: str | None = None


@dataclass
class GenerationRequest:
    setting: str
    review_segment: str
    author_edits: list[AuthorEdit] = field(default_factory=list)
    v1_paragraphs: list[str] = field(default_factory=list)
    length_limit: int | None = None
    plan: ResponsePlan | None = None
    review_items: list[ReviewItem] = field(default_factory=list)
    prior_draft: str | None = None
    prior_eval: object | None = None  # EvalReport for S8/S9
    venue_mode: str = "journal"
    pair_id: str | None = None


@dataclass
class GenerationResult:
    response_text: str
    placeholders: list[str]
    word_count: int
    setting: str
    pair_id: str | None = None
    audit_id: str | None = None


def validate_request(req: GenerationRequest):
    """Enforce the per-setting input requirements."""
    if req.setting not in prompts.SETTINGS:
        raise RequestValidationError(f"unknown setting {req.setting!r}", field="setting")
    if req.venue_mode not in VENUE_MODES:
        raise RequestValidationError(f"unknown venue_mode {req.venue_mode!r}", field="venue_mode")
    if not req.review_segment or not req.review_segment.strip():
        raise RequestValidationError("review_segment is required", field="review_segment")
    s = req.setting

    def need(condition, field_name):
        if not condition:
            raise RequestValidationError(
                f"setting {s} requires {field_name}", field=field_name
            )

    if s in ("S2", "S3", "S4", "S5", "S6", "S7", "S8", "S9"):
        need(bool(req.author_edits), "author_edits")
    if s in ("S4", "S5", "S6", "S7", "S8", "S9"):
        need(bool(req.v1_paragraphs), "v1_paragraphs")
    if s in ("S5", "S6", "S8"):
        need(req.length_limit is not None, "length_limit")
    if s in ("S6", "S7", "S8", "S9"):
        need(req.plan is not None, "plan")
        need(bool(req.review_items), "review_items")
    if s in ("S8", "S9"):
        need(req.prior_draft is not None, "prior_draft")
        need(req.prior_eval is not None, "prior_eval")


def build_prompt(req: GenerationRequest) -> str:
    """Render the request into its setting's prompt."""
    validate_request(req)
    if req.setting == "S2":
        edit_slots = [e.edit for e in req.author_edits]
    else:
        edit_slots = [
            prompts.render_edit(e.edit, e.paragraph, e.section_title) for e in req.author_edits
        ]

    items = [(i.item_id, i.item_type, i.span) for i in req.review_items]
    plan = dict(req.plan.actions_by_item) if req.plan is not None else {}

    prior_quality = None
    prior_gfp = None
    if req.setting in ("S8", "S9"):
        prior_quality, prior_gfp = _eval_prompt_fields(req.prior_eval)

    return prompts.render_setting(
        req.setting,
        review=req.review_segment,
        edits=edit_slots,
        v1_paragraphs=list(req.v1_paragraphs),
        length_limit=req.length_limit,
        items=items,
        plan=plan,
        prior_draft=req.prior_draft,
        prior_quality=prior_quality,
        prior_gfp_supported=prior_gfp,
        conference=req.venue_mode == "conference",
    )


def _eval_prompt_fields(report) -> tuple[dict, float]:
    quality = {
        dim: {
            "score": block.score,
            "strengths": list(block.strengths),
            "weaknesses": list(block.weaknesses),
            "suggestions": list(block.suggestions),
        }
        for dim, block in report.quality.dimensions().items()
    }
    gfp = report.gfp.supported if report.gfp is not None else 0.0
    return quality, gfp


def extract_placeholders(text: str) -> list[str]:
    """All '[author info: ...]' spans, verbatim."""
    return PLACEHOLDER_RE.findall(text)


def generate(req: GenerationRequest, provider) -> GenerationResult:
    """Render the prompt, call the provider, and capture the result."""
    prompt = build_prompt(req)
    if hasattr(provider, "call_with_audit"):
        text, audit_id = provider.call_with_audit(None, prompt)
    else:
        text, audit_id = provider.complete(None, prompt), None
    return GenerationResult(
        response_text=text,
        placeholders=extract_placeholders(text),
        word_count=word_count(text),
        setting=req.setting,
        pair_id=req.pair_id,
        audit_id=audit_id,
    )


def refinement_request(base: GenerationRequest, prior: GenerationResult, report) -> GenerationRequest:
    """Derive the refinement request for a draft: S6-style inputs become S8, plan-only S9."""
    setting = "S8" if base.length_limit is not None else "S9"
    return replace(
        base,
        setting=setting,
        prior_draft=prior.response_text,
        prior_eval=report,
    )


def refine(
    prior: GenerationResult,
    report,
    req: GenerationRequest,
    provider,
    rounds: int = 1,
) -> GenerationResult:
    """Run up to ``rounds`` refinement passes over a draft with its evaluation.

    Stops early when a pass returns the draft unchanged. Every pass reuses the
    same evaluation; re-evaluating between rounds is the caller's job.
    """
    result = prior
    for _ in range(rounds):
        ref_req = refinement_request(req, result, report)
        new_result = generate(ref_req, provider)
        if new_result.response_text == result.response_text:
            return new_result
        result = new_result
    return result


def generate_batch(
    requests: list[GenerationRequest], provider, max_workers: int = 4
) -> dict[tuple[str | None, str], GenerationResult]:
    """Generate many requests with bounded concurrency, keyed by (pair_id, setting)."""
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        results = list(pool.map(lambda r: generate(r, provider), requests))
    return {(res.pair_id, res.setting): res for res in results}


def percent_with_placeholders(results: list[GenerationResult]) -> float:
    """Share of results containing at least one author-info placeholder."""
    if not results:
        return 0.0
    return sum(1 for r in results if r.placeholders) / len(results)


# --- JSONL interchange -------------------------------------------------------


def request_to_record(req: GenerationRequest) -> dict:
    record = {
        "setting": req.setting,
        "review_segment": req.review_segment,
        "author_edits": [
            {"edit": e.edit, "paragraph": e.paragraph, "section_title": e.section_title}
            for e in req.author_edits
        ],
        "v1_paragraphs": list(req.v1_paragraphs),
        "length_limit": req.length_limit,
        "plan": dict(req.plan.actions_by_item) if req.plan is not None else None,
        "review_items": [
            {"id": i.item_id, "type": i.item_type, "span": i.span} for i in req.review_items
        ],
        "venue_mode": req.venue_mode,
        "pair_id": req.pair_id,
        "prior_draft": req.prior_draft,
        "prior_eval": req.prior_eval.to_record() if req.prior_eval is not None else None,
    }
    return record


def request_from_record(record: dict) -> GenerationRequest:
    from .metrics.report import EvalReport

    plan = record.get("plan")
    prior_eval = record.get("prior_eval")
    return GenerationRequest(
        setting=record["setting"],
        review_segment=record["review_segment"],
        author_edits=[
            AuthorEdit(
                edit=e["edit"],
                paragraph=e.get("paragraph"),
                section_title=e.get("section_title"),
            )
            for e in record.get("author_edits", [])
        ],
        v1_paragraphs=list(record.get("v1_paragraphs", [])),
        length_limit=record.get("length_limit"),
        plan=ResponsePlan(actions_by_item={k: list(v) for k, v in plan.items()})
        if plan is not None
        else None,
        review_items=[
            ReviewItem(item_id=str(i["id"]), item_type=i["type"], span=i["span"])
            for i in record.get("review_items", [])
        ],
        venue_mode=record.get("venue_mode", "journal"),
        pair_id=record.get("pair_id"),
        prior_draft=record.get("prior_draft"),
        prior_eval=EvalReport.from_record(prior_eval) if prior_eval is not None else None,
    )


def result_to_record(result: GenerationResult) -> dict:
    return {
        "response_text": result.response_text,
        "placeholders": list(result.placeholders),
        "word_count": result.word_count,
        "setting": result.setting,
        "pair_id": result.pair_id,
        "audit_id": result.audit_id,
    }


def result_from_record(record: dict) -> GenerationResult:
    return GenerationResult(
        response_text=record["response_text"],
        placeholders=list(record.get("placeholders", [])),
        word_count=record.get("word_count", word_count(record["response_text"])),
        setting=record["setting"],
        pair_id=record.get("pair_id"),
        audit_id=record.get("audit_id"),
    )
