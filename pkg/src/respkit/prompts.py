"""Prompt templates for the nine generation settings and the judge/fact tasks.

Slot values are joined by plain string concatenation, never by re-parsing the
template, so review or edit text containing template-like markers cannot
alter the prompt structure.
"""

from __future__ import annotations

SETTINGS = ("S1", "S2", "S3", "S4", "S5", "S6", "S7", "S8", "S9")

_HEADER = (
    "You are a research assistant helping authors prepare an author response "
    "for a paper under peer review."
)
_RECEIVE = "You will receive:"
_RECV_REVIEW = "  - The reviewer's comment."
_RECV_REVIEW_ITEMS = (
    "  - The reviewer's comment. And extracted items from the review comment, "
    "including questions, criticisms and requests."
)
_RECV_INPUT = "  - The author's additional input regarding the comment."
_TASK_PLAIN = (
    "Your task is to write a specific and convincing response addressing the "
    "reviewer's comment."
)
_TASK_PLANNED = (
    "Your task is to write a clear and convincing response addressing the "
    "reviewer's comment and the items. Make the response coherent, fluent and "
    "human-like, without necessarily listing the items. Write a response "
    "addressing the review comment and the items based on the given response "
    "action plan."
)
_OUTPUT_ONLY = "Output the response only. Do not include any other text."
_REFINE_NOTE = (
    "Note: This is a refinement round to improve the quality of the previous "
    "generated response based on its evaluation results."
)
_REFINE_TASK = (
    "TASK: Please revise the previous response based on the review comment, "
    "the provided inputs and the requirements, as well as the evaluation "
    "results above to improve the directness, specificity, convincingness and "
    "the factuality of the response. Output the revised response only."
)

PLACEHOLDER_INSTRUCTION = (
    "Use placeholders like '[author info: <description>]' if you need extra "
    "information from the author to address the review comment."
)
CONFERENCE_CLARIFICATION = (
    "This author response is prepared during the rebuttal phase, before "
    "submitting any revisions (like in ARR process). You should use the "
    "additional author input to address the review comment if they are "
    "useful, and may outline future planned changes in the final version if "
    "relevant but do not refer to completed revisions."
)


def _bracket_list(items: list[str]) -> str:
    return "[" + "; ".join(items) + "]"


def render_edit(edit: str, paragraph: str | None = None, section_title: str | None = None) -> str:
    """An author edit slot: plain string, or wrapped with its paper location."""
    if paragraph or section_title:
        return f"<{edit} in {paragraph or ''} in Section {section_title or ''}>"
    return edit


def render_items_block(items: list[tuple[str, str, str]], plan: dict[str, list[str]]) -> list[str]:
    """Itemized-review and plan lines; ``items`` holds (id, type, span) tuples."""

    def slots(item_type: str) -> str:
        return _bracket_list(
            [f"#{iid}: {span}" for iid, typ, span in items if typ == item_type]
        )

    def plan_slots(item_type: str) -> str:
        return _bracket_list(
            [
                f"#{iid}: {', '.join(plan[iid])}"
                for iid, typ, _ in items
                if typ == item_type and plan.get(iid)
            ]
        )

    return [
        "    - The items extracted from the review comment are:",
        f"      - questions: {slots('Question')}",
        f"      - criticisms: {slots('Criticism')}",
        f"      - requests: {slots('Request')}",
        "    - The response action plan is:",
        f"      - questions: {plan_slots('Question')}",
        f"      - criticisms: {plan_slots('Criticism')}",
        f"      - requests: {plan_slots('Request')}",
    ]


def render_eval_feedback(quality: dict, gfp_supported: float) -> list[str]:
    """Previous-draft evaluation lines for the refinement settings.

    ``quality`` maps each dimension to {score, strengths, weaknesses,
    suggestions}; empty lists render as "none".
    """

    def listing(values: list[str]) -> str:
        return "; ".join(values) if values else "none"

    lines = [
        "  - The overall response scores (directness, specificity and "
        "convincingness, 5-point scale) and the respective justifications and "
        "improvement suggestions:"
    ]
    for dim in ("targeting", "specificity", "convincingness"):
        block = quality[dim]
        lines.append(f"    {dim}: {block['score']}/5")
        lines.append(f"      strengths(+): {listing(block.get('strengths', []))}")
        lines.append(f"      weaknesses(-): {listing(block.get('weaknesses', []))}")
        lines.append(f"      suggestions: {listing(block.get('suggestions', []))}")
    lines.append(
        f"  - Factuality score: {round(gfp_supported * 100)}% of the atomic facts "
        "in the previous response are supported by the provided inputs."
    )
    return lines


def render_setting(
    setting: str,
    review: str,
    edits: list[str] | None = None,
    v1_paragraphs: list[str] | None = None,
    length_limit: int | None = None,
    items: list[tuple[str, str, str]] | None = None,
    plan: dict[str, list[str]] | None = None,
    prior_draft: str | None = None,
    prior_quality: dict | None = None,
    prior_gfp_supported: float | None = None,
    conference: bool = False,
) -> str:
    """Assemble the full prompt for one setting. Callers validate the inputs."""
    planned = setting in ("S6", "S7", "S8", "S9")
    with_input = setting != "S1"
    with_v1 = setting in ("S4", "S5", "S6", "S7", "S8", "S9")
    with_limit = setting in ("S5", "S6", "S8")
    refined = setting in ("S8", "S9")

    lines = [_HEADER, _RECEIVE]
    lines.append(_RECV_REVIEW_ITEMS if planned else _RECV_REVIEW)
    if with_input:
        lines.append(_RECV_INPUT)
    lines.append(_TASK_PLANNED if planned else _TASK_PLAIN)
    lines.append(f"  - The review comment is: {review}.")
    if planned:
        lines.extend(render_items_block(items or [], plan or {}))
    if with_v1:
        lines.append(
            "  - Here are the top 5 paragraphs retrieved from the original paper: "
            + _bracket_list(v1_paragraphs or [])
        )
    if with_input:
        lines.append("  - Refer to the author input below: " + _bracket_list(edits or []))
    lines.append(_OUTPUT_ONLY)
    if with_limit:
        lines.append(f"Please limit the response to NO MORE than {length_limit} words.")
    if refined:
        lines.append(_REFINE_NOTE)
        lines.append(f"  - The previous response generated is: {prior_draft}.")
        lines.extend(render_eval_feedback(prior_quality or {}, prior_gfp_supported or 0.0))
        lines.append(_REFINE_TASK)
    lines.append(PLACEHOLDER_INSTRUCTION)
    if conference:
        lines.append(CONFERENCE_CLARIFICATION)
    return "\n".join(lines)


# --- judge / fact prompts ----------------------------------------------------

ANNOTATION_SYSTEM = (
    "You analyze peer-review exchanges. Always answer with a single valid "
    "JSON object and nothing else."
)

ANNOTATION_TASK = """Analyze the review segment and the author response below.
1. Itemize the review segment into items of type Question (a request for information that requires an explicit answer), Criticism (a subjective judgement of an aspect of the paper), or Request (a request for change in regards to the paper).
2. Split the response into spans, align each span to the review item it addresses where possible, and label each span with exactly one response action label from this list: {actions}.
Return JSON: {{"items": [{{"id": "<number>", "type": "Question|Criticism|Request", "span": "<review text>"}}], "response_spans": [{{"text": "<response text>", "action": "<label>", "item_id": "<id or null>"}}]}}

Review segment:
{review}

Author response:
{response}"""

QUALITY_SYSTEM = (
    "You are a strict peer-review response evaluator. Always answer with a "
    "single valid JSON object and nothing else."
)

QUALITY_RUBRIC = """Score the author response on three criteria, each on a 5-point scale:
- targeting: how directly the response addresses the reviewer's concerns (5 = every item addressed head-on, 1 = off-topic).
- specificity: how concrete the evidence and details are (5 = precise locations, numbers, or changes, 1 = only generic statements).
- convincingness: how clear and persuasive the justification is (5 = compelling and well-argued, 1 = unsupported assertions).
For each criterion give evidence-based justifications as short bullet points split into strengths and weaknesses, referencing review item ids (#1, #2, ...) when relevant, and one or two actionable suggestions that would plausibly raise the score to 5.
Return JSON: {{"targeting": {{"score": <1-5>, "strengths": [..], "weaknesses": [..], "suggestions": [..]}}, "specificity": {{...}}, "convincingness": {{...}}}}

Review segment:
{review}

Review items and aligned response spans:
{alignments}

Author response:
{response}"""

FACT_EXTRACTION_SYSTEM = (
    "You decompose scientific text into atomic facts. Always answer with a "
    "single valid JSON object and nothing else."
)

FACT_EXTRACTION_TASK = """Decompose the text below into atomic facts: minimal, self-contained, verifiable claims. Keep numbers, names, and qualifiers. Do not add information.
Return JSON: {{"facts": ["<fact>", ...]}}

Text:
{text}"""

FACT_VERIFICATION_SYSTEM = (
    "You verify atomic facts against reference material. Always answer with a "
    "single valid JSON object and nothing else."
)

FACT_VERIFICATION_TASK = """For each fact below, decide whether it is supported, unsupported, or contradicted by the reference material alone.
Return JSON: {{"verdicts": ["supported|unsupported|contradicted", ...]}} with one verdict per fact, in order.

Reference material:
{reference}

Facts:
{facts}"""
