"""Judge-based response annotation and rubric quality scoring."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .. import prompts
from ..errors import SchemaError
from ..taxonomy import ACTIONS, ITEM_TYPES, ReviewItem, stance_of
from ..textnorm import word_count

QUALITY_DIMENSIONS = ("targeting", "specificity", "convincingness")


@dataclass
class LabeledSpan:
    """A response span labeled with a response action."""

    text: str
    action: str
    item_id: str | None = None

    @property
    def stance(self) -> str:
        return stance_of(self.action)

    @property
    def word_count(self) -> int:
        return word_count(self.text)


@dataclass
class AnnotationResult:
    items: list[ReviewItem]
    spans: list[LabeledSpan]

    def render(self) -> str:
        """Plain-text form used inside the quality judging prompt."""
        lines = [f"#{i.item_id} ({i.item_type}): {i.span}" for i in self.items]
        for span in self.spans:
            target = f"#{span.item_id}" if span.item_id else "unaligned"
            lines.append(f"  [{span.action} -> {target}] {span.text}")
        return "\n".join(lines) if lines else "none"


def parse_json_object(text: str) -> dict:
    """Parse a JSON object out of judge output, tolerating surrounding prose."""
    text = (text or "").strip()
    try:
        obj = json.loads(text)
        if isinstance(obj, dict):
            return obj
    except json.JSONDecodeError:
        pass
    start, end = text.find("{"), text.rfind("}")
    if start != -1 and end > start:
        try:
            obj = json.loads(text[start : end + 1])
            if isinstance(obj, dict):
                return obj
        except json.JSONDecodeError:
            pass
    raise SchemaError("judge output is not a JSON object", raw=text)


def annotate_response(review_segment: str, response: str, judge) -> AnnotationResult:
    """Itemize the review and label response spans with response actions.

    The judge must return the documented JSON schema; unknown item types or
    action labels are rejected. An empty response yields an empty span list.
    """
    prompt = prompts.ANNOTATION_TASK.format(
        actions=", ".join(ACTIONS), review=review_segment, response=response
    )
    raw = judge.complete(prompts.ANNOTATION_SYSTEM, prompt)
    payload = parse_json_object(raw)

    items = []
    for entry in payload.get("items", []):
        item_type = entry.get("type")
        if item_type not in ITEM_TYPES:
            raise SchemaError(f"unknown review item type {item_type!r}", raw=raw)
        items.append(
            ReviewItem(item_id=str(entry.get("id")), item_type=item_type, span=str(entry.get("span", "")))
        )

    spans = []
    if response.strip():
        for entry in payload.get("response_spans", []):
            action = entry.get("action")
            if action not in ACTIONS:
                raise SchemaError(f"unknown response action {action!r}", raw=raw)
            item_id = entry.get("item_id")
            spans.append(
                LabeledSpan(
                    text=str(entry.get("text", "")),
                    action=action,
                    item_id=str(item_id) if item_id is not None else None,
                )
            )
    return AnnotationResult(items=items, spans=spans)


@dataclass
class QualityDimension:
    score: int
    strengths: list[str] = field(default_factory=list)
    weaknesses: list[str] = field(default_factory=list)
    suggestions: list[str] = field(default_factory=list)

    @property
    def normalized(self) -> float:
        return self.score / 5


@dataclass
class QualityBlock:
    targeting: QualityDimension
    specificity: QualityDimension
    convincingness: QualityDimension

    def dimensions(self) -> dict[str, QualityDimension]:
        return {
            "targeting": self.targeting,
            "specificity": self.specificity,
            "convincingness": self.convincingness,
        }


def judge_quality(review_segment: str, response: str, item_alignments, judge) -> QualityBlock:
    """Rubric-grounded 5-point scoring of targeting, specificity, convincingness."""
    rendered = item_alignments.render() if hasattr(item_alignments, "render") else str(item_alignments or "none")
    prompt = prompts.QUALITY_RUBRIC.format(
        review=review_segment, alignments=rendered, response=response
    )
    raw = judge.complete(prompts.QUALITY_SYSTEM, prompt)
    payload = parse_json_object(raw)

    parsed = {}
    for dim in QUALITY_DIMENSIONS:
        block = payload.get(dim)
        if not isinstance(block, dict):
            raise SchemaError(f"missing quality dimension {dim!r}", raw=raw)
        score = block.get("score")
        if not isinstance(score, int) or isinstance(score, bool) or not 1 <= score <= 5:
            raise SchemaError(f"{dim} score {score!r} outside 1..5", raw=raw)
        parsed[dim] = QualityDimension(
            score=score,
            strengths=[str(s) for s in block.get("strengths", [])],
            weaknesses=[str(s) for s in block.get("weaknesses", [])],
            suggestions=[str(s) for s in block.get("suggestions", [])],
        )
    return QualityBlock(**parsed)
