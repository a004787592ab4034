"""Per-response evaluation reports, the evaluation pipeline, and aggregation."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from statistics import median

from ..errors import UndefinedMetricError, ValidationError
from ..taxonomy import ReviewItem
from .control import LenControl, len_control, match_generated_to_plan, order_fidelity, plan_labels_prf
from .discourse import StanceProfile, stance_profile
from .facts import FactVerdicts, gfp, icr
from .quality import (
    QUALITY_DIMENSIONS,
    AnnotationResult,
    LabeledSpan,
    QualityBlock,
    QualityDimension,
    annotate_response,
    judge_quality,
)


@dataclass
class EvalReport:
    """The full metric bundle for one generated response."""

    pair_id: str | None
    setting: str
    word_count: int
    placeholder_count: int
    quality: QualityBlock
    annotation: AnnotationResult
    len_control: LenControl | None = None
    plan_control: dict | None = None
    gfp: FactVerdicts | None = None
    icr: FactVerdicts | None = None
    stance: StanceProfile | None = None

    def validate(self):
        """Check all report invariants; raises ValidationError on violation."""
        for dim, block in self.quality.dimensions().items():
            if not 1 <= block.score <= 5:
                raise ValidationError(f"{dim} score {block.score} outside 1..5")
            if abs(block.normalized - block.score / 5) > 1e-12:
                raise ValidationError(f"{dim} normalization broken")
        if self.len_control is not None:
            if self.len_control.met != (self.len_control.diff >= 0):
                raise ValidationError("length-control met flag disagrees with diff")
        if self.plan_control is not None:
            for key in ("precision", "recall", "f1", "order_fidelity"):
                value = self.plan_control[key]
                if not 0.0 <= value <= 1.0:
                    raise ValidationError(f"plan {key} outside [0, 1]: {value}")
        for verdicts in (self.gfp, self.icr):
            if verdicts is None or verdicts.empty:
                continue
            total = verdicts.supported + verdicts.unsupported + verdicts.contradicted
            if abs(total - 1.0) > 1e-9:
                raise ValidationError(f"fact verdict fractions sum to {total}")
        if self.stance is not None:
            total = sum(self.stance.proportions.values())
            if abs(total - 1.0) > 1e-9:
                raise ValidationError(f"stance proportions sum to {total}")
            coop_defe_hed = 1.0 - self.stance["Social"] - self.stance["Other"]
            if abs(self.stance.arg_load - coop_defe_hed) > 1e-9:
                raise ValidationError("argumentative load identity broken")

    def to_record(self) -> dict:
        record = {
            "pair_id": self.pair_id,
            "setting": self.setting,
            "word_count": self.word_count,
            "placeholder_count": self.placeholder_count,
            "quality": {
                dim: {
                    "score": block.score,
                    "normalized": block.normalized,
                    "strengths": block.strengths,
                    "weaknesses": block.weaknesses,
                    "suggestions": block.suggestions,
                }
                for dim, block in self.quality.dimensions().items()
            },
            "annotation": {
                "items": [
                    {"id": i.item_id, "type": i.item_type, "span": i.span}
                    for i in self.annotation.items
                ],
                "response_spans": [
                    {"text": s.text, "action": s.action, "item_id": s.item_id}
                    for s in self.annotation.spans
                ],
            },
            "len_control": None,
            "plan_control": self.plan_control,
            "gfp": self.gfp.summary() | {"facts": self.gfp.facts, "verdicts": self.gfp.verdicts}
            if self.gfp
            else None,
            "icr": self.icr.summary() | {"facts": self.icr.facts, "verdicts": self.icr.verdicts}
            if self.icr
            else None,
            "stance": None,
        }
        if self.len_control is not None:
            record["len_control"] = {"diff": self.len_control.diff, "met": self.len_control.met}
        if self.stance is not None:
            record["stance"] = {
                "proportions": self.stance.proportions,
                "arg_load": self.stance.arg_load,
            }
        return record

    @classmethod
    def from_record(cls, record: dict) -> "EvalReport":
        quality = QualityBlock(
            **{
                dim: QualityDimension(
                    score=record["quality"][dim]["score"],
                    strengths=list(record["quality"][dim].get("strengths", [])),
                    weaknesses=list(record["quality"][dim].get("weaknesses", [])),
                    suggestions=list(record["quality"][dim].get("suggestions", [])),
                )
                for dim in QUALITY_DIMENSIONS
            }
        )
        annotation = AnnotationResult(
            items=[
                ReviewItem(item_id=str(e["id"]), item_type=e["type"], span=e["span"])
                for e in record.get("annotation", {}).get("items", [])
            ],
            spans=[
                LabeledSpan(text=e["text"], action=e["action"], item_id=e.get("item_id"))
                for e in record.get("annotation", {}).get("response_spans", [])
            ],
        )

        def verdicts(key):
            block = record.get(key)
            if block is None:
                return None
            return FactVerdicts(facts=list(block["facts"]), verdicts=list(block["verdicts"]))

        len_block = record.get("len_control")
        stance_block = record.get("stance")
        return cls(
            pair_id=record.get("pair_id"),
            setting=record["setting"],
            word_count=record.get("word_count", 0),
            placeholder_count=record.get("placeholder_count", 0),
            quality=quality,
            annotation=annotation,
            len_control=LenControl(**len_block) if len_block else None,
            plan_control=record.get("plan_control"),
            gfp=verdicts("gfp"),
            icr=verdicts("icr"),
            stance=StanceProfile(
                proportions=dict(stance_block["proportions"]),
                arg_load=stance_block["arg_load"],
            )
            if stance_block
            else None,
        )


def evaluate_response(req, result, judge, extractor, verifier) -> EvalReport:
    """Run the full metric suite over one generated response.

    ``req`` is the GenerationRequest that produced ``result``; controllability
    metrics apply only where the request carried the corresponding control.
    """
    annotation = annotate_response(req.review_segment, result.response_text, judge)

    stance = None
    if annotation.spans:
        stance = stance_profile(
            [{"stance": s.stance, "word_count": s.word_count} for s in annotation.spans]
        )

    length = None
    if req.length_limit is not None:
        length = len_control(result.word_count, req.length_limit)

    plan_metrics = None
    if req.plan is not None and not req.plan.is_empty():
        item_order = [i.item_id for i in req.review_items] or list(req.plan.actions_by_item)
        plan_labels = req.plan.flat_labels(item_order)
        generated_labels = [s.action for s in annotation.spans]
        prf = plan_labels_prf(plan_labels, generated_labels)
        matched = match_generated_to_plan(plan_labels, generated_labels)
        plan_metrics = {**prf, "order_fidelity": order_fidelity(matched.m)}

    edit_strings = [e.edit for e in req.author_edits]
    inputs = list(edit_strings)
    inputs.extend(e.paragraph for e in req.author_edits if e.paragraph)
    inputs.extend(req.v1_paragraphs)

    gfp_result = gfp(result.response_text, inputs, extractor, verifier) if inputs else None
    icr_result = None
    if edit_strings:
        try:
            icr_result = icr(edit_strings, result.response_text, extractor, verifier)
        except UndefinedMetricError:
            icr_result = None

    quality = judge_quality(req.review_segment, result.response_text, annotation, judge)

    return EvalReport(
        pair_id=result.pair_id,
        setting=result.setting,
        word_count=result.word_count,
        placeholder_count=len(result.placeholders),
        quality=quality,
        annotation=annotation,
        len_control=length,
        plan_control=plan_metrics,
        gfp=gfp_result,
        icr=icr_result,
        stance=stance,
    )


CSV_COLUMNS = (
    "setting",
    "n",
    "gfp_sup",
    "gfp_unsup",
    "gfp_con",
    "icr_sup",
    "icr_unsup",
    "icr_con",
    "words",
    "pct_met",
    "m_diff",
    "plan_p",
    "plan_r",
    "plan_f1",
    "plan_of",
    "targ",
    "spec",
    "conv",
    "pct_ph",
)


def aggregate_reports(reports: list[EvalReport]) -> list[dict]:
    """Per-setting metric means in the layout of the headline results table."""

    def mean(values):
        values = [v for v in values if v is not None]
        return sum(values) / len(values) if values else None

    rows = []
    for setting in sorted({r.setting for r in reports}):
        group = [r for r in reports if r.setting == setting]
        diffs = [r.len_control.diff for r in group if r.len_control]
        met = [r.len_control.met for r in group if r.len_control]
        rows.append(
            {
                "setting": setting,
                "n": len(group),
                "gfp_sup": mean([r.gfp.supported if r.gfp else None for r in group]),
                "gfp_unsup": mean([r.gfp.unsupported if r.gfp else None for r in group]),
                "gfp_con": mean([r.gfp.contradicted if r.gfp else None for r in group]),
                "icr_sup": mean([r.icr.supported if r.icr else None for r in group]),
                "icr_unsup": mean([r.icr.unsupported if r.icr else None for r in group]),
                "icr_con": mean([r.icr.contradicted if r.icr else None for r in group]),
                "words": mean([r.word_count for r in group]),
                "pct_met": (sum(met) / len(met)) if met else None,
                "m_diff": median(diffs) if diffs else None,
                "plan_p": mean(
                    [r.plan_control["precision"] if r.plan_control else None for r in group]
                ),
                "plan_r": mean(
                    [r.plan_control["recall"] if r.plan_control else None for r in group]
                ),
                "plan_f1": mean([r.plan_control["f1"] if r.plan_control else None for r in group]),
                "plan_of": mean(
                    [r.plan_control["order_fidelity"] if r.plan_control else None for r in group]
                ),
                "targ": mean([r.quality.targeting.normalized for r in group]),
                "spec": mean([r.quality.specificity.normalized for r in group]),
                "conv": mean([r.quality.convincingness.normalized for r in group]),
                "pct_ph": sum(1 for r in group if r.placeholder_count > 0) / len(group),
            }
        )
    return rows


def write_report_csv(reports: list[EvalReport], path):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        for row in aggregate_reports(reports):
            writer.writerow({k: ("" if v is None else v) for k, v in row.items()})
