"""Shared fixture builders for corpus documents and generation requests."""

import pytest

from respkit.corpus import Corpus, DocumentGraph, Paragraph, Section, SentenceNode
from respkit.generation import AuthorEdit, GenerationRequest
from respkit.taxonomy import ResponsePlan, ReviewItem


def make_doc(doc_id, kind, paper_id, paragraphs, reviewer_id=None, titles=None):
    """Build a document from a list of paragraphs, each a list of sentence texts.

    Sentence ids are '<doc_id>-s<n>' numbered across the whole document.
    ``titles`` optionally names one section per paragraph; otherwise all
    paragraphs share a single untitled section.
    """
    counter = 0
    sections = []
    if titles is None:
        paras = []
        for sentences in paragraphs:
            nodes = []
            for text in sentences:
                nodes.append(SentenceNode(sent_id=f"{doc_id}-s{counter}", text=text))
                counter += 1
            paras.append(Paragraph(sentences=tuple(nodes)))
        sections.append(Section(title="", paragraphs=tuple(paras)))
    else:
        for title, sentences in zip(titles, paragraphs):
            nodes = []
            for text in sentences:
                nodes.append(SentenceNode(sent_id=f"{doc_id}-s{counter}", text=text))
                counter += 1
            sections.append(Section(title=title, paragraphs=(Paragraph(sentences=tuple(nodes)),)))
    return DocumentGraph(
        doc_id=doc_id, kind=kind, paper_id=paper_id, sections=tuple(sections),
        reviewer_id=reviewer_id,
    )


def make_corpus(*docs):
    corpus = Corpus()
    for doc in docs:
        corpus.add_document(doc)
    return corpus


CANONICAL_REVIEW = (
    "The evaluation is limited to a single dataset. How was the similarity "
    "threshold chosen? Please report runtime numbers for the full pipeline."
)

CANONICAL_ITEMS = [
    ReviewItem(item_id="1", item_type="Criticism", span="The evaluation is limited to a single dataset."),
    ReviewItem(item_id="2", item_type="Question", span="How was the similarity threshold chosen?"),
    ReviewItem(item_id="3", item_type="Request", span="Please report runtime numbers for the full pipeline."),
]

CANONICAL_PLAN = ResponsePlan(
    actions_by_item={
        "1": ["concede criticism", "task has been done"],
        "2": ["answer question"],
        "3": ["task will be done in next version"],
    }
)

CANONICAL_EDITS = [
    AuthorEdit(
        edit="We added experiments on two further datasets.",
        paragraph="The benchmark now covers three datasets in total.",
        section_title="Experiments",
    ),
    AuthorEdit(edit="The threshold was tuned on a held-out pilot set of 20 examples."),
]

CANONICAL_V1 = [
    "Experiments\nWe evaluate on a single benchmark dataset with five baselines.",
    "Method\nSegment pairs are matched with a similarity threshold.",
    "Appendix\nRuntime depends linearly on the number of sentence pairs.",
]


CANONICAL_PRIOR_DRAFT = (
    "Thank you for the careful review. We added experiments on two further "
    "datasets and tuned the threshold on a pilot set. Runtime numbers will "
    "follow in the next version."
)


def canonical_prior_eval():
    """Fixed evaluation of the canonical prior draft; GFP renders as 62%."""
    from respkit.metrics.facts import FactVerdicts
    from respkit.metrics.quality import AnnotationResult, QualityBlock, QualityDimension
    from respkit.metrics.report import EvalReport

    quality = QualityBlock(
        targeting=QualityDimension(
            score=4,
            strengths=["directly answers the dataset criticism (#1)"],
            weaknesses=["the runtime request (#3) is only acknowledged"],
            suggestions=["state where the runtime numbers will appear"],
        ),
        specificity=QualityDimension(
            score=3,
            strengths=["names the number of added datasets"],
            weaknesses=["no exact section or table references"],
            suggestions=[],
        ),
        convincingness=QualityDimension(
            score=3,
            strengths=["commits to concrete revisions"],
            weaknesses=["claims are not yet backed by numbers"],
            suggestions=["quote one headline result from the new experiments"],
        ),
    )
    # 8 of 13 facts supported = 61.5%, rendered as 62%
    gfp = FactVerdicts(
        facts=[f"fact {i}" for i in range(13)],
        verdicts=["supported"] * 8 + ["unsupported"] * 4 + ["contradicted"],
    )
    return EvalReport(
        pair_id="pair-1",
        setting="S6",
        word_count=36,
        placeholder_count=0,
        quality=quality,
        annotation=AnnotationResult(items=[], spans=[]),
        gfp=gfp,
    )


def canonical_request(setting, **overrides):
    """The one fixture used for golden prompt files across all nine settings."""
    base = dict(
        setting=setting,
        review_segment=CANONICAL_REVIEW,
        author_edits=list(CANONICAL_EDITS),
        v1_paragraphs=list(CANONICAL_V1),
        length_limit=150,
        plan=CANONICAL_PLAN,
        review_items=list(CANONICAL_ITEMS),
        venue_mode="conference",
        pair_id="pair-1",
    )
    if setting in ("S8", "S9"):
        base["prior_draft"] = CANONICAL_PRIOR_DRAFT
        base["prior_eval"] = canonical_prior_eval()
    if setting == "S9":
        base["length_limit"] = None
    base.update(overrides)
    return GenerationRequest(**base)


@pytest.fixture
def canonical_review():
    return CANONICAL_REVIEW
