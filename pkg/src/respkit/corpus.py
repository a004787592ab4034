"""Domain types for paper/review/response corpora and the JSONL interchange format.

A corpus directory holds UTF-8 line-delimited JSON. Document records carry
``kind``, ``paper_id``, ``doc_id`` and nested ``sections[].paragraphs[].sentences[]``
where each sentence is ``{id, text}``. Edit records carry
``{old_id|null, new_id|null, action, intent}`` and are matched to papers by
resolving their sentence ids.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ParseError, ValidationError

logger = logging.getLogger(__name__)

DOCUMENT_KINDS = ("paper_v1", "paper_v2", "review", "response")

# Structural edit actions; anything else passes through with a warning.
EDIT_ACTIONS = ("add", "delete", "modify")


@dataclass(frozen=True)
class SentenceNode:
    sent_id: str
    text: str


@dataclass(frozen=True)
class Paragraph:
    sentences: tuple[SentenceNode, ...]


@dataclass(frozen=True)
class Section:
    title: str
    paragraphs: tuple[Paragraph, ...]


@dataclass(frozen=True)
class DocumentGraph:
    """One document as ordered sections, paragraphs, and sentence nodes."""

    doc_id: str
    kind: str
    paper_id: str
    sections: tuple[Section, ...]
    reviewer_id: str | None = None

    def __post_init__(self):
        if self.kind not in DOCUMENT_KINDS:
            raise ValidationError(f"document {self.doc_id}: unknown kind {self.kind!r}")

    def sentences(self) -> list[SentenceNode]:
        """All sentence nodes in document order."""
        return [
            sent
            for section in self.sections
            for paragraph in section.paragraphs
            for sent in paragraph.sentences
        ]

    def paragraphs_with_titles(self) -> list[tuple[str, str]]:
        """(section title, paragraph text) for every paragraph, in order."""
        out = []
        for section in self.sections:
            for paragraph in section.paragraphs:
                text = " ".join(s.text for s in paragraph.sentences)
                out.append((section.title, text))
        return out


@dataclass(frozen=True)
class SentenceEdit:
    """An aligned (old, new) sentence pair across paper versions."""

    old_sentence_id: str | None
    new_sentence_id: str | None
    action: str
    intent: str

    def __post_init__(self):
        if self.old_sentence_id is None and self.new_sentence_id is None:
            raise ValidationError("edit needs at least one of old_id/new_id")

    @property
    def edit_id(self) -> str:
        return f"{self.old_sentence_id or '-'}=>{self.new_sentence_id or '-'}"


@dataclass
class ReviewResponsePair:
    """A quoted review span aligned to the response segment that follows it."""

    pair_id: str
    paper_id: str
    reviewer_id: str | None
    review_doc_id: str
    response_doc_id: str
    review_sentence_ids: list[str]
    response_sentence_ids: list[str]

    def __post_init__(self):
        if not self.review_sentence_ids:
            raise ValidationError(f"pair {self.pair_id}: empty review span")
        n = len(self.response_sentence_ids)
        if not 2 <= n <= 15:
            raise ValidationError(
                f"pair {self.pair_id}: response segment has {n} sentences, expected 2..15"
            )


@dataclass
class Re3Triplet:
    """A pair plus the sentence edits aligned to it, with per-edit provenance."""

    pair: ReviewResponsePair
    aligned_edits: list[SentenceEdit]
    provenance: dict[str, set[str]] = field(default_factory=dict)
    degraded: bool = False

    def __post_init__(self):
        if not self.aligned_edits:
            raise ValidationError(f"triplet for {self.pair.pair_id}: no aligned edits")
        for edit in self.aligned_edits:
            if not self.provenance.get(edit.edit_id):
                raise ValidationError(
                    f"triplet for {self.pair.pair_id}: edit {edit.edit_id} lacks provenance"
                )


@dataclass
class PaperBundle:
    """All documents and edits grouped under one paper id."""

    paper_id: str
    documents: list[DocumentGraph] = field(default_factory=list)
    edits: list[SentenceEdit] = field(default_factory=list)

    def by_kind(self, kind: str) -> list[DocumentGraph]:
        return [d for d in self.documents if d.kind == kind]

    @property
    def v1(self) -> DocumentGraph | None:
        docs = self.by_kind("paper_v1")
        return docs[0] if docs else None

    @property
    def v2(self) -> DocumentGraph | None:
        docs = self.by_kind("paper_v2")
        return docs[0] if docs else None

    @property
    def reviews(self) -> list[DocumentGraph]:
        return self.by_kind("review")

    @property
    def responses(self) -> list[DocumentGraph]:
        return self.by_kind("response")


class Corpus:
    """Immutable bundle of papers plus computed pairs/triplets."""

    def __init__(self):
        self.bundles: dict[str, PaperBundle] = {}
        self.sentence_index: dict[str, tuple[DocumentGraph, SentenceNode]] = {}
        self.pairs: list[ReviewResponsePair] = []
        self.triplets: list[Re3Triplet] = []

    def add_document(self, doc: DocumentGraph):
        bundle = self.bundles.setdefault(doc.paper_id, PaperBundle(doc.paper_id))
        bundle.documents.append(doc)
        for sent in doc.sentences():
            if sent.sent_id in self.sentence_index:
                raise ValidationError(f"duplicate sentence id: {sent.sent_id}")
            self.sentence_index[sent.sent_id] = (doc, sent)

    def add_edit(self, edit: SentenceEdit):
        paper_ids = set()
        for sid in (edit.old_sentence_id, edit.new_sentence_id):
            if sid is None:
                continue
            entry = self.sentence_index.get(sid)
            if entry is None:
                raise ValidationError(f"edit references missing sentence id: {sid}")
            paper_ids.add(entry[0].paper_id)
        if len(paper_ids) != 1:
            raise ValidationError(
                f"edit {edit.edit_id} spans papers {sorted(paper_ids)}"
            )
        self.bundles[paper_ids.pop()].edits.append(edit)

    def sentence_text(self, sent_id: str) -> str:
        entry = self.sentence_index.get(sent_id)
        if entry is None:
            raise ValidationError(f"unknown sentence id: {sent_id}")
        return entry[1].text

    def document(self, doc_id: str) -> DocumentGraph:
        for bundle in self.bundles.values():
            for doc in bundle.documents:
                if doc.doc_id == doc_id:
                    return doc
        raise ValidationError(f"unknown document id: {doc_id}")

    def validate_pair(self, pair: ReviewResponsePair):
        """Check that a pair's sentence refs resolve and are contiguous."""
        review = self.document(pair.review_doc_id)
        response = self.document(pair.response_doc_id)
        _check_contiguous(pair.review_sentence_ids, review, pair.pair_id, "review")
        _check_contiguous(pair.response_sentence_ids, response, pair.pair_id, "response")

    def validate_triplet(self, triplet: Re3Triplet):
        """Check that a triplet's pair and edits resolve to loaded documents."""
        self.validate_pair(triplet.pair)
        for edit in triplet.aligned_edits:
            for sid in (edit.old_sentence_id, edit.new_sentence_id):
                if sid is not None and sid not in self.sentence_index:
                    raise ValidationError(
                        f"triplet for {triplet.pair.pair_id}: edit ref {sid} unresolved"
                    )

    def all_edits(self) -> list[SentenceEdit]:
        return [e for bundle in self.bundles.values() for e in bundle.edits]


def _check_contiguous(sent_ids, doc, pair_id, side):
    order = {s.sent_id: i for i, s in enumerate(doc.sentences())}
    try:
        positions = [order[sid] for sid in sent_ids]
    except KeyError as exc:
        raise ValidationError(f"pair {pair_id}: {side} ref {exc.args[0]} not in {doc.doc_id}")
    if positions != list(range(positions[0], positions[0] + len(positions))):
        raise ValidationError(f"pair {pair_id}: {side} span is not contiguous")


def document_from_text(
    doc_id: str,
    kind: str,
    paper_id: str,
    paragraphs: list[str],
    titles: list[str] | None = None,
    reviewer_id: str | None = None,
    segmenter=None,
) -> DocumentGraph:
    """Build a document from raw paragraph texts.

    ``segmenter`` maps text to sentences; the bundled rule-based splitter is
    used when none is given. Sentence ids are '<doc_id>-s<n>'.
    """
    from .textnorm import segment_sentences

    segmenter = segmenter or segment_sentences
    counter = 0
    sections = []
    titles = titles or [""] * len(paragraphs)
    for title, text in zip(titles, paragraphs):
        nodes = []
        for sentence in segmenter(text):
            nodes.append(SentenceNode(sent_id=f"{doc_id}-s{counter}", text=sentence))
            counter += 1
        sections.append(Section(title=title, paragraphs=(Paragraph(sentences=tuple(nodes)),)))
    return DocumentGraph(
        doc_id=doc_id, kind=kind, paper_id=paper_id,
        sections=tuple(sections), reviewer_id=reviewer_id,
    )


# --- JSONL parsing ---------------------------------------------------------


def load_corpus(path) -> Corpus:
    """Load all JSONL files under ``path`` (or a single file) into a corpus."""
    path = Path(path)
    files = sorted(path.glob("*.jsonl")) if path.is_dir() else [path]
    corpus = Corpus()
    deferred_edits: list[SentenceEdit] = []
    for file in files:
        for line_no, line in enumerate(file.read_text(encoding="utf-8").splitlines(), 1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON: {exc.msg}", path=str(file), line_no=line_no)
            if not isinstance(record, dict):
                raise ParseError("record is not an object", path=str(file), line_no=line_no)
            try:
                if "kind" in record:
                    corpus.add_document(document_from_record(record))
                elif "action" in record or "intent" in record:
                    deferred_edits.append(edit_from_record(record))
                else:
                    raise ParseError(
                        "record is neither a document (no 'kind') nor an edit",
                        path=str(file),
                        line_no=line_no,
                    )
            except ValidationError:
                raise
            except (KeyError, TypeError) as exc:
                raise ParseError(f"malformed record: {exc}", path=str(file), line_no=line_no)
    # Edits resolve against sentence ids, so attach them after all documents.
    for edit in deferred_edits:
        corpus.add_edit(edit)
    return corpus


def document_from_record(record: dict) -> DocumentGraph:
    sections = tuple(
        Section(
            title=str(sec.get("title", "")),
            paragraphs=tuple(
                Paragraph(
                    sentences=tuple(
                        SentenceNode(sent_id=str(s["id"]), text=str(s["text"]))
                        for s in para["sentences"]
                    )
                )
                for para in sec["paragraphs"]
            ),
        )
        for sec in record["sections"]
    )
    return DocumentGraph(
        doc_id=str(record["doc_id"]),
        kind=str(record["kind"]),
        paper_id=str(record["paper_id"]),
        sections=sections,
        reviewer_id=record.get("reviewer_id"),
    )


def edit_from_record(record: dict) -> SentenceEdit:
    action = str(record.get("action", ""))
    if action and action not in EDIT_ACTIONS:
        logger.warning("unknown edit action %r; passing through", action)
    return SentenceEdit(
        old_sentence_id=record.get("old_id"),
        new_sentence_id=record.get("new_id"),
        action=action,
        intent=str(record.get("intent", "")),
    )


def document_to_record(doc: DocumentGraph) -> dict:
    record = {
        "doc_id": doc.doc_id,
        "kind": doc.kind,
        "paper_id": doc.paper_id,
        "sections": [
            {
                "title": sec.title,
                "paragraphs": [
                    {"sentences": [{"id": s.sent_id, "text": s.text} for s in para.sentences]}
                    for para in sec.paragraphs
                ],
            }
            for sec in doc.sections
        ],
    }
    if doc.reviewer_id is not None:
        record["reviewer_id"] = doc.reviewer_id
    return record


def edit_to_record(edit: SentenceEdit) -> dict:
    return {
        "old_id": edit.old_sentence_id,
        "new_id": edit.new_sentence_id,
        "action": edit.action,
        "intent": edit.intent,
    }


def serialize_corpus(corpus: Corpus) -> str:
    """Canonical JSONL text: documents then edits, both in sorted order."""
    lines = []
    docs = sorted(
        (doc for bundle in corpus.bundles.values() for doc in bundle.documents),
        key=lambda d: (d.paper_id, d.doc_id),
    )
    for doc in docs:
        lines.append(_dumps(document_to_record(doc)))
    edits = sorted(corpus.all_edits(), key=lambda e: e.edit_id)
    for edit in edits:
        lines.append(_dumps(edit_to_record(edit)))
    return "\n".join(lines) + ("\n" if lines else "")


def save_corpus(corpus: Corpus, path):
    Path(path).write_text(serialize_corpus(corpus), encoding="utf-8")


def _dumps(obj) -> str:
    return json.dumps(obj, ensure_ascii=False, sort_keys=True, separators=(",", ":"))


# --- pairs / triplets interchange ------------------------------------------


def pair_to_record(pair: ReviewResponsePair) -> dict:
    return {
        "pair_id": pair.pair_id,
        "paper_id": pair.paper_id,
        "reviewer_id": pair.reviewer_id,
        "review_doc_id": pair.review_doc_id,
        "response_doc_id": pair.response_doc_id,
        "review_sentences": list(pair.review_sentence_ids),
        "response_sentences": list(pair.response_sentence_ids),
    }


def pair_from_record(record: dict) -> ReviewResponsePair:
    return ReviewResponsePair(
        pair_id=str(record["pair_id"]),
        paper_id=str(record["paper_id"]),
        reviewer_id=record.get("reviewer_id"),
        review_doc_id=str(record["review_doc_id"]),
        response_doc_id=str(record["response_doc_id"]),
        review_sentence_ids=[str(s) for s in record["review_sentences"]],
        response_sentence_ids=[str(s) for s in record["response_sentences"]],
    )


def triplet_to_record(triplet: Re3Triplet) -> dict:
    return {
        "pair": pair_to_record(triplet.pair),
        "aligned_edits": [edit_to_record(e) for e in triplet.aligned_edits],
        "provenance": {k: sorted(v) for k, v in triplet.provenance.items()},
        "degraded": triplet.degraded,
    }


def triplet_from_record(record: dict) -> Re3Triplet:
    return Re3Triplet(
        pair=pair_from_record(record["pair"]),
        aligned_edits=[edit_from_record(e) for e in record["aligned_edits"]],
        provenance={k: set(v) for k, v in record["provenance"].items()},
        degraded=bool(record.get("degraded", False)),
    )


def load_jsonl(path, from_record):
    out = []
    path = Path(path)
    for line_no, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        try:
            out.append(from_record(json.loads(line)))
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", path=str(path), line_no=line_no)
        except (KeyError, TypeError) as exc:
            raise ParseError(f"malformed record: {exc}", path=str(path), line_no=line_no)
    return out


def save_jsonl(path, records: list[dict]):
    text = "".join(_dumps(r) + "\n" for r in records)
    Path(path).write_text(text, encoding="utf-8")


# --- statistics -------------------------------------------------------------


def corpus_stats(corpus: Corpus) -> dict:
    """Counts of papers, pairs, edits, edits linked into triplets, and triplets."""
    linked = {e.edit_id for t in corpus.triplets for e in t.aligned_edits}
    return {
        "papers": len(corpus.bundles),
        "pairs": len(corpus.pairs),
        "edits": len(corpus.all_edits()),
        "linked_edits": len(linked),
        "triplets": len(corpus.triplets),
    }
