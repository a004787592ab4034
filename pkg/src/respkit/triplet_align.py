"""Links sentence-level edits to review-response pairs (two-way CE/AE strategy)."""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .corpus import Corpus, Re3Triplet, ReviewResponsePair, SentenceEdit
from .errors import ProviderError, ValidationError
from .textnorm import bigram_overlap, cosine_similarity_100, partial_ratio

logger = logging.getLogger(__name__)

PROVENANCE_SOURCES = ("CE_sim", "CE_cls", "AE_sim", "AE_cls")


@dataclass
class TripletConfig:
    """Conjunctive similarity thresholds (0-100 scale) for edit alignment."""

    fuzzy_min: float = 60.0
    embed_min: float = 20.0
    bigram_min: float = 10.0
    classifier_enabled: bool = False

    def __post_init__(self):
        for name in ("fuzzy_min", "embed_min", "bigram_min"):
            value = getattr(self, name)
            if not 0 <= value <= 100:
                raise ValidationError(f"{name} must be in [0, 100], got {value}")


def edit_text(edit: SentenceEdit, corpus: Corpus) -> str:
    """Combined edit representation: old sentence, newline, new sentence.

    A missing side (pure addition or deletion) contributes the empty string.
    """
    old = corpus.sentence_text(edit.old_sentence_id) if edit.old_sentence_id else ""
    new = corpus.sentence_text(edit.new_sentence_id) if edit.new_sentence_id else ""
    return f"{old}\n{new}"


def sim_align(s1: str, edit: SentenceEdit, corpus: Corpus, embedder, cfg: TripletConfig) -> bool:
    """True when s1 passes all three similarity conditions against the edit text."""
    return _sim_align_text(s1, edit_text(edit, corpus), embedder, cfg)


def _sim_align_text(s1: str, etext: str, embedder, cfg: TripletConfig) -> bool:
    # conjuncts ordered cheapest first; the rule itself is order-free
    if bigram_overlap(s1, etext) < cfg.bigram_min:
        return False
    if partial_ratio(s1, etext, score_cutoff=cfg.fuzzy_min) < cfg.fuzzy_min:
        return False
    u, v = embedder.embed([s1, etext])
    return cosine_similarity_100(u, v) >= cfg.embed_min


class _EmbedderCache:
    """Per-call memo so repeated texts hit the provider once."""

    def __init__(self, inner):
        self.inner = inner
        self.cache: dict[str, list[float]] = {}

    def embed(self, texts):
        missing = [t for t in texts if t not in self.cache]
        if missing:
            for text, vector in zip(missing, self.inner.embed(missing)):
                self.cache[text] = vector
        return [self.cache[t] for t in texts]


def align_triplets(
    pairs: list[ReviewResponsePair],
    edits: list[SentenceEdit],
    corpus: Corpus,
    embedder,
    ce_classifier=None,
    ae_classifier=None,
    cfg: TripletConfig | None = None,
) -> list[Re3Triplet]:
    """Aggregate all positive CE/AE alignments into triplets.

    Review sentences are tested against every edit (CE side), response
    sentences likewise (AE side); the similarity route always runs and the
    classifier route runs when enabled. Positives are unioned with per-edit
    provenance; pairs that align no edit are omitted. A classifier failure
    downgrades the pair to similarity-only provenance and flags the triplet.
    """
    cfg = cfg or TripletConfig()
    if embedder is None:
        raise ValidationError("triplet alignment requires an embedder")
    embedder = _EmbedderCache(embedder)

    ordered_edits = sorted(edits, key=lambda e: e.edit_id)
    edit_texts = {e.edit_id: edit_text(e, corpus) for e in ordered_edits}

    triplets = []
    for pair in pairs:
        review_sents = [corpus.sentence_text(sid) for sid in pair.review_sentence_ids]
        response_sents = [corpus.sentence_text(sid) for sid in pair.response_sentence_ids]
        provenance: dict[str, set[str]] = {}
        degraded = False

        for edit in ordered_edits:
            etext = edit_texts[edit.edit_id]
            sources = set()
            if any(_sim_align_text(s, etext, embedder, cfg) for s in review_sents):
                sources.add("CE_sim")
            if any(_sim_align_text(s, etext, embedder, cfg) for s in response_sents):
                sources.add("AE_sim")
            if cfg.classifier_enabled:
                try:
                    if ce_classifier is not None and any(
                        ce_classifier.classify(s, etext)["label"] == "positive"
                        for s in review_sents
                    ):
                        sources.add("CE_cls")
                    if ae_classifier is not None and any(
                        ae_classifier.classify(s, etext)["label"] == "positive"
                        for s in response_sents
                    ):
                        sources.add("AE_cls")
                except ProviderError as exc:
                    logger.error("classifier failed for pair %s: %s", pair.pair_id, exc)
                    degraded = True
            if sources:
                provenance[edit.edit_id] = sources

        if provenance:
            aligned = [e for e in ordered_edits if e.edit_id in provenance]
            triplets.append(
                Re3Triplet(pair=pair, aligned_edits=aligned, provenance=provenance, degraded=degraded)
            )
    return triplets
