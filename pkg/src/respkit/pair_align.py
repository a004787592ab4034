"""Extracts review-response segment pairs by detecting quoted review spans."""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .corpus import DocumentGraph, ReviewResponsePair
from .errors import ValidationError
from .textnorm import cosine_similarity_100, partial_ratio, strip_quote_markers

logger = logging.getLogger(__name__)


@dataclass
class MatchConfig:
    """Thresholds and segment filters for review-response matching."""

    t0_embed: float = 85.0
    t1_fuzzy: float = 85.0
    min_segment_sentences: int = 2
    max_segment_sentences: int = 15

    def __post_init__(self):
        for name in ("t0_embed", "t1_fuzzy"):
            value = getattr(self, name)
            if not 0 <= value <= 100:
                raise ValidationError(f"{name} must be in [0, 100], got {value}")
        if self.min_segment_sentences > self.max_segment_sentences:
            raise ValidationError("min_segment_sentences exceeds max_segment_sentences")


def _normalize(text: str) -> str:
    return strip_quote_markers(text).casefold()


def sentences_match(s1: str, s2: str, embedder, cfg: MatchConfig) -> bool:
    """True when a review sentence s1 and response sentence s2 match.

    Matches on containment either way, on partial-ratio above the fuzzy
    threshold, or on embedding similarity above the embed threshold. With no
    embedder the similarity condition is skipped (warned once per process).
    """
    n1, n2 = _normalize(s1), _normalize(s2)
    if not n1 or not n2:
        return False
    if n1 in n2 or n2 in n1:
        return True
    if partial_ratio(n1, n2) > cfg.t1_fuzzy:
        return True
    if embedder is None:
        _warn_no_embedder()
        return False
    u, v = embedder.embed([n1, n2])
    return cosine_similarity_100(u, v) > cfg.t0_embed


_warned_no_embedder = False


def _warn_no_embedder():
    global _warned_no_embedder
    if not _warned_no_embedder:
        logger.warning("no embedder configured; skipping the embedding-similarity condition")
        _warned_no_embedder = True


def extract_pairs(
    review: DocumentGraph,
    response: DocumentGraph,
    embedder=None,
    cfg: MatchConfig | None = None,
) -> list[ReviewResponsePair]:
    """Align quoted review spans in a response to the segments that follow them.

    Every (review sentence, response sentence) pair is matched; maximal
    contiguous runs of matched response sentences become quoted spans, each
    resolved to the review span with the longest diagonal match run (earliest
    review position on ties). The response sentences between one quoted span
    and the next (or the document end) form the segment answering the span;
    segments outside the configured 2..15 sentence window are dropped.
    """
    cfg = cfg or MatchConfig()
    review_sents = review.sentences()
    response_sents = response.sentences()
    if not review_sents or not response_sents:
        return []

    matches = _match_sets(review_sents, response_sents, embedder, cfg)

    # Maximal contiguous runs of matched response sentences.
    runs: list[tuple[int, int]] = []
    j = 0
    while j < len(response_sents):
        if matches[j]:
            start = j
            while j + 1 < len(response_sents) and matches[j + 1]:
                j += 1
            runs.append((start, j))
        j += 1

    pairs = []
    for k, (start, end) in enumerate(runs):
        seg_start = end + 1
        seg_end = runs[k + 1][0] if k + 1 < len(runs) else len(response_sents)
        seg = response_sents[seg_start:seg_end]
        if not cfg.min_segment_sentences <= len(seg) <= cfg.max_segment_sentences:
            continue
        ri, rlen = _best_review_run(matches, start, end)
        pairs.append(
            ReviewResponsePair(
                pair_id=f"{response.doc_id}:p{len(pairs) + 1}",
                paper_id=response.paper_id,
                reviewer_id=response.reviewer_id or review.reviewer_id,
                review_doc_id=review.doc_id,
                response_doc_id=response.doc_id,
                review_sentence_ids=[s.sent_id for s in review_sents[ri : ri + rlen]],
                response_sentence_ids=[s.sent_id for s in seg],
            )
        )
    return pairs


def _match_sets(review_sents, response_sents, embedder, cfg) -> list[set[int]]:
    """For each response sentence, the set of matching review sentence indices."""
    review_norm = [_normalize(s.text) for s in review_sents]
    response_norm = [_normalize(s.text) for s in response_sents]
    vectors = None
    if embedder is not None:
        all_vecs = embedder.embed(review_norm + response_norm)
        vectors = (all_vecs[: len(review_norm)], all_vecs[len(review_norm) :])
    else:
        _warn_no_embedder()

    matches: list[set[int]] = []
    for j, n2 in enumerate(response_norm):
        hit = set()
        for i, n1 in enumerate(review_norm):
            if not n1 or not n2:
                continue
            if n1 in n2 or n2 in n1:
                hit.add(i)
            elif partial_ratio(n1, n2) > cfg.t1_fuzzy:
                hit.add(i)
            elif vectors is not None and (
                cosine_similarity_100(vectors[0][i], vectors[1][j]) > cfg.t0_embed
            ):
                hit.add(i)
        matches.append(hit)
    return matches


def _best_review_run(matches: list[set[int]], start: int, end: int) -> tuple[int, int]:
    """Longest diagonal match run inside a quoted response run.

    Returns (review start index, run length); ties prefer the earliest review
    position, then the earliest response position.
    """
    best = (0, 0)  # (length, review start) under final tie rules
    best_key = None
    for j in range(start, end + 1):
        for i in sorted(matches[j]):
            length = 0
            while j + length <= end and (i + length) in matches[j + length]:
                length += 1
            key = (-length, i, j)
            if best_key is None or key < best_key:
                best_key = key
                best = (i, length)
    return best
