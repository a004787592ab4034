"""Hybrid BM25 + dense paragraph retrieval with reciprocal rank fusion."""

from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass

from .corpus import DocumentGraph
from .errors import ProviderError, ValidationError
from .textnorm import cosine_similarity_100, word_tokens

logger = logging.getLogger(__name__)


@dataclass
class RetrievalConfig:
    k_final: int = 5
    rrf_k: int = 60
    bm25_k1: float = 1.2
    bm25_b: float = 0.75
    candidate_pool: int = 50

    def __post_init__(self):
        if self.k_final > self.candidate_pool:
            raise ValidationError("k_final must not exceed candidate_pool")
        for name in ("k_final", "rrf_k", "bm25_k1", "bm25_b", "candidate_pool"):
            if getattr(self, name) <= 0:
                raise ValidationError(f"{name} must be positive")


class Bm25Index:
    """Okapi BM25 over tokenized paragraphs.

    idf(t) = ln(1 + (N - df + 0.5) / (df + 0.5)), which keeps scores
    non-negative for terms present in most documents.
    """

    def __init__(self, texts: list[str], k1: float = 1.2, b: float = 0.75):
        self.k1 = k1
        self.b = b
        self.docs = [word_tokens(t) for t in texts]
        self.doc_lens = [len(d) for d in self.docs]
        self.n_docs = len(self.docs)
        self.avgdl = sum(self.doc_lens) / self.n_docs if self.n_docs else 0.0
        self.term_freqs = [Counter(d) for d in self.docs]
        df = Counter()
        for tf in self.term_freqs:
            df.update(tf.keys())
        self.idf = {
            t: math.log(1.0 + (self.n_docs - n + 0.5) / (n + 0.5)) for t, n in df.items()
        }

    def scores(self, query: str) -> list[float]:
        tokens = word_tokens(query)
        out = []
        for tf, dl in zip(self.term_freqs, self.doc_lens):
            norm = self.k1 * (1.0 - self.b + self.b * dl / self.avgdl) if self.avgdl else 0.0
            score = 0.0
            for t in tokens:
                f = tf.get(t)
                if not f:
                    continue
                score += self.idf[t] * f * (self.k1 + 1.0) / (f + norm)
            out.append(score)
        return out


def bm25_rank(
    query: str, paragraphs: list[str], k1: float = 1.2, b: float = 0.75
) -> list[tuple[int, float]]:
    """(paragraph index, BM25 score) in descending score order, ties by position."""
    if not paragraphs:
        return []
    index = Bm25Index(paragraphs, k1=k1, b=b)
    scores = index.scores(query)
    order = sorted(range(len(paragraphs)), key=lambda i: (-scores[i], i))
    return [(i, scores[i]) for i in order]


def rrf_fuse(rankings: list[list[int]], rrf_k: int = 60) -> list[tuple[int, float]]:
    """Fuse ranked lists of paragraph indices by reciprocal rank.

    score(d) = sum over rankings containing d of 1 / (rrf_k + rank_d) with
    1-based ranks; descending score, ties by paragraph position.
    """
    scores: dict[int, float] = {}
    for ranking in rankings:
        for rank, doc in enumerate(ranking, start=1):
            scores[doc] = scores.get(doc, 0.0) + 1.0 / (rrf_k + rank)
    order = sorted(scores, key=lambda d: (-scores[d], d))
    return [(d, scores[d]) for d in order]


@dataclass
class RetrievedParagraph:
    index: int
    section_title: str
    text: str
    score: float

    def prefixed(self) -> str:
        """Paragraph text with its section title prepended."""
        return f"{self.section_title}\n{self.text}" if self.section_title else self.text


@dataclass
class RetrievalResult:
    paragraphs: list[RetrievedParagraph]
    degraded: bool = False


def retrieve_v1(
    review_segment: str,
    v1: DocumentGraph,
    embedder=None,
    reranker=None,
    cfg: RetrievalConfig | None = None,
) -> RetrievalResult:
    """Top-k original-submission paragraphs for a review segment.

    BM25 and dense rankings over title-prefixed paragraphs are fused with RRF;
    the top candidates go to the reranker for the final order. Without a
    reranker (or when it fails, which flags the result degraded) the fused
    order is final.
    """
    cfg = cfg or RetrievalConfig()
    entries = v1.paragraphs_with_titles()
    if not entries:
        raise ValidationError(f"document {v1.doc_id} has no paragraphs")
    prefixed = [f"{title}\n{text}" if title else text for title, text in entries]

    rankings = [[i for i, _ in bm25_rank(review_segment, prefixed, cfg.bm25_k1, cfg.bm25_b)]]
    if embedder is not None:
        vectors = embedder.embed([review_segment] + prefixed)
        sims = [cosine_similarity_100(vectors[0], v) for v in vectors[1:]]
        rankings.append(sorted(range(len(prefixed)), key=lambda i: (-sims[i], i)))

    fused = rrf_fuse(rankings, cfg.rrf_k)
    pool = fused[: cfg.candidate_pool]

    degraded = False
    if reranker is not None and pool:
        try:
            scores = reranker.rerank(review_segment, [prefixed[i] for i, _ in pool])
            pool = sorted(
                ((i, s) for (i, _), s in zip(pool, scores)),
                key=lambda item: (-item[1], item[0]),
            )
        except ProviderError as exc:
            logger.warning("reranker failed, falling back to fused order: %s", exc)
            degraded = True

    top = pool[: cfg.k_final]
    paragraphs = [
        RetrievedParagraph(index=i, section_title=entries[i][0], text=entries[i][1], score=s)
        for i, s in top
    ]
    return RetrievalResult(paragraphs=paragraphs, degraded=degraded)
