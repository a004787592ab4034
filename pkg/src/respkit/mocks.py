"""Deterministic offline providers for tests, demos, and mock-mode serving."""

from __future__ import annotations

import hashlib
import json

from . import prompts
from .textnorm import normalize_ws, segment_sentences, word_tokens


def _digest(text: str) -> int:
    return int.from_bytes(hashlib.md5(text.encode("utf-8")).digest()[:8], "big")


class HashingEmbedder:
    """Bag-of-words embedding with hashed token buckets; stable across runs."""

    def __init__(self, dim: int = 64):
        self.dim = dim

    def embed(self, texts: list[str]) -> list[list[float]]:
        out = []
        for text in texts:
            vec = [0.0] * self.dim
            for token in word_tokens(text):
                vec[_digest(token) % self.dim] += 1.0
            out.append(vec)
        return out


class MappingEmbedder:
    """Embeds from a fixed text->vector table; unknown texts get a zero vector."""

    def __init__(self, table: dict, dim: int = 4):
        self.table = table
        self.dim = dim

    def embed(self, texts: list[str]) -> list[list[float]]:
        return [list(self.table.get(t, [0.0] * self.dim)) for t in texts]


class MockClassifier:
    """Text-pair classifier stub; positive when the pair shares >= 3 tokens."""

    def __init__(self, decide=None):
        self.decide = decide

    def classify(self, text_a: str, text_b: str) -> dict:
        if self.decide is not None:
            positive = bool(self.decide(text_a, text_b))
        else:
            positive = len(set(word_tokens(text_a)) & set(word_tokens(text_b))) >= 3
        return {"label": "positive" if positive else "negative", "score": 1.0 if positive else 0.0}


class IdentityReranker:
    """Keeps the candidate order: strictly decreasing scores by position."""

    def rerank(self, query: str, passages: list[str]) -> list[float]:
        return [float(len(passages) - i) for i in range(len(passages))]


class SentenceFactExtractor:
    """Atomic-fact stub: every sentence is one fact."""

    def extract(self, text: str) -> list[str]:
        return segment_sentences(text)


class ContainmentVerifier:
    """Echo verifier: a fact is supported when it appears in the reference.

    Appearance means verbatim containment after normalization, or at least
    ``overlap`` of the fact's tokens occurring in the reference.
    """

    def __init__(self, overlap: float = 0.8):
        self.overlap = overlap

    def verify(self, facts: list[str], reference: str) -> list[str]:
        ref_norm = normalize_ws(reference).casefold()
        ref_tokens = set(word_tokens(reference))
        verdicts = []
        for fact in facts:
            fact_norm = normalize_ws(fact).casefold()
            tokens = word_tokens(fact)
            if fact_norm and fact_norm in ref_norm:
                verdicts.append("supported")
            elif tokens and sum(t in ref_tokens for t in tokens) / len(tokens) >= self.overlap:
                verdicts.append("supported")
            else:
                verdicts.append("unsupported")
        return verdicts


class ScriptedChat:
    """Chat stub that replays canned replies or defers to a handler function."""

    def __init__(self, replies=None, handler=None):
        self.replies = list(replies or [])
        self.handler = handler
        self.calls: list[tuple[str | None, str]] = []

    def complete(self, system: str | None, user: str) -> str:
        self.calls.append((system, user))
        if self.handler is not None:
            return self.handler(system, user)
        if not self.replies:
            raise AssertionError("ScriptedChat ran out of replies")
        return self.replies.pop(0)


def _section_after(text: str, marker: str) -> str:
    return text.split(marker, 1)[1] if marker in text else ""


def _line_payload(prompt: str, prefix: str) -> str:
    for line in prompt.splitlines():
        if line.startswith(prefix):
            body = line[len(prefix) :]
            start, end = body.find("["), body.rfind("]")
            if start != -1 and end > start:
                return body[start + 1 : end]
            return body
    return ""


class MockModelChat:
    """One offline chat model covering generation, judging, and fact prompts.

    Replies are deterministic functions of the prompt so repeated runs agree.
    """

    def complete(self, system: str | None, user: str) -> str:
        if system == prompts.ANNOTATION_SYSTEM:
            return self._annotate(user)
        if system == prompts.QUALITY_SYSTEM:
            return self._judge(user)
        if system == prompts.FACT_EXTRACTION_SYSTEM:
            return self._extract_facts(user)
        if system == prompts.FACT_VERIFICATION_SYSTEM:
            return self._verify_facts(user)
        return self._generate(user)

    # --- generation ---------------------------------------------------------

    def _generate(self, prompt: str) -> str:
        if "refinement round" in prompt:
            prior = _section_after(prompt, "  - The previous response generated is: ")
            prior = prior.split("\n", 1)[0].rstrip(".")
            return (
                f"{prior}. In addition, we now cite the exact section and report "
                "the complete numbers requested by the reviewer."
            )
        edits = _line_payload(prompt, "  - Refer to the author input below: ")
        review = _section_after(prompt, "  - The review comment is: ").split("\n", 1)[0]
        sentences = [
            "Thank you for this comment.",
            f"We address the concern raised ({review.rstrip('.')[:80]}) directly below.",
        ]
        if edits:
            sentences.append(f"Concretely, we revised the paper as follows: {edits}")
            sentences.append("These changes are reflected in the revised manuscript.")
        else:
            sentences.append(
                "We will clarify this point [author info: supporting details from the authors]."
            )
        return " ".join(sentences)

    # --- annotation ---------------------------------------------------------

    def _annotate(self, prompt: str) -> str:
        review = _section_after(prompt, "Review segment:\n").split("\n\nAuthor response:\n")[0]
        response = _section_after(prompt, "\n\nAuthor response:\n")
        items = []
        for i, sentence in enumerate(segment_sentences(review), start=1):
            lowered = sentence.lower()
            if sentence.rstrip().endswith("?"):
                item_type = "Question"
            elif "please" in lowered or "should" in lowered or "add " in lowered:
                item_type = "Request"
            else:
                item_type = "Criticism"
            items.append({"id": str(i), "type": item_type, "span": sentence})

        actions_by_type = {
            "Question": "answer question",
            "Request": "task has been done",
            "Criticism": "concede criticism",
        }
        spans = []
        for j, sentence in enumerate(segment_sentences(response)):
            if j == 0 and sentence.lower().startswith("thank"):
                spans.append({"text": sentence, "action": "social", "item_id": None})
                continue
            item = items[(j - 1) % len(items)] if items else None
            action = actions_by_type[item["type"]] if item else "other"
            spans.append(
                {"text": sentence, "action": action, "item_id": item["id"] if item else None}
            )
        return json.dumps({"items": items, "response_spans": spans})

    # --- quality judging ------------------------------------------------------

    def _judge(self, prompt: str) -> str:
        response = _section_after(prompt, "\n\nAuthor response:\n")
        payload = {}
        for dim in ("targeting", "specificity", "convincingness"):
            score = 3 + _digest(dim + response) % 3
            payload[dim] = {
                "score": score,
                "strengths": [f"addresses item #1 with concrete {dim} evidence"],
                "weaknesses": [] if score == 5 else [f"{dim} could cite exact locations (#1)"],
                "suggestions": []
                if score == 5
                else [f"quote the revised text verbatim to raise {dim} to 5"],
            }
        return json.dumps(payload)

    # --- facts ----------------------------------------------------------------

    def _extract_facts(self, prompt: str) -> str:
        text = _section_after(prompt, "Text:\n")
        return json.dumps({"facts": segment_sentences(text)})

    def _verify_facts(self, prompt: str) -> str:
        reference = _section_after(prompt, "Reference material:\n").split("\n\nFacts:\n")[0]
        facts_block = _section_after(prompt, "\n\nFacts:\n")
        facts = [line for line in facts_block.splitlines() if line.strip()]
        verdicts = ContainmentVerifier().verify(facts, reference)
        return json.dumps({"verdicts": verdicts})
