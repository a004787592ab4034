"""Atomic-fact input-utilization measures: factuality precision and input coverage."""

from __future__ import annotations

from dataclasses import dataclass, field

from .. import prompts
from ..errors import SchemaError, UndefinedMetricError
from .quality import parse_json_object

VERDICTS = ("supported", "unsupported", "contradicted")


@dataclass
class FactVerdicts:
    """Atomic facts with parallel verdicts and their fractions."""

    facts: list[str]
    verdicts: list[str]
    empty: bool = field(default=False)

    def __post_init__(self):
        if len(self.facts) != len(self.verdicts):
            raise SchemaError(
                f"{len(self.verdicts)} verdicts for {len(self.facts)} facts"
            )
        bad = [v for v in self.verdicts if v not in VERDICTS]
        if bad:
            raise SchemaError(f"unknown verdicts: {bad}")
        self.empty = not self.facts

    def _fraction(self, verdict: str) -> float:
        if not self.verdicts:
            return 0.0
        return sum(1 for v in self.verdicts if v == verdict) / len(self.verdicts)

    @property
    def supported(self) -> float:
        return self._fraction("supported")

    @property
    def unsupported(self) -> float:
        return self._fraction("unsupported")

    @property
    def contradicted(self) -> float:
        return self._fraction("contradicted")

    def summary(self) -> dict:
        return {
            "supported": self.supported,
            "unsupported": self.unsupported,
            "contradicted": self.contradicted,
            "n_facts": len(self.facts),
            "empty": self.empty,
        }


def _verify(facts: list[str], reference: str, extractor_name, verifier) -> FactVerdicts:
    if not facts:
        # Degenerate generation: no facts extracted, scored as zero support.
        return FactVerdicts(facts=[], verdicts=[])
    verdicts = verifier.verify(facts, reference)
    return FactVerdicts(facts=facts, verdicts=list(verdicts))


def gfp(response: str, inputs: list[str], extractor, verifier) -> FactVerdicts:
    """Generation factuality: response facts verified against all provided inputs.

    Provider failures propagate; no partial verdict set is ever returned.
    """
    facts = extractor.extract(response)
    reference = "\n".join(inputs)
    return _verify(list(facts), reference, extractor, verifier)


def icr(edit_strings: list[str], response: str, extractor, verifier) -> FactVerdicts:
    """Input coverage: author-edit facts checked for expression in the response."""
    if not edit_strings:
        raise UndefinedMetricError("input coverage undefined without author edits")
    facts = extractor.extract("\n".join(edit_strings))
    return _verify(list(facts), response, extractor, verifier)


class ChatFactExtractor:
    """Atomic-fact decomposition through a chat provider."""

    def __init__(self, chat):
        self.chat = chat

    def extract(self, text: str) -> list[str]:
        if not text.strip():
            return []
        prompt = prompts.FACT_EXTRACTION_TASK.format(text=text)
        raw = self.chat.complete(prompts.FACT_EXTRACTION_SYSTEM, prompt)
        payload = parse_json_object(raw)
        facts = payload.get("facts")
        if not isinstance(facts, list):
            raise SchemaError("fact extraction payload lacks a 'facts' list", raw=raw)
        return [str(f) for f in facts if str(f).strip()]


class ChatFactVerifier:
    """Per-fact support verdicts through a chat provider."""

    def __init__(self, chat):
        self.chat = chat

    def verify(self, facts: list[str], reference: str) -> list[str]:
        prompt = prompts.FACT_VERIFICATION_TASK.format(
            reference=reference, facts="\n".join(facts)
        )
        raw = self.chat.complete(prompts.FACT_VERIFICATION_SYSTEM, prompt)
        payload = parse_json_object(raw)
        verdicts = payload.get("verdicts")
        if not isinstance(verdicts, list) or len(verdicts) != len(facts):
            raise SchemaError("verdict list does not match the fact list", raw=raw)
        return [str(v) for v in verdicts]
