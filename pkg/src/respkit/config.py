"""TOML configuration for providers, thresholds, and retrieval constants."""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import ValidationError
from .metrics.facts import ChatFactExtractor, ChatFactVerifier
from .mocks import (
    ContainmentVerifier,
    HashingEmbedder,
    IdentityReranker,
    MockClassifier,
    MockModelChat,
    SentenceFactExtractor,
)
from .pair_align import MatchConfig
from .providers import (
    AuditedChatProvider,
    HttpChatProvider,
    HttpClassifierProvider,
    HttpEmbeddingProvider,
    HttpRerankerProvider,
    ProviderConfig,
)
from .retrieval import RetrievalConfig
from .triplet_align import TripletConfig


@dataclass
class ProviderSpec:
    kind: str = "mock"
    base_url: str = ""
    model: str = ""
    api_key_env: str = ""
    temperature: float | None = None
    timeout: float = 60.0
    max_retries: int = 2

    def http_config(self, default_key_env: str) -> ProviderConfig:
        if not self.base_url:
            raise ValidationError("http provider needs a base_url")
        return ProviderConfig(
            base_url=self.base_url,
            model=self.model,
            api_key_env=self.api_key_env or default_key_env,
            temperature=self.temperature,
            timeout=self.timeout,
            max_retries=self.max_retries,
        )


@dataclass
class Config:
    generation: ProviderSpec = field(default_factory=ProviderSpec)
    judge: ProviderSpec = field(default_factory=ProviderSpec)
    facts: ProviderSpec = field(default_factory=ProviderSpec)
    embedding: ProviderSpec = field(default_factory=lambda: ProviderSpec(kind="hashing"))
    classifier: ProviderSpec = field(default_factory=lambda: ProviderSpec(kind="none"))
    reranker: ProviderSpec = field(default_factory=lambda: ProviderSpec(kind="mock"))
    match: MatchConfig = field(default_factory=MatchConfig)
    triplet: TripletConfig = field(default_factory=TripletConfig)
    retrieval: RetrievalConfig = field(default_factory=RetrievalConfig)
    refinement_rounds: int = 1

    def force_mock(self):
        for spec in (self.generation, self.judge, self.facts):
            spec.kind = "mock"
        self.embedding.kind = "hashing"
        self.reranker.kind = "mock"
        if self.classifier.kind == "http":
            self.classifier.kind = "mock"

    # --- provider factories ---------------------------------------------------

    def _chat(self, spec: ProviderSpec, key_env: str, audit=None):
        if spec.kind == "mock":
            chat = MockModelChat()
        elif spec.kind == "http":
            chat = HttpChatProvider(spec.http_config(key_env))
        else:
            raise ValidationError(f"unsupported chat provider kind {spec.kind!r}")
        if audit is not None:
            return AuditedChatProvider(chat, audit, kind=key_env.rsplit("_", 1)[-1].lower())
        return chat

    def make_generation(self, audit=None):
        return self._chat(self.generation, "RESPKIT_API_KEY_GENERATION", audit)

    def make_judge(self, audit=None):
        return self._chat(self.judge, "RESPKIT_API_KEY_JUDGE", audit)

    def make_fact_providers(self, audit=None):
        if self.facts.kind == "mock":
            chat = MockModelChat()
            if audit is not None:
                chat = AuditedChatProvider(chat, audit, kind="facts")
            return ChatFactExtractor(chat), ChatFactVerifier(chat)
        if self.facts.kind == "simple":
            return SentenceFactExtractor(), ContainmentVerifier()
        chat = self._chat(self.facts, "RESPKIT_API_KEY_FACTS", audit)
        return ChatFactExtractor(chat), ChatFactVerifier(chat)

    def make_embedder(self):
        if self.embedding.kind == "hashing":
            return HashingEmbedder()
        if self.embedding.kind == "none":
            return None
        return HttpEmbeddingProvider(self.embedding.http_config("RESPKIT_API_KEY_EMBEDDING"))

    def make_classifier(self):
        if self.classifier.kind == "none":
            return None
        if self.classifier.kind == "mock":
            return MockClassifier()
        return HttpClassifierProvider(self.classifier.http_config("RESPKIT_API_KEY_CLASSIFIER"))

    def make_reranker(self):
        if self.reranker.kind == "none":
            return None
        if self.reranker.kind == "mock":
            return IdentityReranker()
        return HttpRerankerProvider(self.reranker.http_config("RESPKIT_API_KEY_RERANKER"))


def _spec_from(table: dict) -> ProviderSpec:
    return ProviderSpec(
        kind=table.get("kind", "mock"),
        base_url=table.get("base_url", ""),
        model=table.get("model", ""),
        api_key_env=table.get("api_key_env", ""),
        temperature=table.get("temperature"),
        timeout=table.get("timeout", 60.0),
        max_retries=table.get("max_retries", 2),
    )


def load_config(path=None) -> Config:
    """Build a Config from a TOML file; missing file or sections use defaults."""
    config = Config()
    if path is None:
        return config
    data = tomllib.loads(Path(path).read_text(encoding="utf-8"))

    providers = data.get("providers", {})
    for name in ("generation", "judge", "facts", "embedding", "classifier", "reranker"):
        if name in providers:
            setattr(config, name, _spec_from(providers[name]))

    if "match" in data:
        config.match = MatchConfig(**data["match"])
    if "triplet" in data:
        config.triplet = TripletConfig(**data["triplet"])
    if "retrieval" in data:
        config.retrieval = RetrievalConfig(**data["retrieval"])
    config.refinement_rounds = data.get("refinement", {}).get("rounds", 1)
    return config
