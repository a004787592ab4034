"""Pluggable model providers (chat, embeddings, classifier, reranker) and audit logging.

All remote providers speak JSON over HTTP and read their API key from an
environment variable; keys are never persisted. Every audited call appends
exactly one JSON object to the audit file.
"""

from __future__ import annotations

import json
import logging
import os
import threading
import time
from dataclasses import dataclass
from pathlib import Path

import httpx

from .errors import ProtocolError, ProviderError

logger = logging.getLogger(__name__)


@dataclass
class ProviderConfig:
    base_url: str
    model: str = ""
    api_key_env: str = "RESPKIT_API_KEY"
    temperature: float | None = None
    timeout: float = 60.0
    max_retries: int = 2


class AuditLog:
    """Append-only JSONL record of provider calls."""

    def __init__(self, path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._seq = 0

    def record(self, kind: str, request, response=None, error: str | None = None) -> str:
        with self._lock:
            self._seq += 1
            audit_id = f"a{self._seq:06d}"
            entry = {
                "audit_id": audit_id,
                "ts": time.time(),
                "kind": kind,
                "request": request,
                "response": response,
                "error": error,
            }
            with self.path.open("a", encoding="utf-8") as fh:
                fh.write(json.dumps(entry, ensure_ascii=False) + "\n")
        return audit_id


class _HttpProvider:
    def __init__(self, config: ProviderConfig):
        self.config = config
        self._client = httpx.Client(timeout=config.timeout)

    def _headers(self) -> dict:
        headers = {"Content-Type": "application/json"}
        key = os.environ.get(self.config.api_key_env, "")
        if key:
            headers["Authorization"] = f"Bearer {key}"
        return headers

    def _post(self, path: str, payload: dict) -> dict:
        url = self.config.base_url.rstrip("/") + path
        attempts = 0
        last_error = None
        while attempts <= self.config.max_retries:
            attempts += 1
            try:
                resp = self._client.post(url, json=payload, headers=self._headers())
                resp.raise_for_status()
                return resp.json()
            except (httpx.TimeoutException, httpx.HTTPError, json.JSONDecodeError) as exc:
                last_error = exc
                logger.warning("provider call to %s failed (attempt %d): %s", url, attempts, exc)
        raise ProviderError(f"provider call to {url} failed: {last_error}", attempts=attempts)


class HttpChatProvider(_HttpProvider):
    """Chat-completion-style endpoint: system/user messages in, text out."""

    def complete(self, system: str | None, user: str) -> str:
        messages = []
        if system:
            messages.append({"role": "system", "content": system})
        messages.append({"role": "user", "content": user})
        payload = {"model": self.config.model, "messages": messages}
        if self.config.temperature is not None:
            payload["temperature"] = self.config.temperature
        data = self._post("/chat/completions", payload)
        try:
            content = data["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError):
            raise ProtocolError(f"unexpected chat payload: {data!r}")
        if not isinstance(content, str):
            raise ProtocolError(f"chat content is not text: {content!r}")
        return content


class HttpEmbeddingProvider(_HttpProvider):
    def embed(self, texts: list[str]) -> list[list[float]]:
        data = self._post("/embeddings", {"model": self.config.model, "input": texts})
        try:
            vectors = [item["embedding"] for item in data["data"]]
        except (KeyError, TypeError):
            raise ProtocolError(f"unexpected embedding payload: {data!r}")
        if len(vectors) != len(texts):
            raise ProtocolError("embedding count does not match input count")
        return vectors


class HttpClassifierProvider(_HttpProvider):
    """Binary text-pair classifier: {text_a, text_b} -> {label, score}."""

    def classify(self, text_a: str, text_b: str) -> dict:
        data = self._post("/classify", {"text_a": text_a, "text_b": text_b})
        label = data.get("label")
        if label not in ("positive", "negative"):
            raise ProtocolError(f"classifier label must be positive/negative, got {label!r}")
        return {"label": label, "score": float(data.get("score", 0.0))}


class HttpRerankerProvider(_HttpProvider):
    def rerank(self, query: str, passages: list[str]) -> list[float]:
        data = self._post("/rerank", {"query": query, "passages": passages})
        try:
            scores = [float(s) for s in data["scores"]]
        except (KeyError, TypeError, ValueError):
            raise ProtocolError(f"unexpected reranker payload: {data!r}")
        if len(scores) != len(passages):
            raise ProtocolError("reranker score count does not match passage count")
        return scores


class AuditedChatProvider:
    """Wraps a chat provider so every call writes one audit record."""

    def __init__(self, provider, audit: AuditLog, kind: str = "chat"):
        self.provider = provider
        self.audit = audit
        self.kind = kind

    def complete(self, system: str | None, user: str) -> str:
        return self.call_with_audit(system, user)[0]

    def call_with_audit(self, system: str | None, user: str) -> tuple[str, str]:
        request = {"system": system, "user": user}
        try:
            text = self.provider.complete(system, user)
        except Exception as exc:
            self.audit.record(self.kind, request, error=str(exc))
            raise
        audit_id = self.audit.record(self.kind, request, response=text)
        return text, audit_id
