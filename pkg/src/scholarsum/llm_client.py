"""Delivery of prompt bundles to a text-generation backend.

Two backends: "remote" speaks the ubiquitous chat-completions convention
(two-message system/user request, text read from the first choice), so any
compatible endpoint or local inference server works; "mock" produces a
deterministic extractive summary so the whole pipeline can be exercised
end-to-end without a model. The mock's output is cited and structured by
construction, which the validator tests rely on.
"""

from __future__ import annotations

import logging
import re
import threading
import time
from dataclasses import dataclass

import httpx

from .summarizer import PromptBundle, SummaryMode

logger = logging.getLogger(__name__)

BACKENDS = ("remote", "mock")
BACKOFF_BASE_S = 0.5  # sleep 0.5 * 2**attempt between retries


class LlmError(Exception):
    """Base class for generation failures."""


class AuthRejected(LlmError):
    """401/403 from the backend; never retried."""

    def __init__(self, status: int):
        super().__init__(f"backend rejected credentials (HTTP {status})")
        self.status = status


class BadRequestUpstream(LlmError):
    """Any other 4xx from the backend; never retried."""

    def __init__(self, status: int):
        super().__init__(f"backend rejected the request (HTTP {status})")
        self.status = status


class UpstreamFailed(LlmError):
    """Retries exhausted on 5xx or transport errors; carries the last status."""

    def __init__(self, status: int | None, attempts: int):
        detail = f"HTTP {status}" if status is not None else "transport error"
        super().__init__(f"backend failed after {attempts} attempts ({detail})")
        self.status = status
        self.attempts = attempts


class UpstreamTimeout(LlmError):
    """Retries exhausted and the last attempt timed out."""

    def __init__(self, attempts: int, timeout_s: float):
        super().__init__(f"backend timed out after {attempts} attempts ({timeout_s}s each)")
        self.attempts = attempts


@dataclass(frozen=True)
class LlmConfig:
    base_url: str = ""
    api_key: str = ""
    model: str = ""
    timeout_s: float = 60.0
    retry_max: int = 2
    max_in_flight: int = 4
    backend: str = "mock"
    temperature: float | None = None  # sent only when set; backend defaults otherwise
    max_tokens: int | None = None

    def validate(self) -> None:
        if self.backend not in BACKENDS:
            raise ValueError(f"unknown backend {self.backend!r}")
        if self.backend == "remote" and (not self.base_url or not self.model):
            raise ValueError("remote backend requires base_url and model")
        if self.timeout_s <= 0:
            raise ValueError("timeout_s must be positive")
        if self.retry_max < 0:
            raise ValueError("retry_max must be >= 0")
        if self.max_in_flight < 1:
            raise ValueError("max_in_flight must be >= 1")


@dataclass(frozen=True)
class GenerationOutcome:
    text: str
    model_id: str
    latency_ms: int
    attempts: int


_BLOCK_HEAD_RE = re.compile(r"(?m)^\[([0-9]+)\] (.*)$")
_FIRST_PERIOD_RE = re.compile(r"\.(?=\s|$)")


def _parse_documents(user_message: str) -> list[tuple[str, str]]:
    """Recover (title, abstract) blocks from a build_prompt user message.

    Block headers must be numbered 1..n in order; a stray "[k] " line inside
    an abstract is not the next expected number, so it stays abstract text.
    """
    heads = []
    for m in _BLOCK_HEAD_RE.finditer(user_message):
        if int(m.group(1)) == len(heads) + 1:
            heads.append(m)
    docs = []
    for i, m in enumerate(heads):
        end = heads[i + 1].start() if i + 1 < len(heads) else len(user_message)
        docs.append((m.group(2), user_message[m.end() : end].strip()))
    return docs


def _cited_sentence(title: str, abstract: str, k: int) -> str:
    """First sentence of the abstract (title when empty), cited as [k]."""
    source = abstract.strip() or title.strip()
    m = _FIRST_PERIOD_RE.search(source)
    sentence = source[: m.end()] if m else source
    sentence = sentence.strip()
    if sentence.endswith("."):
        sentence = sentence[:-1].rstrip()
    return f"{sentence} [{k}]."


def _group_sizes(n: int, paragraphs: int) -> list[int]:
    base, remainder = divmod(n, paragraphs)
    return [base + 1] * remainder + [base] * (paragraphs - remainder)


def mock_generate(bundle: PromptBundle) -> str:
    """Deterministic extractive stand-in for a real model.

    Concise: one paragraph of each document's cited first sentence.
    Lit review: the documents split, in order, into 3 contiguous groups
    (4 when more than 12 documents), one paragraph per group.
    """
    docs = _parse_documents(bundle.user_message)
    sentences = [_cited_sentence(title, abstract, k) for k, (title, abstract) in enumerate(docs, 1)]
    if bundle.mode is SummaryMode.CONCISE:
        return " ".join(sentences)
    paragraph_count = 3 if len(docs) <= 12 else 4
    paragraphs = []
    cursor = 0
    for size in _group_sizes(len(docs), paragraph_count):
        paragraphs.append(" ".join(sentences[cursor : cursor + size]))
        cursor += size
    return "\n\n".join(paragraphs)


class LlmClient:
    """Reusable client; concurrent calls are capped at max_in_flight."""

    def __init__(self, config: LlmConfig, transport: httpx.BaseTransport | None = None,
                 sleep=time.sleep):
        config.validate()
        self.config = config
        self._sleep = sleep
        self._slots = threading.BoundedSemaphore(config.max_in_flight)
        self._http: httpx.Client | None = None
        if config.backend == "remote":
            self._http = httpx.Client(timeout=config.timeout_s, transport=transport)

    def close(self) -> None:
        if self._http is not None:
            self._http.close()

    def __enter__(self) -> "LlmClient":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()

    def complete(self, bundle: PromptBundle) -> GenerationOutcome:
        """Generate text for the bundle, retrying transient upstream failures.

        5xx responses and transport errors (timeouts included) are retried
        with exponential backoff up to retry_max extra attempts; 4xx
        responses are never retried. The api_key is sent as a bearer header
        and never appears in errors or logs.
        """
        if self.config.backend == "mock":
            return GenerationOutcome(
                text=mock_generate(bundle), model_id="mock", latency_ms=0, attempts=1
            )
        with self._slots:
            return self._complete_remote(bundle)

    def _complete_remote(self, bundle: PromptBundle) -> GenerationOutcome:
        assert self._http is not None
        url = self.config.base_url.rstrip("/") + "/chat/completions"
        payload: dict = {
            "model": self.config.model,
            "messages": [
                {"role": "system", "content": bundle.system_prompt},
                {"role": "user", "content": bundle.user_message},
            ],
        }
        if self.config.temperature is not None:
            payload["temperature"] = self.config.temperature
        if self.config.max_tokens is not None:
            payload["max_tokens"] = self.config.max_tokens
        headers = {}
        if self.config.api_key:
            headers["Authorization"] = f"Bearer {self.config.api_key}"

        started = time.monotonic()
        last_status: int | None = None
        timed_out = False
        for attempt in range(1, self.config.retry_max + 2):
            try:
                response = self._http.post(url, json=payload, headers=headers)
            except httpx.TimeoutException:
                timed_out, last_status = True, None
                logger.warning("LLM request timed out (attempt %d)", attempt)
            except httpx.TransportError as exc:
                timed_out, last_status = False, None
                logger.warning("LLM transport error (attempt %d): %s", attempt, type(exc).__name__)
            else:
                if response.status_code < 300:
                    data = response.json()
                    return GenerationOutcome(
                        text=data["choices"][0]["message"]["content"],
                        model_id=data.get("model") or self.config.model,
                        latency_ms=int((time.monotonic() - started) * 1000),
                        attempts=attempt,
                    )
                if response.status_code in (401, 403):
                    raise AuthRejected(response.status_code)
                if response.status_code < 500:
                    raise BadRequestUpstream(response.status_code)
                timed_out, last_status = False, response.status_code
                logger.warning("LLM returned HTTP %d (attempt %d)", response.status_code, attempt)
            if attempt <= self.config.retry_max:
                self._sleep(BACKOFF_BASE_S * 2 ** (attempt - 1))
        if timed_out:
            raise UpstreamTimeout(self.config.retry_max + 1, self.config.timeout_s)
        raise UpstreamFailed(last_status, self.config.retry_max + 1)


def complete(bundle: PromptBundle, config: LlmConfig,
             transport: httpx.BaseTransport | None = None) -> GenerationOutcome:
    """One-shot convenience wrapper around LlmClient."""
    with LlmClient(config, transport=transport) as client:
        return client.complete(bundle)
