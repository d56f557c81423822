"""Completion providers and the streaming/retry machinery around them.

A provider is anything with ``stream(model, prompt, kind=None)`` yielding
text chunks. Transient failures (transport errors, 429s) are retried with
exponential backoff, but only while nothing has been emitted yet — retrying
a half-delivered stream would duplicate chunks.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Callable, Iterator, Protocol

import httpx

from ..errors import (
    ConfigInvalid,
    ProviderError,
    ProviderTimeout,
    RateLimited,
    TransportFailure,
)
from .templates import Route, TemplateKind

RETRYABLE = (TransportFailure, RateLimited, ProviderTimeout)


class Provider(Protocol):
    def stream(self, model: str, prompt: str,
               kind: TemplateKind | None = None) -> Iterator[str]: ...


@dataclass
class ProviderProfile:
    """Model routing and transport settings. ``chat_model`` serves streamed
    conversational prompts; ``structured_model`` serves every template."""

    chat_model: str = "gpt-3.5-turbo"
    structured_model: str = "gpt-4"
    api_key: str = ""
    endpoint: str = "https://api.openai.com/v1"
    timeout_s: float = 60.0
    max_retries: int = 2
    backoff_base_ms: int = 250

    def __post_init__(self):
        if not self.chat_model or not self.structured_model:
            raise ConfigInvalid("both model identifiers must be nonempty")

    def model_for(self, route: Route) -> str:
        return self.chat_model if route is Route.CHAT else self.structured_model


class CompletionStream:
    """Ordered text chunks ending in either completion or a recorded error.

    Iterate to consume; ``text`` is the concatenation of everything emitted
    so far and ``error`` is set instead of raising, so a consumer can keep a
    partial response.
    """

    def __init__(self, chunks: Iterator[str]):
        self._chunks = chunks
        self._parts: list[str] = []
        self.error: ProviderError | None = None
        self.done = False

    def __iter__(self) -> Iterator[str]:
        if self.done:
            yield from self._parts
            return
        while True:
            try:
                chunk = next(self._chunks)
            except StopIteration:
                self.done = True
                return
            except ProviderError as exc:
                self.error = exc
                self.done = True
                return
            self._parts.append(chunk)
            yield chunk

    @property
    def text(self) -> str:
        return "".join(self._parts)

    def drain(self) -> str:
        """Consume the rest of the stream and return the full text, raising
        the recorded error if the stream failed."""
        for _ in self:
            pass
        if self.error is not None:
            raise self.error
        return self.text


def complete(prompt: str, route: Route, profile: ProviderProfile,
             provider: Provider, kind: TemplateKind | None = None,
             sleep: Callable[[float], None] = time.sleep) -> CompletionStream:
    """Stream a completion from the routed model with retry/backoff."""
    model = profile.model_for(route)

    def run() -> Iterator[str]:
        attempt = 0
        while True:
            emitted = False
            try:
                for chunk in provider.stream(model, prompt, kind=kind):
                    emitted = True
                    yield chunk
                return
            except RETRYABLE as exc:
                if emitted or attempt >= profile.max_retries:
                    raise exc
                sleep(profile.backoff_base_ms * (2 ** attempt) / 1000.0)
                attempt += 1

    return CompletionStream(run())


class HttpProvider:
    """OpenAI-style chat-completions client over httpx with SSE streaming."""

    def __init__(self, profile: ProviderProfile,
                 transport: httpx.BaseTransport | None = None):
        self.profile = profile
        self._client = httpx.Client(
            base_url=profile.endpoint,
            timeout=profile.timeout_s,
            headers={"Authorization": f"Bearer {profile.api_key}"},
            transport=transport,
        )

    def stream(self, model: str, prompt: str,
               kind: TemplateKind | None = None) -> Iterator[str]:
        body = {
            "model": model,
            "messages": [{"role": "user", "content": prompt}],
            "stream": True,
        }
        try:
            with self._client.stream("POST", "/chat/completions",
                                     json=body) as response:
                if response.status_code == 429:
                    raise RateLimited("provider rate limit", status=429)
                if response.status_code >= 400:
                    response.read()
                    raise ProviderError(
                        f"provider returned {response.status_code}",
                        status=response.status_code)
                for line in response.iter_lines():
                    if not line.startswith("data:"):
                        continue
                    data = line[len("data:"):].strip()
                    if data == "[DONE]":
                        break
                    delta = (json.loads(data).get("choices") or [{}])[0] \
                        .get("delta", {})
                    content = delta.get("content")
                    if content:
                        yield content
        except httpx.TimeoutException as exc:
            raise ProviderTimeout(str(exc)) from exc
        except httpx.TransportError as exc:
            raise TransportFailure(str(exc)) from exc

    def close(self) -> None:
        self._client.close()


@dataclass
class CallRecord:
    """One provider invocation, as seen by the mock's call log."""

    model: str
    kind: TemplateKind | None
    prompt: str
    prompt_sha256: str = field(default="")
