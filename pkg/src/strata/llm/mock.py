"""Deterministic provider for tests and offline demos.

Responses are keyed by (template kind, SHA-256 of the rendered prompt).
Unknown keys echo the prompt's last line, which keeps unscripted flows
usable. Every call lands in ``call_log`` so tests can assert routing and
call counts.
"""

from __future__ import annotations

import hashlib
import json
import threading
from pathlib import Path
from typing import Iterator

from ..errors import CorruptFile, ProviderError
from .provider import CallRecord
from .templates import TemplateKind


def prompt_sha256(prompt: str) -> str:
    return hashlib.sha256(prompt.encode("utf-8")).hexdigest()


def default_fixtures_dir() -> Path:
    """Fixture records shipped with the package (used by --mock-llm)."""
    return Path(__file__).parent / "fixtures"


class MockProvider:
    def __init__(self):
        self._records: dict[tuple[str, str], tuple[str, list[int] | None]] = {}
        self._pending_failures: list[ProviderError] = []
        self._lock = threading.Lock()
        self.call_log: list[CallRecord] = []

    # --- fixture management ---------------------------------------------

    def add(self, kind: TemplateKind | str | None, prompt: str, response: str,
            chunking: list[int] | None = None) -> None:
        key = (self._kind_key(kind), prompt_sha256(prompt))
        self._records[key] = (response, chunking)

    def load_dir(self, path: str | Path) -> "MockProvider":
        """Load fixture records from every ``*.json`` file in a directory.
        Each file holds one record object or a list of them: {kind,
        prompt_sha256 | prompt, response_text, chunking?}."""
        for file in sorted(Path(path).glob("*.json")):
            payload = json.loads(file.read_text(encoding="utf-8"))
            records = payload if isinstance(payload, list) else [payload]
            for record in records:
                self._load_record(record, file)
        return self

    def _load_record(self, record: dict, source: Path) -> None:
        try:
            kind = self._kind_key(record["kind"])
            if "prompt_sha256" in record:
                sha = record["prompt_sha256"]
            else:
                sha = prompt_sha256(record["prompt"])
            response = record["response_text"]
        except (KeyError, TypeError) as exc:
            raise CorruptFile(f"bad mock fixture in {source}: {exc}") from exc
        self._records[(kind, sha)] = (response, record.get("chunking"))

    @staticmethod
    def _kind_key(kind: TemplateKind | str | None) -> str:
        if kind is None:
            return "raw_prompt"
        return kind.value if isinstance(kind, TemplateKind) else str(kind)

    # --- failure injection ------------------------------------------------

    def fail_next(self, error: ProviderError, times: int = 1) -> None:
        """Queue errors to raise on the next ``times`` calls."""
        with self._lock:
            self._pending_failures.extend([error] * times)

    # --- provider surface ---------------------------------------------------

    def stream(self, model: str, prompt: str,
               kind: TemplateKind | None = None) -> Iterator[str]:
        sha = prompt_sha256(prompt)
        with self._lock:
            self.call_log.append(CallRecord(model=model, kind=kind,
                                            prompt=prompt, prompt_sha256=sha))
            failure = self._pending_failures.pop(0) if self._pending_failures else None
        if failure is not None:
            raise failure
        response, chunking = self._records.get(
            (self._kind_key(kind), sha), (self._echo(prompt), None))
        yield from self._chunks(response, chunking)

    @staticmethod
    def _echo(prompt: str) -> str:
        lines = [line for line in prompt.splitlines() if line.strip()]
        return lines[-1] if lines else ""

    @staticmethod
    def _chunks(response: str, chunking: list[int] | None) -> Iterator[str]:
        if not chunking:
            if response:
                yield response
            return
        raw = response.encode("utf-8")
        offset = 0
        for length in chunking:
            if offset >= len(raw):
                return
            yield raw[offset:offset + length].decode("utf-8")
            offset += length
        if offset < len(raw):
            yield raw[offset:].decode("utf-8")

    # --- assertions helpers ----------------------------------------------

    def calls_for(self, kind: TemplateKind | str | None) -> list[CallRecord]:
        key = self._kind_key(kind)
        return [c for c in self.call_log if self._kind_key(c.kind) == key]

    def reset_log(self) -> None:
        with self._lock:
            self.call_log.clear()
