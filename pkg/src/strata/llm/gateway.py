"""High-level gateway: render a template, route it to the right model,
stream the completion, and parse structured responses."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

from ..errors import EmptyDigest
from ..model import CanvasLayer, SemanticLevel
from .parsing import Question, parse_csv_list, parse_question_list
from .provider import CompletionStream, Provider, ProviderProfile, complete
from .templates import Route, TemplateKind, render_template, route_for_kind

DIGEST_CHAR_LIMIT = 4000
TOPIC_WORD_LIMIT = 8


@dataclass
class SubtopicResult:
    """Parsed subtopic list plus a warning when the model missed the
    requested count (tolerated, not fatal)."""

    items: list[str]
    warning: str | None = None


class Gateway:
    def __init__(self, provider: Provider, profile: ProviderProfile,
                 sleep: Callable[[float], None] = time.sleep):
        self.provider = provider
        self.profile = profile
        self._sleep = sleep

    # --- completion ----------------------------------------------------------

    def complete(self, prompt: str, route: Route,
                 kind: TemplateKind | None = None) -> CompletionStream:
        return complete(prompt, route, self.profile, self.provider,
                        kind=kind, sleep=self._sleep)

    def complete_template(self, kind: TemplateKind,
                          params: dict[str, object]) -> CompletionStream:
        prompt = render_template(kind, params)
        return self.complete(prompt, route_for_kind(kind), kind=kind)

    # --- structured operations -------------------------------------------------

    def generate_subtopics(self, context: str, count: int = 5,
                           margin: int = 0) -> SubtopicResult:
        if count < 1:
            raise ValueError("subtopic count must be >= 1")
        if margin < 0:
            raise ValueError("subtopic margin must be >= 0")
        stream = self.complete_template(TemplateKind.SUBTOPICS, {
            "numOfTopics": count, "numOfMargin": margin, "context": context})
        items = parse_csv_list(stream.drain())
        warning = None
        if abs(len(items) - count) > margin:
            warning = (f"requested {count} subtopics (margin {margin}) "
                       f"but parsed {len(items)}")
        return SubtopicResult(items=items, warning=warning)

    def generate_questions(self, text: str) -> list[Question]:
        stream = self.complete_template(TemplateKind.QUESTIONS, {"text": text})
        return parse_question_list(stream.drain())

    def summarize_canvas_topic(self, canvas_digest: str) -> str:
        if not canvas_digest:
            raise EmptyDigest("cannot summarize an empty canvas digest")
        stream = self.complete_template(TemplateKind.CANVAS_TOPIC,
                                        {"canvas_digest": canvas_digest})
        return clean_topic(stream.drain())


def clean_topic(raw: str) -> str:
    """Normalize a model-proposed topic: single line, at most 8 words,
    trailing punctuation stripped."""
    line = " ".join(raw.strip().splitlines()[:1])
    words = line.split()
    line = " ".join(words[:TOPIC_WORD_LIMIT])
    return line.rstrip(".,;:!? ")


def build_canvas_digest(canvas: CanvasLayer) -> str:
    """Condense a canvas for topic summarization: keyword renditions when
    fresh, full text otherwise, newline-joined and size-capped."""
    parts = []
    for node in canvas.nodes.values():
        keywords = node.fresh_rendition(SemanticLevel.KEYWORDS)
        text = keywords.text if keywords else node.text
        if text:
            parts.append(text)
    return "\n".join(parts)[:DIGEST_CHAR_LIMIT]
