"""Prompt templates.

The template strings are load-bearing: tests pin them byte-for-byte, so any
edit here is a behavioral change, not a wording tweak. Placeholders use
``{name}`` syntax and are substituted literally (no str.format escaping
rules), each exactly once.
"""

from __future__ import annotations

import re
from enum import Enum

from ..errors import MissingParam, UnknownTemplateKind


class TemplateKind(str, Enum):
    QUESTIONS = "questions"
    SUBTOPICS = "subtopics"
    EXPLAIN = "explain"
    RAW_PROMPT = "raw_prompt"
    ZOOM_LINES = "zoom_lines"
    ZOOM_SUMMARY = "zoom_summary"
    ZOOM_KEYWORDS = "zoom_keywords"
    CANVAS_TOPIC = "canvas_topic"


class Route(str, Enum):
    """Which configured model serves a request: the fast conversational one
    or the accurate structured one."""

    CHAT = "chat"
    STRUCTURED = "structured"


TEMPLATES: dict[TemplateKind, str] = {
    TemplateKind.QUESTIONS: (
        "I need to learn about {text}. Give me a total of 25 questions, "
        "with 5 questions starting with 'why', 5 questions starting with "
        "'what', 5 questions starting with 'when', 5 questions starting with "
        "'where', and 5 questions starting with 'how'. Do not add numbers in "
        "front of the questions."
    ),
    TemplateKind.SUBTOPICS: (
        "Give me {numOfTopics} give or take {numOfMargin} new subtopics in "
        "the form of terms in 1 to 3 words each given this context: "
        "{context}. Format your response in CSV (comma separated values)."
    ),
    TemplateKind.EXPLAIN: "Tell me about {text}",
    TemplateKind.RAW_PROMPT: "{text}",
    TemplateKind.ZOOM_LINES: (
        "{line} If the text stated above is a paragraph, summarize it into a "
        "sentence. If the text is a bullet point or numbered list item, keep "
        "both the bullet point/number and main topic/term that represented "
        "the entire line, but just summarize the description into keywords."
    ),
    TemplateKind.ZOOM_SUMMARY: "Summarize this text in 1-2 phrases: {text}",
    TemplateKind.ZOOM_KEYWORDS: (
        "Extract 3-5 of the most important keywords from this text in CSV "
        "format: {text}"
    ),
    # Not part of the published prompt set; kept isolated here so it can be
    # swapped without touching the others.
    TemplateKind.CANVAS_TOPIC: (
        "Summarize the following whiteboard contents into a single short "
        "topic of at most 8 words: {canvas_digest}"
    ),
}

_PLACEHOLDER = re.compile(r"\{([A-Za-z_][A-Za-z0-9_]*)\}")


def placeholders(kind: TemplateKind) -> list[str]:
    return _PLACEHOLDER.findall(TEMPLATES[kind])


def render_template(kind: TemplateKind | str, params: dict[str, object]) -> str:
    """Instantiate a template. Every placeholder must be bound; values are
    substituted verbatim (str() for non-strings such as counts)."""
    try:
        kind = TemplateKind(kind)
    except ValueError:
        raise UnknownTemplateKind(f"no template kind {kind!r}") from None
    template = TEMPLATES[kind]
    required = placeholders(kind)
    missing = [name for name in required if name not in params]
    if missing:
        raise MissingParam(f"{kind.value} template missing params: {missing}")

    def substitute(match: re.Match) -> str:
        return str(params[match.group(1)])

    return _PLACEHOLDER.sub(substitute, template)


# The raw prompt is the conversational chat feature; every templated prompt
# wants the model that follows instructions most accurately.
def route_for_kind(kind: TemplateKind) -> Route:
    return Route.CHAT if kind is TemplateKind.RAW_PROMPT else Route.STRUCTURED
