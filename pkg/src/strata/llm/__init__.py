"""Prompt templating, response parsing, and completion providers."""

from .gateway import Gateway, SubtopicResult, build_canvas_digest
from .mock import MockProvider
from .parsing import Interrogative, Question, parse_csv_list, parse_question_list
from .provider import CompletionStream, ProviderProfile
from .templates import Route, TemplateKind, render_template, route_for_kind

__all__ = [
    "CompletionStream",
    "Gateway",
    "Interrogative",
    "MockProvider",
    "ProviderProfile",
    "Question",
    "Route",
    "SubtopicResult",
    "TemplateKind",
    "build_canvas_digest",
    "parse_csv_list",
    "parse_question_list",
    "render_template",
    "route_for_kind",
]
