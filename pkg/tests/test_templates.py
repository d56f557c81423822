"""Template rendering pinned byte-for-byte against golden files."""

from __future__ import annotations

from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from strata.errors import MissingParam, UnknownTemplateKind
from strata.llm.templates import Route, TemplateKind, render_template, route_for_kind

GOLDENS = Path(__file__).parent / "goldens"

WHARF = ("Fisherman's Wharf is a popular tourist destination located in San "
         "Francisco, California, USA. It is a historic waterfront district that "
         "dates back to the mid-1800s, when it was primarily a fishing village.")

GOLDEN_CASES = [
    ("questions.txt", TemplateKind.QUESTIONS, {"text": "Moving to San Francisco"}),
    ("subtopics.txt", TemplateKind.SUBTOPICS,
     {"numOfTopics": 5, "numOfMargin": 0, "context": "Fisherman's Wharf"}),
    ("zoom_lines.txt", TemplateKind.ZOOM_LINES,
     {"line": "3. Fisherman's Wharf is a popular place to visit for seafood "
              "in San Francisco"}),
    ("zoom_summary.txt", TemplateKind.ZOOM_SUMMARY, {"text": WHARF}),
    ("zoom_keywords.txt", TemplateKind.ZOOM_KEYWORDS, {"text": WHARF}),
    ("explain.txt", TemplateKind.EXPLAIN, {"text": "jobs rotation"}),
]


@pytest.mark.parametrize("golden,kind,params", GOLDEN_CASES,
                         ids=[c[0] for c in GOLDEN_CASES])
def test_rendering_matches_golden_bytes(golden, kind, params):
    expected = (GOLDENS / golden).read_bytes()
    assert render_template(kind, params).encode("utf-8") == expected


def test_explain_is_a_literal_prefix():
    assert render_template(TemplateKind.EXPLAIN, {"text": "jobs rotation"}) == \
        "Tell me about jobs rotation"


def test_raw_prompt_passes_through():
    assert render_template(TemplateKind.RAW_PROMPT,
                           {"text": "What are the top San Francisco attractions?"}) \
        == "What are the top San Francisco attractions?"


def test_missing_param():
    with pytest.raises(MissingParam):
        render_template(TemplateKind.QUESTIONS, {})
    with pytest.raises(MissingParam):
        render_template(TemplateKind.SUBTOPICS, {"numOfTopics": 5, "context": "x"})


def test_unknown_kind():
    with pytest.raises(UnknownTemplateKind):
        render_template("haiku", {"text": "x"})


@given(st.text())
def test_substitution_is_literal(text):
    # placeholder-looking content in values must not be re-expanded
    rendered = render_template(TemplateKind.ZOOM_SUMMARY, {"text": text})
    assert rendered == "Summarize this text in 1-2 phrases: " + text


def test_routing_split():
    assert route_for_kind(TemplateKind.RAW_PROMPT) is Route.CHAT
    for kind in TemplateKind:
        if kind is not TemplateKind.RAW_PROMPT:
            assert route_for_kind(kind) is Route.STRUCTURED
