"""Parser fixtures from the published example responses, plus totality and
round -trip properties."""

from __future__ import annotations

from hypothesis import given
from hypothesis import strategies as st

from strata.llm.parsing import (
    Interrogative,
    parse_csv_list,
    parse_question_list,
    question_class_counts,
)

SUBTOPICS_RESPONSE = ("Pier 39, Street Performers, Seafood Restaurants, "
                      "Historic Ships, Waterfront Dining.")
KEYWORDS_RESPONSE = "Fisherman's Wharf, tourist, San Francisco, fishing village."
QUESTIONS_RESPONSE = (
    "Why move to San Francisco?\n"
    "Why is the cost of living so high?\n"
    "Why is San Francisco known as the tech hub?\n"
    "What areas offer great value for your money when you are looking for "
    "property prices?"
)


class TestCsvList:
    def test_subtopics_fixture(self):
        items = parse_csv_list(SUBTOPICS_RESPONSE)
        assert items == ["Pier 39", "Street Performers", "Seafood Restaurants",
                         "Historic Ships", "Waterfront Dining"]

    def test_keywords_fixture(self):
        assert parse_csv_list(KEYWORDS_RESPONSE) == \
            ["Fisherman's Wharf", "tourist", "San Francisco", "fishing village"]

    def test_empty_input(self):
        assert parse_csv_list("") == []

    def test_whitespace_and_empty_items(self):
        assert parse_csv_list("  a ,, b ,  ") == ["a", "b"]

    def test_only_last_period_stripped(self):
        assert parse_csv_list("St. Mary, end.") == ["St. Mary", "end"]

    @given(st.text())
    def test_total(self, text):
        parse_csv_list(text)

    @given(st.lists(st.text(
        alphabet=st.characters(blacklist_characters=",", blacklist_categories=("Cs",)),
        min_size=1).map(str.strip).filter(
            lambda s: s and not s.endswith(".")), min_size=1))
    def test_roundtrip(self, items):
        assert parse_csv_list(", ".join(items)) == items


class TestQuestionList:
    def test_fixture_classification(self):
        questions = parse_question_list(QUESTIONS_RESPONSE)
        assert len(questions) == 4
        assert [q.interrogative for q in questions[:3]] == [Interrogative.WHY] * 3
        assert questions[0].text == "Why move to San Francisco?"
        assert questions[3].interrogative is Interrogative.WHAT

    def test_basic_classes(self):
        questions = parse_question_list("How much?\nWhere to?")
        assert [q.interrogative for q in questions] == \
            [Interrogative.HOW, Interrogative.WHERE]

    def test_unlisted_interrogative(self):
        (q,) = parse_question_list("Is it safe?")
        assert q.interrogative is Interrogative.OTHER

    def test_enumeration_markers_stripped(self):
        questions = parse_question_list("1. Why here?\n- What now?\n• When then?\n2) How so?")
        assert [q.text for q in questions] == \
            ["Why here?", "What now?", "When then?", "How so?"]

    def test_case_insensitive(self):
        (q,) = parse_question_list("WHY NOT?")
        assert q.interrogative is Interrogative.WHY

    def test_counts(self):
        counts = question_class_counts(parse_question_list(QUESTIONS_RESPONSE))
        assert counts == {Interrogative.WHY: 3, Interrogative.WHAT: 1}

    def test_blank_lines_dropped(self):
        assert parse_question_list("\n\n  \n") == []

    @given(st.text())
    def test_total(self, text):
        parse_question_list(text)
