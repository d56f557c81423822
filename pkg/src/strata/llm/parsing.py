"""Parsers for structured model output.

Both parsers are total: any UTF-8 input yields a (possibly empty) result.
Model output drifts from the requested format in practice, so they are
deliberately lenient — enumeration markers are stripped even though the
prompt forbids them, and item counts are reported rather than enforced.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from enum import Enum


def parse_csv_list(text: str) -> list[str]:
    """Split a comma-separated response into trimmed items, dropping empties
    and the single trailing period models like to append to the last item."""
    items = [item.strip() for item in text.split(",")]
    items = [item for item in items if item]
    if items and items[-1].endswith("."):
        items[-1] = items[-1][:-1].rstrip()
        if not items[-1]:
            items.pop()
    return items


class Interrogative(str, Enum):
    WHAT = "what"
    WHY = "why"
    WHEN = "when"
    WHERE = "where"
    HOW = "how"
    OTHER = "other"


@dataclass(frozen=True)
class Question:
    interrogative: Interrogative
    text: str


_ENUM_MARKER = re.compile(r"^\s*(?:\d+[.)]|[-•*])\s*")
_FIRST_WORD = re.compile(r"[A-Za-z']+")


def parse_question_list(text: str) -> list[Question]:
    """One question per nonempty line, classified by leading interrogative."""
    questions = []
    for line in text.splitlines():
        line = _ENUM_MARKER.sub("", line).strip()
        if not line:
            continue
        match = _FIRST_WORD.search(line)
        first = match.group(0).lower() if match else ""
        try:
            interrogative = Interrogative(first)
        except ValueError:
            interrogative = Interrogative.OTHER
        questions.append(Question(interrogative, line))
    return questions


def question_class_counts(questions: list[Question]) -> dict[Interrogative, int]:
    return dict(Counter(q.interrogative for q in questions))
