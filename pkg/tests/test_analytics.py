"""Session log behavior and the metrics, checked against brute-force
counters on random fixtures."""

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from builders import random_workspace
from oracles import count_concepts_bruteforce, count_events
from strata.analytics import (
    CanvasOrigin,
    EventKind,
    RevisitKind,
    SessionLog,
    compute_metrics,
    count_concepts,
    count_revisits,
    load_glossary,
)
from strata.errors import EmptyGlossary
from strata.model import NodeKind
from strata.workspace import Workspace

GLOSSARY = ["machine learning", "neural network", "transformer", "harbor",
            "transit", "rent", "fog", "climate", "museums", "startups"]


def make_log(events):
    log = SessionLog()
    at = 1000
    for kind, data in events:
        log.record(kind, data, at)
        at += 10
    return log


class TestRecord:
    def test_seq_starts_at_one(self):
        log = SessionLog()
        assert log.record(EventKind.PROMPT_ISSUED,
                          {"template_kind": "questions", "node": "n1"}, 5) == 1

    def test_seq_increments_without_gaps(self):
        log = SessionLog()
        seqs = [log.record(EventKind.NODE_CREATED, {"node": f"n{i}", "kind": "concept"},
                           i) for i in range(10)]
        assert seqs == list(range(1, 11))

    def test_replay_reproduces_seq_assignment(self):
        log = make_log([(EventKind.NODE_CREATED, {"node": "n1", "kind": "concept"}),
                        (EventKind.CANVAS_VISITED, {"canvas": "c1"})])
        replayed = SessionLog.from_lines(log.dump_lines())
        assert [e.to_dict() for e in replayed.events] == \
            [e.to_dict() for e in log.events]


class TestCountConcepts:
    def test_plural_folding_example(self):
        ws = Workspace.new("w", "notes")
        ws.create_node(ws.roots[0], NodeKind.RESPONSE,
                       "Neural networks and machine learning", (0, 0))
        glossary = ["machine learning", "neural network", "transformer"]
        assert count_concepts(ws, glossary) == 2
        texts = ["notes", "Neural networks and machine learning"]
        assert count_concepts_bruteforce(texts, glossary) == 2

    def test_empty_workspace(self):
        ws = Workspace.new("w", "blank")
        assert count_concepts(ws, GLOSSARY) == 0

    def test_term_counted_once_across_canvases(self):
        ws = Workspace.new("w", "start")
        second = ws.create_hierarchy("more")
        ws.create_node(ws.roots[0], NodeKind.CONCEPT, "the fog rolls in", (0, 0))
        ws.create_node(second, NodeKind.CONCEPT, "fog again", (0, 0))
        assert count_concepts(ws, ["fog"]) == 1

    def test_topic_text_is_scanned(self):
        ws = Workspace.new("w", "Public Transit Guide")
        assert count_concepts(ws, ["transit"]) == 1

    def test_multiword_contiguity(self):
        ws = Workspace.new("w", "x")
        ws.create_node(ws.roots[0], NodeKind.CONCEPT,
                       "machine quality learning", (0, 0))
        assert count_concepts(ws, ["machine learning"]) == 0

    def test_case_and_punctuation_insensitive(self):
        ws = Workspace.new("w", "x")
        ws.create_node(ws.roots[0], NodeKind.CONCEPT,
                       "All about MACHINE-LEARNING, truly", (0, 0))
        assert count_concepts(ws, ["machine learning"]) == 1

    def test_empty_glossary(self):
        ws = Workspace.new("w", "x")
        with pytest.raises(EmptyGlossary):
            count_concepts(ws, [])
        with pytest.raises(EmptyGlossary):
            count_concepts(ws, ["   "])

    @given(seed=st.integers(0, 2**32 - 1))
    @settings(max_examples=50, deadline=None)
    def test_matches_bruteforce_on_random_workspaces(self, seed):
        ws = random_workspace(seed, ops=15)
        texts = []
        for canvas in ws.canvases.values():
            texts.append(canvas.topic)
            texts.extend(n.text for n in canvas.nodes.values())
        assert count_concepts(ws, GLOSSARY) == \
            count_concepts_bruteforce(texts, GLOSSARY)


class TestCountRevisits:
    def test_canvas_visits_excluded(self):
        events = [(EventKind.NODE_REVISITED,
                   {"node": "n1", "via": RevisitKind.SCROLL_READ.value})] * 3
        events += [(EventKind.CANVAS_VISITED, {"canvas": "c1"})] * 5
        assert count_revisits(make_log(events)) == 3

    def test_empty_log(self):
        assert count_revisits(SessionLog()) == 0

    @given(seed=st.integers(0, 2**32 - 1))
    @settings(max_examples=50, deadline=None)
    def test_matches_filter_oracle(self, seed):
        log = random_log(seed)
        assert count_revisits(log) == count_events(list(log.events),
                                                   "node_revisited")


def random_log(seed: int, max_events: int = 200) -> SessionLog:
    rng = random.Random(seed)
    log = SessionLog()
    kinds = list(EventKind)
    for i in range(rng.randint(0, max_events)):
        kind = rng.choice(kinds)
        data = {
            EventKind.PROMPT_ISSUED: {"template_kind": "questions", "node": f"n{i}"},
            EventKind.NODE_CREATED: {"node": f"n{i}", "kind": "concept"},
            EventKind.EDGE_CREATED: {"edge": f"e{i}"},
            EventKind.CANVAS_CREATED: {"canvas": f"c{i}",
                                       "via": rng.choice(list(CanvasOrigin)).value},
            EventKind.CANVAS_VISITED: {"canvas": f"c{i}"},
            EventKind.NODE_REVISITED: {"node": f"n{i}",
                                       "via": rng.choice(list(RevisitKind)).value},
            EventKind.TEXT_EXTRACTED: {"source": f"n{i}", "new_node": f"n{i+1}"},
            EventKind.GROUP_CREATED: {"group": f"n{i}"},
        }[kind]
        log.record(kind, data, 1000 + i)
    return log


class TestComputeMetrics:
    def test_synthetic_session_counts(self):
        ws = Workspace.new("w", "topic")
        events = [(EventKind.PROMPT_ISSUED,
                   {"template_kind": "raw_prompt", "node": f"n{i}"})
                  for i in range(7)]
        events += [(EventKind.NODE_CREATED, {"node": f"n{i}", "kind": "concept"})
                   for i in range(26)]
        report = compute_metrics(ws, make_log(events), GLOSSARY)
        assert report.prompts == 7
        assert report.nodes == 26

    def test_fresh_workspace_empty_log(self):
        ws = Workspace.new("w", "blank")
        report = compute_metrics(ws, SessionLog(), GLOSSARY)
        assert report.to_dict() == {"prompts": 0, "nodes": 0, "connections": 0,
                                    "concepts": 0, "hierarchy_levels": 1,
                                    "revisits": 0}

    @given(seed=st.integers(0, 2**32 - 1))
    @settings(max_examples=50, deadline=None)
    def test_matches_six_independent_counters(self, seed):
        ws = random_workspace(seed, ops=10)
        log = random_log(seed)
        report = compute_metrics(ws, log, GLOSSARY)
        events = list(log.events)
        texts = []
        for canvas in ws.canvases.values():
            texts.append(canvas.topic)
            texts.extend(n.text for n in canvas.nodes.values())
        from oracles import longest_chain_depth
        assert report.prompts == count_events(events, "prompt_issued")
        assert report.nodes == count_events(events, "node_created")
        assert report.connections == count_events(events, "edge_created")
        assert report.concepts == count_concepts_bruteforce(texts, GLOSSARY)
        assert report.hierarchy_levels == longest_chain_depth(
            dict(ws.hierarchy.parent_of), set(ws.canvases))
        assert report.revisits == count_events(events, "node_revisited")

    def test_purity(self):
        ws = random_workspace(7, ops=12)
        log = random_log(7)
        assert compute_metrics(ws, log, GLOSSARY).to_dict() == \
            compute_metrics(ws, log, GLOSSARY).to_dict()


class TestGlossaryFile:
    def test_load(self, tmp_path):
        path = tmp_path / "terms.txt"
        path.write_text("# AI glossary\nmachine learning\n\nneural network  "
                        "# multiword\ntransformer\n", encoding="utf-8")
        assert load_glossary(path) == ["machine learning", "neural network",
                                       "transformer"]
