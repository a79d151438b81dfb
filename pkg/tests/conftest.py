from __future__ import annotations

from datetime import datetime, timezone

import pytest

from emocorpus.curation import auto_check, record_review
from emocorpus.lexicons import bundled_easy_words, bundled_emotion_lexicon
from emocorpus.store import CorpusStore, make_record
from emocorpus.transcript import (
    AGENT,
    BUNDLED_SAMPLE_NAMES,
    CLIENT,
    Dialogue,
    DialogueMeta,
    Turn,
    bundled_sample_text,
    load_bundled_sample,
)

FIXED_NOW = datetime(2024, 1, 2, 3, 4, 5, tzinfo=timezone.utc)


@pytest.fixture(scope="session")
def lexicon():
    return bundled_emotion_lexicon()


@pytest.fixture(scope="session")
def easy_words():
    return bundled_easy_words().entries


@pytest.fixture(scope="session")
def samples():
    return {name: load_bundled_sample(name) for name in BUNDLED_SAMPLE_NAMES}


@pytest.fixture(scope="session")
def sample_texts():
    return {name: bundled_sample_text(name) for name in BUNDLED_SAMPLE_NAMES}


def make_dialogue(
    dialogue_id="",
    emotion="anger",
    cefr="A2",
    implicit=False,
    turn_specs=None,
):
    """Small synthetic dialogue; turn_specs is a list of (attitude, text).

    The default turns pass both automatic gates for anger at A2: the first
    client label is an anger-lexicon word and the client concatenation's
    FKGL lands inside the default A2 band.
    """
    if turn_specs is None:
        turn_specs = [
            ("furious", "My phone stopped working this morning."),
            ("calm", "I can help you with that."),
            ("tense", "I really need it for my work today."),
            ("helpful", "We will send a technician."),
        ]
    turns = tuple(
        Turn(index=i, role=CLIENT if i % 2 == 0 else AGENT, attitude=attitude, text=text)
        for i, (attitude, text) in enumerate(turn_specs)
    )
    meta = DialogueMeta(
        target_emotion=emotion,
        cefr=cefr,
        implicit=implicit,
        scenario="phone support",
        provider="test",
    )
    return Dialogue(id=dialogue_id, turns=turns, meta=meta)


def accepted_record(lexicon, dialogue, qoi="S"):
    """A stored-shape record graded straight through to accepted."""
    gate = auto_check(dialogue, lexicon, now=FIXED_NOW)
    gate = record_review(
        gate, qoi, reviewer="fixture", emotional_coherence=True, complexity_coherence=True, now=FIXED_NOW
    )
    return make_record(dialogue, gate)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Print one [PASS]/[FAIL] line per acceptance criterion after the run."""
    import sys

    module = sys.modules.get("test_acceptance")
    results = getattr(module, "CRITERIA", None) if module else None
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok in results:
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {name}")


@pytest.fixture
def store_path(tmp_path):
    return tmp_path / "corpus.jsonl"


@pytest.fixture
def open_store(store_path):
    stores = []

    def _open(read_only=False):
        store = CorpusStore(store_path, read_only=read_only)
        stores.append(store)
        return store

    yield _open
    for store in stores:
        store.close()
