from __future__ import annotations

import dataclasses

import pytest
from hypothesis import given
from hypothesis import strategies as st

from emocorpus.transcript import (
    AGENT,
    BUNDLED_SAMPLE_NAMES,
    CLIENT,
    Dialogue,
    DialogueMeta,
    EmptyDialogue,
    InvalidDialogue,
    MalformedLine,
    ParseOptions,
    Turn,
    UnknownSpeaker,
    dialogue_from_dict,
    dialogue_to_dict,
    extract_attitude_chain,
    parse_transcript,
    redact_brands,
    serialize_transcript,
)

from conftest import make_dialogue

SIMPLE = """Client (angry): My phone is dead.
Agent (calm): Let me help you with that.
"""

# Chains printed in the reference dialogues, frozen verbatim.
GOLDEN_CHAINS = {
    "anger_a2": (
        "(Client, angry) -> (Agent, calm) -> (Client, frustrated) -> (Agent, understanding)"
        " -> (Client, irritated) -> (Agent, reassuring) -> (Client, agitated) -> (Agent, confirming)"
        " -> (Client, frustrated) -> (Agent, sympathetic) -> (Client, grudgingly) -> (Agent, apologetic)"
    ),
    "anger_b2": (
        "(Client, angry) -> (Agent, attentive) -> (Client, irritated) -> (Agent, understanding)"
        " -> (Client, exasperated) -> (Agent, sympathetic) -> (Client, aggravated) -> (Agent, confirming)"
        " -> (Client, frustrated) -> (Agent, empathetic) -> (Client, reluctantly) -> (Agent, apologetic)"
    ),
    "anger_c2": (
        "(Client, angry) -> (Agent, attentive) -> (Client, irritated) -> (Agent, understanding)"
        " -> (Client, exasperated) -> (Agent, sympathetic) -> (Client, aggravated) -> (Agent, confirming)"
        " -> (Client, frustrated) -> (Agent, empathetic) -> (Client, reluctantly) -> (Agent, apologetic)"
    ),
    "surprise_a2": (
        "(Client, surprised) -> (Agent, curious) -> (Client, amazed) -> (Agent, concerned)"
        " -> (Client, hesitantly) -> (Agent, confirming) -> (Client, surprised) -> (Agent, encouraging)"
        " -> (Client, surprised) -> (Agent, reassuring)"
    ),
    "surprise_b2": (
        "(Client, surprised) -> (Agent, curious) -> (Client, amazed) -> (Agent, concerned)"
        " -> (Client, hesitant) -> (Agent, confirming) -> (Client, surprised) -> (Agent, encouraging)"
        " -> (Client, surprised) -> (Agent, reassuring)"
    ),
    "surprise_c2": (
        "(Client, surprised) -> (Agent, inquiring) -> (Client, amazed) -> (Agent, concerned)"
        " -> (Client, hesitant) -> (Agent, confirming) -> (Client, surprised) -> (Agent, encouraging)"
        " -> (Client, surprised) -> (Agent, reassuring)"
    ),
}


class TestParse:
    def test_simple(self):
        d = parse_transcript(SIMPLE)
        assert [t.role for t in d.turns] == [CLIENT, AGENT]
        assert [t.attitude for t in d.turns] == ["angry", "calm"]
        assert d.turns[0].text == "My phone is dead."
        assert d.turns[0].index == 0 and d.turns[1].index == 1

    def test_attitude_lowercased(self):
        d = parse_transcript("Client (Angry): Hi.\nAgent (CALM): Hello.\n")
        assert [t.attitude for t in d.turns] == ["angry", "calm"]

    def test_blank_lines_skipped(self):
        d = parse_transcript("\nClient (angry): Hi.\n\nAgent (calm): Hello.\n\n")
        assert len(d.turns) == 2

    def test_malformed_line_number(self):
        with pytest.raises(MalformedLine) as exc:
            parse_transcript("no parens here\n")
        assert exc.value.line_no == 1

    def test_malformed_later_line(self):
        with pytest.raises(MalformedLine) as exc:
            parse_transcript("Client (angry): Hi.\ngarbage\n")
        assert exc.value.line_no == 2

    def test_unknown_speaker(self):
        with pytest.raises(UnknownSpeaker) as exc:
            parse_transcript("Moderator (neutral): Welcome.\n")
        assert exc.value.speaker == "Moderator"
        assert exc.value.line_no == 1

    def test_empty_input(self):
        with pytest.raises(EmptyDialogue):
            parse_transcript("\n\n")

    def test_speaker_aliases(self):
        options = ParseOptions(aliases={"Customer": CLIENT, "Support": AGENT})
        d = parse_transcript("Customer (angry): Hi.\nSupport (calm): Hello.\n", options)
        assert [t.role for t in d.turns] == [CLIENT, AGENT]


class TestSerialize:
    def test_exact_format(self):
        d = parse_transcript(SIMPLE)
        assert serialize_transcript(d) == SIMPLE

    def test_bundled_samples_round_trip_bytes(self, sample_texts):
        for name, text in sample_texts.items():
            assert serialize_transcript(parse_transcript(text)) == text, name

    @given(
        st.lists(
            st.tuples(
                st.sampled_from([CLIENT, AGENT]),
                st.from_regex(r"[a-z]+(?: [a-z]+)?", fullmatch=True),
                st.text(
                    alphabet=st.characters(
                        codec="ascii", exclude_characters="\n\r", categories=("L", "N", "P", "Zs")
                    ),
                    min_size=1,
                ).filter(lambda s: s == s.strip() and s.strip()),
            ),
            min_size=1,
            max_size=8,
        )
    )
    def test_round_trip_random(self, rows):
        turns = tuple(Turn(i, role, attitude, text) for i, (role, attitude, text) in enumerate(rows))
        d = Dialogue(id="x", turns=turns)
        parsed = parse_transcript(serialize_transcript(d))
        assert parsed.turns == turns


class TestValidate:
    def test_bundled_samples_valid(self, samples):
        for d in samples.values():
            d.validate()

    def test_first_role_must_be_client(self):
        d = parse_transcript("Agent (calm): Hello.\nClient (angry): Hi.\n")
        with pytest.raises(InvalidDialogue):
            d.validate()
        d.validate(first_role=AGENT)

    def test_no_turns(self):
        with pytest.raises(InvalidDialogue):
            Dialogue(id="x", turns=()).validate()

    def test_uppercase_attitude_rejected(self):
        d = Dialogue(id="x", turns=(Turn(0, CLIENT, "Angry", "Hi."),))
        with pytest.raises(InvalidDialogue):
            d.validate()

    def test_gap_in_indexes(self):
        turns = (Turn(0, CLIENT, "angry", "Hi."), Turn(2, AGENT, "calm", "Hello."))
        with pytest.raises(InvalidDialogue):
            Dialogue(id="x", turns=turns).validate()


class TestChains:
    def test_golden_chains(self, samples):
        for name in BUNDLED_SAMPLE_NAMES:
            assert str(extract_attitude_chain(samples[name])) == GOLDEN_CHAINS[name], name

    def test_chain_length_matches_turns(self, samples):
        for d in samples.values():
            assert len(extract_attitude_chain(d).entries) == len(d.turns)


class TestRedaction:
    def test_replaces_whole_words_case_insensitive(self):
        d = make_dialogue(turn_specs=[("upset", "My ACME x200 broke."), ("calm", "The Acme X200 is known to us.")])
        r = redact_brands(d, ["Acme X200"])
        assert r.turns[0].text == "My Brand Model broke."
        assert r.turns[1].text == "The Brand Model is known to us."

    def test_longest_name_wins(self):
        d = make_dialogue(turn_specs=[("upset", "I own an Acme X200 Pro."), ("calm", "Noted.")])
        r = redact_brands(d, ["Acme X200", "Acme X200 Pro"])
        assert r.turns[0].text == "I own an Brand Model."

    def test_no_partial_word_hits(self):
        d = make_dialogue(turn_specs=[("upset", "The Acmeish one."), ("calm", "Noted.")])
        r = redact_brands(d, ["Acme"])
        assert r.turns[0].text == "The Acmeish one."

    def test_flexible_whitespace(self):
        d = make_dialogue(turn_specs=[("upset", "My Acme  X200 is broken."), ("calm", "Noted.")])
        r = redact_brands(d, ["Acme X200"])
        assert r.turns[0].text == "My Brand Model is broken."

    def test_idempotent(self):
        d = make_dialogue(turn_specs=[("upset", "My Acme X200 is broken."), ("calm", "Noted.")])
        once = redact_brands(d, ["Acme X200"])
        twice = redact_brands(once, ["Acme X200"])
        assert once.turns == twice.turns

    def test_placeholder_untouched(self, samples):
        d = samples["anger_b2"]
        r = redact_brands(d, ["Acme X200"])
        assert r.turns == d.turns


class TestDictRoundTrip:
    def test_with_meta(self):
        d = make_dialogue(dialogue_id="000042")
        assert dialogue_from_dict(dialogue_to_dict(d)) == d

    def test_without_meta(self):
        d = parse_transcript(SIMPLE)
        assert dialogue_from_dict(dialogue_to_dict(d)) == d

    def test_meta_validation(self):
        with pytest.raises(ValueError):
            DialogueMeta(target_emotion="bliss", cefr="B2")
        with pytest.raises(ValueError):
            DialogueMeta(target_emotion="anger", cefr="B1")


class TestClientTurns:
    def test_roles_partition(self, samples):
        d = samples["anger_a2"]
        client = d.client_turns()
        agent = d.client_turns(role=AGENT)
        assert len(client) + len(agent) == len(d.turns)
        assert all(t.role == CLIENT for t in client)
        assert [t.index for t in client] == [0, 2, 4, 6, 8, 10]
