"""Dialogue data model and the labeled transcript text format.

The canonical transcript format is line oriented: one turn per line,
``Role (attitude): utterance text``, UTF-8, LF endings.  Blank lines are
ignored.  Attitude labels are normalized to lowercase at parse time so
downstream chain mining is case-insensitive.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone

EMOTIONS = ("joy", "sadness", "anger", "fear", "surprise", "disgust")
CEFR_LEVELS = ("A2", "B2", "C2")

CLIENT = "Client"
AGENT = "Agent"

BRAND_PLACEHOLDER = "Brand Model"


class TranscriptError(Exception):
    """Base class for transcript parsing/validation failures."""


class MalformedLine(TranscriptError):
    def __init__(self, line_no: int, line: str):
        self.line_no = line_no
        self.line = line
        super().__init__(f"line {line_no} does not match 'Speaker (attitude): text': {line!r}")


class UnknownSpeaker(TranscriptError):
    def __init__(self, line_no: int, speaker: str):
        self.line_no = line_no
        self.speaker = speaker
        super().__init__(f"line {line_no}: speaker {speaker!r} is not an allowed speaker token")


class EmptyDialogue(TranscriptError):
    def __init__(self):
        super().__init__("no turns parsed from input")


class InvalidDialogue(TranscriptError):
    pass


_LINE_RE = re.compile(r"^(?P<speaker>[^():]+?)\s*\(\s*(?P<attitude>[^()]*?)\s*\)\s*:\s*(?P<text>.*)$")
_ATTITUDE_RE = re.compile(r"[a-z][a-z -]*")


@dataclass(frozen=True)
class Turn:
    index: int
    role: str
    attitude: str
    text: str


@dataclass(frozen=True)
class DialogueMeta:
    target_emotion: str
    cefr: str
    implicit: bool = False
    scenario: str = ""
    provider: str = ""
    created_at: datetime = field(default_factory=lambda: datetime.now(timezone.utc))

    def __post_init__(self):
        if self.target_emotion not in EMOTIONS:
            raise ValueError(f"unknown emotion {self.target_emotion!r}; expected one of {EMOTIONS}")
        if self.cefr not in CEFR_LEVELS:
            raise ValueError(f"unknown CEFR level {self.cefr!r}; expected one of {CEFR_LEVELS}")


@dataclass(frozen=True)
class Dialogue:
    id: str
    turns: tuple[Turn, ...]
    meta: DialogueMeta | None = None

    def validate(self, first_role: str = CLIENT) -> None:
        """Raise InvalidDialogue unless the structural invariants hold."""
        if not self.turns:
            raise InvalidDialogue("dialogue has no turns")
        for i, turn in enumerate(self.turns):
            if turn.index != i:
                raise InvalidDialogue(f"turn indexes not contiguous at position {i}")
            if not turn.text.strip():
                raise InvalidDialogue(f"turn {i} has empty text")
            if "\n" in turn.text:
                raise InvalidDialogue(f"turn {i} text contains a newline")
            if not _ATTITUDE_RE.fullmatch(turn.attitude):
                raise InvalidDialogue(f"turn {i} attitude {turn.attitude!r} is not a lowercase label")
        roles = {t.role for t in self.turns}
        if len(roles) > 2:
            raise InvalidDialogue(f"more than two roles: {sorted(roles)}")
        if first_role and self.turns[0].role != first_role:
            raise InvalidDialogue(f"first turn role is {self.turns[0].role!r}, expected {first_role!r}")

    def client_turns(self, role: str = CLIENT) -> tuple[Turn, ...]:
        return tuple(t for t in self.turns if t.role == role)


@dataclass(frozen=True)
class AttitudeChain:
    entries: tuple[tuple[str, str], ...]

    def __str__(self) -> str:
        return " -> ".join(f"({role}, {attitude})" for role, attitude in self.entries)


@dataclass(frozen=True)
class ParseOptions:
    """Speaker configuration for parsing.

    ``speakers`` is the allowed (customer-side, agent-side) token pair;
    ``aliases`` maps accepted variants (e.g. "Customer") onto one of them.
    """

    speakers: tuple[str, str] = (CLIENT, AGENT)
    aliases: dict[str, str] = field(default_factory=dict)

    def resolve(self, token: str) -> str | None:
        token = self.aliases.get(token, token)
        return token if token in self.speakers else None


DEFAULT_PARSE_OPTIONS = ParseOptions()


def parse_transcript(text: str, options: ParseOptions = DEFAULT_PARSE_OPTIONS) -> Dialogue:
    """Parse canonical transcript text into a Dialogue with unset metadata.

    Every non-blank line must match ``Speaker (attitude): text``; the caller
    fills in id and meta afterwards.
    """
    turns: list[Turn] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        m = _LINE_RE.match(line)
        if m is None:
            raise MalformedLine(line_no, raw)
        role = options.resolve(m.group("speaker").strip())
        if role is None:
            raise UnknownSpeaker(line_no, m.group("speaker").strip())
        attitude = m.group("attitude").strip().lower()
        utterance = m.group("text").strip()
        if not utterance or not _ATTITUDE_RE.fullmatch(attitude):
            raise MalformedLine(line_no, raw)
        turns.append(Turn(index=len(turns), role=role, attitude=attitude, text=utterance))
    if not turns:
        raise EmptyDialogue()
    return Dialogue(id="", turns=tuple(turns))


def serialize_transcript(d: Dialogue) -> str:
    """Render a Dialogue back to canonical transcript text (inverse of parse)."""
    return "".join(f"{t.role} ({t.attitude}): {t.text}\n" for t in d.turns)


def extract_attitude_chain(d: Dialogue) -> AttitudeChain:
    """The ordered (role, attitude) sequence across the dialogue's turns."""
    return AttitudeChain(entries=tuple((t.role, t.attitude) for t in d.turns))


def _brand_pattern(patterns: list[str]) -> re.Pattern | None:
    # Longest pattern first so overlapping denylist entries prefer the full match.
    parts = [p for p in (p.strip() for p in patterns) if p]
    if not parts:
        return None
    parts.sort(key=len, reverse=True)
    alternation = "|".join(r"\s+".join(re.escape(w) for w in p.split()) for p in parts)
    return re.compile(rf"\b(?:{alternation})\b", re.IGNORECASE)


def redact_brands(d: Dialogue, denylist: list[str]) -> Dialogue:
    """Replace every denylisted brand mention in turn texts with ``Brand Model``.

    Patterns are matched as case-insensitive word sequences; attitude labels
    are never touched.  With an empty denylist the dialogue is returned as is.
    """
    pattern = _brand_pattern(denylist)
    if pattern is None:
        return d
    turns = tuple(
        replace(t, text=pattern.sub(BRAND_PLACEHOLDER, t.text)) for t in d.turns
    )
    return replace(d, turns=turns)


BUNDLED_SAMPLE_NAMES = (
    "anger_a2",
    "anger_b2",
    "anger_c2",
    "surprise_a2",
    "surprise_b2",
    "surprise_c2",
)


def bundled_sample_text(name: str) -> str:
    from importlib import resources

    if name not in BUNDLED_SAMPLE_NAMES:
        raise KeyError(f"no bundled sample named {name!r}")
    return resources.files("emocorpus.data").joinpath(f"samples/{name}.txt").read_text("utf-8")


def load_bundled_sample(name: str) -> Dialogue:
    """One of the six bundled reference dialogues, with metadata from its name."""
    emotion, _, cefr = name.partition("_")
    d = parse_transcript(bundled_sample_text(name))
    meta = DialogueMeta(target_emotion=emotion, cefr=cefr.upper(), implicit=False, scenario="phone support", provider="reference")
    return replace(d, id=name, meta=meta)


def dialogue_to_dict(d: Dialogue) -> dict:
    """Corpus interchange form: one JSON-able dict per dialogue."""
    meta = None
    if d.meta is not None:
        meta = {
            "target_emotion": d.meta.target_emotion,
            "cefr": d.meta.cefr,
            "implicit": d.meta.implicit,
            "scenario": d.meta.scenario,
            "provider": d.meta.provider,
            "created_at": d.meta.created_at.isoformat(),
        }
    return {
        "id": d.id,
        "meta": meta,
        "turns": [{"role": t.role, "attitude": t.attitude, "text": t.text} for t in d.turns],
    }


def dialogue_from_dict(obj: dict) -> Dialogue:
    meta = None
    if obj.get("meta") is not None:
        m = obj["meta"]
        meta = DialogueMeta(
            target_emotion=m["target_emotion"],
            cefr=m["cefr"],
            implicit=bool(m.get("implicit", False)),
            scenario=m.get("scenario", ""),
            provider=m.get("provider", ""),
            created_at=datetime.fromisoformat(m["created_at"]),
        )
    turns = tuple(
        Turn(index=i, role=t["role"], attitude=t["attitude"], text=t["text"])
        for i, t in enumerate(obj["turns"])
    )
    return Dialogue(id=obj["id"], turns=turns, meta=meta)
