"""Quality gates: automatic coherence checks, lexical enforcement for
implicit-emotion dialogues, and the human quality-of-interaction review.

The automatic checks only pre-fill booleans and evidence; the reviewer's
grade decides the final disposition.  Dispositions are write-once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from datetime import datetime, timezone

from .lexicons import EmotionLexicon
from .textmetrics import DegenerateText, compute_counts, fkgl, join_texts, tokenize_words
from .transcript import CEFR_LEVELS, CLIENT, Dialogue

QOI_GRADES = ("S", "A", "F")

PENDING = "pending"
ACCEPTED = "accepted"
REJECTED = "rejected"
DISPOSITIONS = (PENDING, ACCEPTED, REJECTED)


class CurationError(Exception):
    pass


class AlreadyDisposed(CurationError):
    def __init__(self, dialogue_id: str, disposition: str):
        self.dialogue_id = dialogue_id
        self.disposition = disposition
        super().__init__(f"dialogue {dialogue_id!r} is already {disposition}")


class InvalidGrade(CurationError):
    def __init__(self, qoi):
        self.qoi = qoi
        super().__init__(f"grade must be one of {QOI_GRADES}, got {qoi!r}")


@dataclass(frozen=True)
class GateRecord:
    dialogue_id: str
    emotional_coherence: bool | None = None
    complexity_coherence: bool | None = None
    ied_violations: tuple[tuple[int, str], ...] = ()
    emotion_evidence: str = ""
    fkgl: float | None = None
    qoi: str | None = None
    reviewer: str | None = None
    auto_checked_at: datetime | None = None
    reviewed_at: datetime | None = None
    disposition: str = PENDING

    def __post_init__(self):
        if self.qoi is not None and self.qoi not in QOI_GRADES:
            raise InvalidGrade(self.qoi)
        if self.disposition not in DISPOSITIONS:
            raise ValueError(f"unknown disposition {self.disposition!r}")
        if (self.qoi is None) != (self.reviewed_at is None):
            raise ValueError("reviewed_at must be set exactly when qoi is set")
        if (self.disposition == PENDING) != (self.qoi is None):
            raise ValueError("a record is pending exactly until it carries a grade")
        if self.disposition == ACCEPTED and not (
            self.emotional_coherence and self.complexity_coherence and self.qoi in ("S", "A")
        ):
            raise ValueError("accepted requires both coherences true and qoi S or A")
        if self.qoi == "F" and self.disposition != REJECTED:
            raise ValueError("qoi F forces disposition rejected")


@dataclass(frozen=True)
class CefrBandTable:
    """Inclusive FKGL interval per CEFR level, ordered and non-overlapping."""

    bands: dict[str, tuple[float, float]]

    def __post_init__(self):
        missing = [level for level in CEFR_LEVELS if level not in self.bands]
        if missing:
            raise ValueError(f"bands missing levels {missing}")
        for level, (lo, hi) in self.bands.items():
            if not lo <= hi:
                raise ValueError(f"band {level} is empty: [{lo}, {hi}]")
        for lower, upper in zip(CEFR_LEVELS, CEFR_LEVELS[1:]):
            if not self.bands[lower][1] < self.bands[upper][0]:
                raise ValueError(f"bands {lower} and {upper} overlap or are out of order")

    def interval(self, level: str) -> tuple[float, float]:
        return self.bands[level]

    def contains(self, level: str, value: float) -> bool:
        lo, hi = self.bands[level]
        return lo <= value <= hi


# Heuristic defaults; configurable, reported alongside raw FKGL, and never
# treated as ground truth.  Lower bounds sit one ulp above the previous
# band's top so the inclusive intervals stay disjoint.
DEFAULT_BANDS = CefrBandTable(
    {
        "A2": (0.0, 5.0),
        "B2": (math.nextafter(5.0, math.inf), 9.0),
        "C2": (math.nextafter(9.0, math.inf), math.inf),
    }
)


def check_emotional_coherence(
    d: Dialogue, lexicon: EmotionLexicon, any_client_turn: bool = False
) -> tuple[bool, str]:
    """Does a Client attitude label name (or lexically match) the target emotion?

    By default only the first Client turn's label counts, as in the reference
    dialogues; ``any_client_turn`` widens the search for implicit dialogues
    whose opening label may be a near-synonym.
    """
    target = d.meta.target_emotion
    words = lexicon.words(target)
    labels = [t.attitude for t in d.client_turns()]
    if not any_client_turn:
        labels = labels[:1]
    for label in labels:
        if label == target or label in words:
            return True, label
    return False, ""


def check_ied(d: Dialogue, lexicon: EmotionLexicon) -> tuple[tuple[int, str], ...]:
    """Whole-word hits of the target emotion's lexicon in Client utterances.

    Attitude labels are exempt: the ban covers what the client says, not the
    annotation metadata.  An empty result means the dialogue passes.
    """
    banned = lexicon.words(d.meta.target_emotion)
    violations: list[tuple[int, str]] = []
    for turn in d.turns:
        if turn.role != CLIENT:
            continue
        for token in tokenize_words(turn.text):
            hit = (turn.index, token.lower())
            if token.lower() in banned and hit not in violations:
                violations.append(hit)
    return tuple(violations)


def check_complexity_coherence(d: Dialogue, bands: CefrBandTable = DEFAULT_BANDS) -> tuple[bool, float]:
    """FKGL of the concatenated Client utterances, tested against the level's band."""
    text = join_texts(t.text for t in d.client_turns())
    counts = compute_counts(text)
    value = fkgl(counts)
    return bands.contains(d.meta.cefr, value), value


def disposition(emotional_coherence: bool | None, complexity_coherence: bool | None, qoi: str | None) -> str:
    """Final disposition as a pure function of the three gate inputs.

    Unset coherence counts as not-true: acceptance needs explicit passes.
    """
    if qoi is None:
        return PENDING
    if qoi == "F":
        return REJECTED
    if emotional_coherence and complexity_coherence and qoi in ("S", "A"):
        return ACCEPTED
    return REJECTED


def auto_check(
    d: Dialogue,
    lexicon: EmotionLexicon,
    bands: CefrBandTable = DEFAULT_BANDS,
    any_client_turn: bool | None = None,
    now: datetime | None = None,
) -> GateRecord:
    """Run all automatic gates and return a pending GateRecord with evidence."""
    if any_client_turn is None:
        any_client_turn = bool(d.meta and d.meta.implicit)
    coherent, evidence = check_emotional_coherence(d, lexicon, any_client_turn)
    violations = check_ied(d, lexicon) if d.meta.implicit else ()
    in_band, measured = check_complexity_coherence(d, bands)
    return GateRecord(
        dialogue_id=d.id,
        emotional_coherence=coherent,
        complexity_coherence=in_band,
        ied_violations=violations,
        emotion_evidence=evidence,
        fkgl=measured,
        auto_checked_at=now or datetime.now(timezone.utc),
    )


def record_review(
    rec: GateRecord,
    qoi: str,
    reviewer: str = "",
    emotional_coherence: bool | None = None,
    complexity_coherence: bool | None = None,
    now: datetime | None = None,
) -> GateRecord:
    """Apply a human grade (with optional coherence overrides) to a pending record."""
    if rec.disposition != PENDING:
        raise AlreadyDisposed(rec.dialogue_id, rec.disposition)
    if qoi not in QOI_GRADES:
        raise InvalidGrade(qoi)
    ec = rec.emotional_coherence if emotional_coherence is None else emotional_coherence
    cc = rec.complexity_coherence if complexity_coherence is None else complexity_coherence
    return replace(
        rec,
        emotional_coherence=ec,
        complexity_coherence=cc,
        qoi=qoi,
        reviewer=reviewer,
        reviewed_at=now or datetime.now(timezone.utc),
        disposition=disposition(ec, cc, qoi),
    )


def gate_to_dict(rec: GateRecord) -> dict:
    return {
        "dialogue_id": rec.dialogue_id,
        "emotional_coherence": rec.emotional_coherence,
        "complexity_coherence": rec.complexity_coherence,
        "ied_violations": [list(v) for v in rec.ied_violations],
        "emotion_evidence": rec.emotion_evidence,
        "fkgl": rec.fkgl,
        "qoi": rec.qoi,
        "reviewer": rec.reviewer,
        "auto_checked_at": rec.auto_checked_at.isoformat() if rec.auto_checked_at else None,
        "reviewed_at": rec.reviewed_at.isoformat() if rec.reviewed_at else None,
        "disposition": rec.disposition,
    }


def gate_from_dict(obj: dict) -> GateRecord:
    def _ts(value):
        return datetime.fromisoformat(value) if value else None

    return GateRecord(
        dialogue_id=obj["dialogue_id"],
        emotional_coherence=obj.get("emotional_coherence"),
        complexity_coherence=obj.get("complexity_coherence"),
        ied_violations=tuple((int(i), w) for i, w in obj.get("ied_violations", [])),
        emotion_evidence=obj.get("emotion_evidence", ""),
        fkgl=obj.get("fkgl"),
        qoi=obj.get("qoi"),
        reviewer=obj.get("reviewer"),
        auto_checked_at=_ts(obj.get("auto_checked_at")),
        reviewed_at=_ts(obj.get("reviewed_at")),
        disposition=obj.get("disposition", PENDING),
    )


GATE_CSV_HEADER = "dialogue_id,emotion,cefr,implicit,emotional_coherence,complexity_coherence,qoi,disposition"


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def gate_csv_row(d: Dialogue, rec: GateRecord) -> str:
    return ",".join(
        [
            rec.dialogue_id,
            d.meta.target_emotion,
            d.meta.cefr,
            _cell(d.meta.implicit),
            _cell(rec.emotional_coherence),
            _cell(rec.complexity_coherence),
            _cell(rec.qoi),
            rec.disposition,
        ]
    )
