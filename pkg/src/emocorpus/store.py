"""Append-only JSON-lines corpus with queries and chain-pattern mining.

One JSON object per line.  Base lines hold whole records; gate updates are
appended as ``{"amend": id, "gate": {...}}`` lines and folded in on replay,
so the log itself is never rewritten.  A lock file enforces the
single-writer contract; read-only opens skip the lock.
"""

from __future__ import annotations

import json
import os
from collections import Counter
from dataclasses import dataclass, replace
from pathlib import Path

from .curation import GateRecord, gate_from_dict, gate_to_dict
from .textmetrics import MetricReport, report_from_dict, report_to_dict
from .transcript import (
    AttitudeChain,
    Dialogue,
    dialogue_from_dict,
    dialogue_to_dict,
    extract_attitude_chain,
)


class StoreError(Exception):
    pass


class DuplicateId(StoreError):
    def __init__(self, record_id: str):
        self.record_id = record_id
        super().__init__(f"record id {record_id!r} already exists")


class StoreLocked(StoreError):
    def __init__(self, path):
        super().__init__(f"another writer holds the lock for {path}")


@dataclass(frozen=True)
class CorpusRecord:
    dialogue: Dialogue
    gate: GateRecord
    chain: AttitudeChain
    metric_report: MetricReport | None = None


@dataclass(frozen=True)
class ChainPattern:
    ngram: tuple[tuple[str, str], ...]
    support: int
    emotion: str | None = None
    cefr: str | None = None


def make_record(dialogue: Dialogue, gate: GateRecord, metric_report: MetricReport | None = None) -> CorpusRecord:
    return CorpusRecord(
        dialogue=dialogue,
        gate=gate,
        chain=extract_attitude_chain(dialogue),
        metric_report=metric_report,
    )


def record_to_dict(record: CorpusRecord) -> dict:
    return {
        "dialogue": dialogue_to_dict(record.dialogue),
        "gate": gate_to_dict(record.gate),
        "chain": [list(entry) for entry in record.chain.entries],
        "metric_report": report_to_dict(record.metric_report) if record.metric_report else None,
    }


def record_from_dict(obj: dict) -> CorpusRecord:
    report = obj.get("metric_report")
    return CorpusRecord(
        dialogue=dialogue_from_dict(obj["dialogue"]),
        gate=gate_from_dict(obj["gate"]),
        chain=AttitudeChain(entries=tuple((role, att) for role, att in obj["chain"])),
        metric_report=report_from_dict(report) if report else None,
    )


class CorpusStore:
    """Single-writer, multi-reader corpus over one JSONL file."""

    def __init__(self, path, read_only: bool = False):
        self.path = Path(path)
        self.read_only = read_only
        self._lock_path = Path(str(self.path) + ".lock")
        self._locked = False
        self._records: dict[str, CorpusRecord] = {}
        if not read_only:
            self._acquire_lock()
        try:
            self._replay()
        except BaseException:
            self.close()
            raise

    def _acquire_lock(self) -> None:
        try:
            fd = os.open(self._lock_path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
        except FileExistsError:
            raise StoreLocked(self.path) from None
        with os.fdopen(fd, "w") as fh:
            fh.write(str(os.getpid()))
        self._locked = True

    def close(self) -> None:
        if self._locked:
            self._lock_path.unlink(missing_ok=True)
            self._locked = False

    def __enter__(self) -> "CorpusStore":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()

    def _replay(self) -> None:
        if not self.path.exists():
            return
        with open(self.path, encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                obj = json.loads(line)
                if "amend" in obj:
                    target = obj["amend"]
                    if target not in self._records:
                        raise StoreError(f"line {line_no}: amendment for unknown record {target!r}")
                    gate = gate_from_dict(obj["gate"])
                    self._records[target] = replace(self._records[target], gate=gate)
                else:
                    record = record_from_dict(obj)
                    rid = record.dialogue.id
                    if rid in self._records:
                        raise DuplicateId(rid)
                    self._records[rid] = record

    def _next_id(self) -> str:
        highest = 0
        for rid in self._records:
            if rid.isdigit():
                highest = max(highest, int(rid))
        return f"{highest + 1:06d}"

    def _append_line(self, obj: dict) -> None:
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(obj, ensure_ascii=False) + "\n")

    def append(self, record: CorpusRecord) -> str:
        """Durably append one record; assigns the next id when unset."""
        if self.read_only:
            raise StoreError("store opened read-only")
        if record.dialogue.meta is None:
            raise StoreError("dialogue metadata must be set before storing")
        rid = record.dialogue.id or self._next_id()
        if rid in self._records:
            raise DuplicateId(rid)
        if rid != record.dialogue.id or record.gate.dialogue_id != rid:
            record = replace(
                record,
                dialogue=replace(record.dialogue, id=rid),
                gate=replace(record.gate, dialogue_id=rid),
            )
        record.dialogue.validate()
        if extract_attitude_chain(record.dialogue).entries != record.chain.entries:
            raise StoreError(f"record {rid!r}: chain does not match the dialogue's turns")
        self._append_line(record_to_dict(record))
        self._records[rid] = record
        return rid

    def amend_gate(self, dialogue_id: str, gate: GateRecord) -> None:
        """Append a gate amendment for an existing record."""
        if self.read_only:
            raise StoreError("store opened read-only")
        if dialogue_id not in self._records:
            raise KeyError(dialogue_id)
        if gate.dialogue_id != dialogue_id:
            raise StoreError(f"gate belongs to {gate.dialogue_id!r}, not {dialogue_id!r}")
        self._append_line({"amend": dialogue_id, "gate": gate_to_dict(gate)})
        self._records[dialogue_id] = replace(self._records[dialogue_id], gate=gate)

    def get(self, dialogue_id: str) -> CorpusRecord:
        return self._records[dialogue_id]

    def __len__(self) -> int:
        return len(self._records)

    def records(self) -> list[CorpusRecord]:
        return sorted(self._records.values(), key=lambda r: r.dialogue.id)

    def query(
        self,
        emotion: str | None = None,
        cefr: str | None = None,
        implicit: bool | None = None,
        disposition: str | None = None,
        qoi: str | None = None,
        role_presence: str | None = None,
    ) -> list[CorpusRecord]:
        """Records matching every supplied predicate, ordered by id."""
        out = []
        for record in self._records.values():
            meta = record.dialogue.meta
            if emotion is not None and meta.target_emotion != emotion:
                continue
            if cefr is not None and meta.cefr != cefr:
                continue
            if implicit is not None and meta.implicit != implicit:
                continue
            if disposition is not None and record.gate.disposition != disposition:
                continue
            if qoi is not None and record.gate.qoi != qoi:
                continue
            if role_presence is not None and all(t.role != role_presence for t in record.dialogue.turns):
                continue
            out.append(record)
        return sorted(out, key=lambda r: r.dialogue.id)

    def mine_chain_patterns(
        self,
        n: int = 2,
        min_support: int = 1,
        emotion: str | None = None,
        cefr: str | None = None,
    ) -> list["ChainPattern"]:
        return mine_chain_patterns(self, n, min_support, emotion, cefr)


def mine_chain_patterns(
    records,
    n: int = 2,
    min_support: int = 1,
    emotion: str | None = None,
    cefr: str | None = None,
) -> list[ChainPattern]:
    """Count contiguous (role, attitude) n-grams over the records' chains.

    Sorted by support descending, ties broken by lexicographic pattern
    order.  ``records`` may be a CorpusStore or any iterable of records.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if min_support < 1:
        raise ValueError("min_support must be at least 1")
    if isinstance(records, CorpusStore):
        records = records.query(emotion=emotion, cefr=cefr)
    else:
        records = [
            r
            for r in records
            if (emotion is None or r.dialogue.meta.target_emotion == emotion)
            and (cefr is None or r.dialogue.meta.cefr == cefr)
        ]
    counts: Counter = Counter()
    for record in records:
        entries = record.chain.entries
        for i in range(len(entries) - n + 1):
            counts[entries[i : i + n]] += 1
    patterns = [
        ChainPattern(ngram=ngram, support=support, emotion=emotion, cefr=cefr)
        for ngram, support in counts.items()
        if support >= min_support
    ]
    patterns.sort(key=lambda p: (-p.support, p.ngram))
    return patterns
