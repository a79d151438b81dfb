"""Randomized turn-aggregation readability experiments.

Turns of one role are drawn uniformly without replacement and appended
until the next drawn turn would push the total past the word cap; that
turn is excluded and sampling stops.  Repeated seeded runs per stratum
yield mean and sample standard deviation per metric.  A second analysis
merges whole dialogues per CEFR level, split by explicit/implicit mode.
"""

from __future__ import annotations

import hashlib
import random
import statistics
from dataclasses import dataclass

from .curation import ACCEPTED
from .textmetrics import MetricReport, ScoreConfig, join_texts, score_text, tokenize_words


class SamplerError(Exception):
    pass


class EmptyStratum(SamplerError):
    def __init__(self, label: str):
        self.label = label
        super().__init__(f"no accepted material in stratum {label!r}")


class CapTooSmall(SamplerError):
    def __init__(self, label: str, first_words: int, cap: int):
        super().__init__(f"stratum {label!r}: first drawn turn has {first_words} words, cap is {cap}")


@dataclass(frozen=True)
class Stratum:
    """A (cefr, role) slice for turn sampling, or (cefr, implicit) for merges."""

    cefr: str
    role: str | None = None
    implicit: bool | None = None

    @property
    def label(self) -> str:
        if self.role is not None:
            return f"{self.cefr}/{self.role}"
        if self.implicit is not None:
            return f"{self.cefr}/{'implicit' if self.implicit else 'explicit'}"
        return self.cefr


@dataclass(frozen=True)
class SampleRun:
    stratum: Stratum
    seed: int
    included: tuple[tuple[str, int], ...]  # (dialogue id, turn index) in draw order
    word_count: int
    report: MetricReport


@dataclass(frozen=True)
class AggregateStats:
    stratum: Stratum
    metric: str
    run_count: int
    mean: float
    stddev: float


METRICS = ("ari", "fre", "fkgl", "ndc")


def derive_seed(base_seed: int, *parts) -> int:
    """Deterministic per-run seed, stable across processes (no hash salting)."""
    material = ":".join([str(base_seed), *map(str, parts)]).encode("utf-8")
    return int.from_bytes(hashlib.sha256(material).digest()[:8], "big")


def _turn_pool(records, stratum: Stratum) -> list[tuple[str, int, str]]:
    pool = []
    for record in records:
        meta = record.dialogue.meta
        if record.gate.disposition != ACCEPTED or meta.cefr != stratum.cefr:
            continue
        if stratum.implicit is not None and meta.implicit != stratum.implicit:
            continue
        for turn in record.dialogue.turns:
            if turn.role == stratum.role:
                pool.append((record.dialogue.id, turn.index, turn.text))
    return pool


def build_sample(
    records,
    stratum: Stratum,
    seed: int,
    cap: int = 1000,
    score_config: ScoreConfig = ScoreConfig(),
    skip_overflow: bool = False,
) -> SampleRun:
    """One seeded draw for a (cefr, role) stratum under the word cap.

    Default stopping rule: the first overflowing turn ends the draw.  With
    ``skip_overflow`` the overflowing turn is dropped and later draws may
    still be included (sensitivity-analysis mode).
    """
    if stratum.role is None:
        raise ValueError("turn sampling needs a stratum with a role")
    pool = _turn_pool(records, stratum)
    if not pool:
        raise EmptyStratum(stratum.label)
    order = list(range(len(pool)))
    random.Random(seed).shuffle(order)
    included: list[tuple[str, int]] = []
    texts: list[str] = []
    total = 0
    for position, index in enumerate(order):
        dialogue_id, turn_index, text = pool[index]
        words = len(tokenize_words(text))
        if total + words > cap:
            if position == 0:
                raise CapTooSmall(stratum.label, words, cap)
            if skip_overflow:
                continue
            break
        included.append((dialogue_id, turn_index))
        texts.append(text)
        total += words
    report = score_text(join_texts(texts), score_config)
    return SampleRun(
        stratum=stratum,
        seed=seed,
        included=tuple(included),
        word_count=total,
        report=report,
    )


def _metric_values(report: MetricReport) -> dict[str, float]:
    values = {"ari": report.ari, "fre": report.fre, "fkgl": report.fkgl, "ndc": report.ndc}
    values.update(report.optional_scores)
    return values


def run_experiment(
    records,
    strata,
    runs_per_stratum: int = 10,
    base_seed: int = 0,
    cap: int = 1000,
    score_config: ScoreConfig = ScoreConfig(),
    skip_overflow: bool = False,
) -> tuple[list[AggregateStats], list[tuple[Stratum, str]]]:
    """Mean and sample standard deviation per (stratum, metric) over seeded runs.

    Empty strata are skipped and reported in the second return value rather
    than aborting the experiment.
    """
    if runs_per_stratum < 2:
        raise ValueError("runs_per_stratum must be at least 2")
    records = list(records.records() if hasattr(records, "records") else records)
    stats: list[AggregateStats] = []
    skipped: list[tuple[Stratum, str]] = []
    for stratum in strata:
        try:
            runs = [
                build_sample(
                    records,
                    stratum,
                    derive_seed(base_seed, stratum.label, i),
                    cap,
                    score_config,
                    skip_overflow,
                )
                for i in range(runs_per_stratum)
            ]
        except EmptyStratum as exc:
            skipped.append((stratum, str(exc)))
            continue
        series: dict[str, list[float]] = {}
        for run in runs:
            for metric, value in _metric_values(run.report).items():
                series.setdefault(metric, []).append(value)
        for metric, values in series.items():
            stats.append(
                AggregateStats(
                    stratum=stratum,
                    metric=metric,
                    run_count=len(values),
                    mean=statistics.fmean(values),
                    stddev=statistics.stdev(values),
                )
            )
    return stats, skipped


def run_explicit_vs_implicit(records, cefr: str, score_config: ScoreConfig = ScoreConfig()) -> dict[str, MetricReport]:
    """Whole-dialogue merge per mode at one CEFR level, scored once each.

    Dialogues are merged in id order so the concatenation is reproducible.
    """
    records = list(records.records() if hasattr(records, "records") else records)
    reports: dict[str, MetricReport] = {}
    for mode, flag in (("explicit", False), ("implicit", True)):
        dialogues = sorted(
            (
                r.dialogue
                for r in records
                if r.gate.disposition == ACCEPTED and r.dialogue.meta.cefr == cefr and r.dialogue.meta.implicit == flag
            ),
            key=lambda d: d.id,
        )
        if not dialogues:
            raise EmptyStratum(f"{cefr}/{mode}")
        text = join_texts(turn.text for dialogue in dialogues for turn in dialogue.turns)
        reports[mode] = score_text(text, score_config)
    return reports


EXPERIMENT_CSV_HEADER = "stratum,metric,run_count,mean,stddev"


def experiment_csv(stats) -> str:
    lines = [EXPERIMENT_CSV_HEADER]
    lines += [
        f"{s.stratum.label},{s.metric},{s.run_count},{s.mean:.6f},{s.stddev:.6f}" for s in stats
    ]
    return "\n".join(lines) + "\n"


MODES_CSV_HEADER = "cefr,mode,metric,value"


def explicit_vs_implicit_csv(results: dict[str, dict[str, MetricReport]]) -> str:
    """CSV over ``{cefr: {mode: report}}`` for the whole-dialogue analysis."""
    lines = [MODES_CSV_HEADER]
    for cefr in sorted(results):
        for mode in ("explicit", "implicit"):
            report = results[cefr][mode]
            for metric, value in _metric_values(report).items():
                lines.append(f"{cefr},{mode},{metric},{value:.6f}")
    return "\n".join(lines) + "\n"
