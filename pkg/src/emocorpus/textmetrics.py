"""Tokenization and readability scoring.

Sentence segmentation, word tokenization and syllable counting are
deterministic heuristics pinned here (plus a bundled exceptions table), so
every score is reproducible byte-for-byte.  The four classic formulas use
the published coefficient sets collected in the constants below.
"""

from __future__ import annotations

import math
import re
import statistics
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

# Published coefficient sets.
ARI_COEFFS = (4.71, 0.5, 21.43)  # Senter & Smith, 1967
FRE_COEFFS = (206.835, 1.015, 84.6)  # Flesch, 1948
FKGL_COEFFS = (0.39, 11.8, 15.59)  # Kincaid et al., 1975
NDC_COEFFS = (0.1579, 0.0496, 3.6365)  # Chall & Dale, 1995 (adjustment above 5% difficult)

DEFAULT_ABBREVIATIONS = ("Mr.", "Mrs.", "Dr.", "p.m.", "a.m.", "etc.", "e.g.", "i.e.")

# Closed pronoun list for the sentence-overlap feature.
PRONOUNS = frozenset(
    """i you he she it we they me him her us them my your his its our their
    mine yours hers ours theirs myself yourself himself herself itself
    ourselves yourselves themselves this that these those""".split()
)

_VOWEL_GROUP_RE = re.compile(r"[aeiouy]+")
_WORD_RE = re.compile(r"[A-Za-z0-9]+(?:['’\-.][A-Za-z0-9]+)*")
_TERMINALS = ".!?"


class DegenerateText(Exception):
    """Raised when a text has no words or no sentences to score."""


class UnknownFeature(Exception):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"no feature named {name!r}")


@dataclass(frozen=True)
class TextCounts:
    sentences: int
    words: int
    characters: int
    syllables: int
    difficult_words: int


@dataclass(frozen=True)
class FeatureVector:
    sentence_count: float = 0.0
    avg_word_length_stddev: float = 0.0
    avg_char_entropy: float = 0.0
    temporal_connective_ratio: float = 0.0
    content_lemma_type_count: float = 0.0
    content_lemma_type_ratio: float = 0.0
    noun_pronoun_overlap_next2: float = 0.0
    # Names of resource lists that were absent (their features are zero).
    missing_resources: tuple[str, ...] = ()

    def as_dict(self) -> dict[str, float]:
        return {
            "sentence_count": self.sentence_count,
            "avg_word_length_stddev": self.avg_word_length_stddev,
            "avg_char_entropy": self.avg_char_entropy,
            "temporal_connective_ratio": self.temporal_connective_ratio,
            "content_lemma_type_count": self.content_lemma_type_count,
            "content_lemma_type_ratio": self.content_lemma_type_ratio,
            "noun_pronoun_overlap_next2": self.noun_pronoun_overlap_next2,
        }


@dataclass(frozen=True)
class MetricReport:
    ari: float
    fre: float
    fkgl: float
    ndc: float
    counts: TextCounts
    optional_scores: dict[str, float] = field(default_factory=dict)
    unavailable: dict[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class FeatureResources:
    temporal_connectives: frozenset[str] | None = None
    content_stoplist: frozenset[str] | None = None


@dataclass(frozen=True)
class Combiner:
    """User-supplied linear model over FeatureVector entries."""

    weights: dict[str, float]
    intercept: float = 0.0


@dataclass(frozen=True)
class ScoreConfig:
    easy_words: frozenset[str] = frozenset()
    resources: FeatureResources = FeatureResources()
    combiners: dict[str, Combiner] = field(default_factory=dict)
    abbreviations: tuple[str, ...] = DEFAULT_ABBREVIATIONS


def _abbrev_stems(abbreviations) -> frozenset[str]:
    return frozenset(a.lower().rstrip(".") for a in abbreviations)


def _token_before_dot(text: str, dot: int) -> str:
    start = dot
    while start > 0 and (text[start - 1].isalnum() or text[start - 1] == "."):
        start -= 1
    return text[start:dot]


def segment_sentences(text: str, abbreviations=DEFAULT_ABBREVIATIONS) -> list[str]:
    """Split text into sentences at ., ! or ? followed by whitespace/end.

    A period directly after a listed abbreviation (``p.m.``, ``Dr.`` ...)
    does not split.  End of text closes the final sentence even without a
    terminal mark; empty segments are dropped.
    """
    stems = _abbrev_stems(abbreviations)
    sentences: list[str] = []
    start = 0
    i = 0
    n = len(text)
    while i < n:
        if text[i] in _TERMINALS:
            j = i
            while j + 1 < n and text[j + 1] in _TERMINALS:
                j += 1
            if j + 1 >= n or text[j + 1].isspace():
                if j == i and text[i] == "." and _token_before_dot(text, i).lower() in stems:
                    i += 1
                    continue
                segment = text[start : j + 1].strip()
                if segment:
                    sentences.append(segment)
                start = j + 1
            i = j + 1
        else:
            i += 1
    tail = text[start:].strip()
    if tail:
        sentences.append(tail)
    return sentences


def tokenize_words(text: str, abbreviations=DEFAULT_ABBREVIATIONS) -> list[str]:
    """Maximal runs of letters/digits with internal apostrophes and hyphens.

    Internal periods survive only inside listed abbreviations ("p.m.");
    any other dotted run is split apart.  Case is preserved.
    """
    stems = _abbrev_stems(abbreviations)
    tokens: list[str] = []
    for m in _WORD_RE.finditer(text):
        token = m.group()
        if "." in token and token.lower() not in stems:
            tokens.extend(part for part in token.split(".") if part)
        else:
            tokens.append(token)
    return tokens


@lru_cache(maxsize=1)
def default_syllable_exceptions() -> dict[str, int]:
    """Bundled ``word<TAB>count`` overrides consulted before the heuristic."""
    table: dict[str, int] = {}
    data = resources.files("emocorpus.data").joinpath("syllable_exceptions.txt").read_text("utf-8")
    for line in data.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        word, _, count = line.partition("\t")
        table[word.strip().lower()] = int(count)
    return table


def count_syllables(word: str, exceptions: dict[str, int] | None = None) -> int:
    """Heuristic syllable count, never below 1.

    Counts maximal vowel groups (a e i o u y), drops a terminal silent "e",
    restores it for consonant+"le" endings, and consults the exceptions
    table first.
    """
    w = word.lower()
    if exceptions is None:
        exceptions = default_syllable_exceptions()
    if w in exceptions:
        return exceptions[w]
    groups = len(_VOWEL_GROUP_RE.findall(w))
    if w.endswith("e"):
        groups -= 1
    if len(w) >= 3 and w.endswith("le") and w[-3] not in "aeiouy":
        groups += 1
    return max(1, groups)


def _alnum_len(token: str) -> int:
    return sum(1 for ch in token if ch.isalnum())


def _is_easy(token: str, position: int, easy_words: frozenset[str]) -> bool:
    if position > 0 and token[:1].isupper():
        return True  # mid-sentence capitalization ~ proper noun
    w = token.lower()
    if w in easy_words:
        return True
    for suffix in ("ing", "es", "ed", "s"):
        if w.endswith(suffix) and w[: -len(suffix)] in easy_words:
            return True
    return False


def compute_counts(
    text: str,
    easy_words: frozenset[str] = frozenset(),
    abbreviations=DEFAULT_ABBREVIATIONS,
    syllable_exceptions: dict[str, int] | None = None,
) -> TextCounts:
    """Aggregate sentence/word/syllable/character/difficult-word counts.

    Characters are letters and digits inside word tokens only.  A word is
    difficult unless its lowercase form (or the form with -s/-es/-ed/-ing
    stripped) is in ``easy_words``; mid-sentence capitalized tokens count
    as easy proper nouns.
    """
    sentences = segment_sentences(text, abbreviations)
    words = syllables = characters = difficult = 0
    for sentence in sentences:
        for position, token in enumerate(tokenize_words(sentence, abbreviations)):
            words += 1
            syllables += count_syllables(token, syllable_exceptions)
            characters += _alnum_len(token)
            if not _is_easy(token, position, easy_words):
                difficult += 1
    return TextCounts(
        sentences=len(sentences),
        words=words,
        characters=characters,
        syllables=syllables,
        difficult_words=difficult,
    )


def _guard(counts: TextCounts) -> None:
    if counts.words == 0 or counts.sentences == 0:
        raise DegenerateText(f"cannot score text with {counts.sentences} sentences and {counts.words} words")


def ari(counts: TextCounts) -> float:
    _guard(counts)
    a, b, c = ARI_COEFFS
    return a * (counts.characters / counts.words) + b * (counts.words / counts.sentences) - c


def fre(counts: TextCounts) -> float:
    _guard(counts)
    a, b, c = FRE_COEFFS
    return a - b * (counts.words / counts.sentences) - c * (counts.syllables / counts.words)


def fkgl(counts: TextCounts) -> float:
    _guard(counts)
    a, b, c = FKGL_COEFFS
    return a * (counts.words / counts.sentences) + b * (counts.syllables / counts.words) - c


def ndc(counts: TextCounts) -> float:
    _guard(counts)
    a, b, adjustment = NDC_COEFFS
    pct_difficult = 100.0 * counts.difficult_words / counts.words
    score = a * pct_difficult + b * (counts.words / counts.sentences)
    if pct_difficult > 5.0:
        score += adjustment
    return score


def extract_features(text: str, resources: FeatureResources = FeatureResources()) -> FeatureVector:
    """Text-intrinsic features for the user-weighted readability combiners.

    Lemmas are approximated by lowercase surface forms and "nouns" by
    non-stoplist tokens; features whose resource list is absent come back
    as zero with the resource named in ``missing_resources``.
    """
    sentences = segment_sentences(text)
    sentence_tokens = [tokenize_words(s) for s in sentences]
    all_tokens = [t for tokens in sentence_tokens for t in tokens]
    missing: list[str] = []

    word_length_stddevs = [
        statistics.pstdev([_alnum_len(t) for t in tokens]) for tokens in sentence_tokens if tokens
    ]
    avg_stddev = statistics.fmean(word_length_stddevs) if word_length_stddevs else 0.0

    char_counts = Counter(ch for token in all_tokens for ch in token.lower() if ch.isalnum())
    total_chars = sum(char_counts.values())
    entropy = 0.0
    if total_chars:
        entropy = -sum((c / total_chars) * math.log2(c / total_chars) for c in char_counts.values())

    connective_ratio = 0.0
    if resources.temporal_connectives is None:
        missing.append("temporal_connectives")
    elif all_tokens:
        hits = sum(1 for t in all_tokens if t.lower() in resources.temporal_connectives)
        connective_ratio = hits / len(all_tokens)

    type_count = 0.0
    type_ratio = 0.0
    overlap = 0.0
    if resources.content_stoplist is None:
        missing.append("content_stoplist")
    else:
        stoplist = resources.content_stoplist
        content = [t.lower() for t in all_tokens if t.lower() not in stoplist]
        type_count = float(len(set(content)))
        if content:
            type_ratio = type_count / len(content)
        candidate_sets = [
            {t.lower() for t in tokens if t.lower() in PRONOUNS or t.lower() not in stoplist}
            for tokens in sentence_tokens
        ]
        with_successor = len(candidate_sets) - 1
        if with_successor > 0:
            overlapping = sum(
                1
                for i in range(with_successor)
                if candidate_sets[i] & set().union(*candidate_sets[i + 1 : i + 3])
            )
            overlap = overlapping / with_successor

    return FeatureVector(
        sentence_count=float(len(sentences)),
        avg_word_length_stddev=avg_stddev,
        avg_char_entropy=entropy,
        temporal_connective_ratio=connective_ratio,
        content_lemma_type_count=type_count,
        content_lemma_type_ratio=type_ratio,
        noun_pronoun_overlap_next2=overlap,
        missing_resources=tuple(missing),
    )


def linear_combine(fv: FeatureVector, weights: dict[str, float], intercept: float = 0.0) -> float:
    values = fv.as_dict()
    total = intercept
    for name, weight in weights.items():
        if name not in values:
            raise UnknownFeature(name)
        total += weight * values[name]
    return total


def score_text(text: str, config: ScoreConfig = ScoreConfig()) -> MetricReport:
    """Full MetricReport for one text; raises DegenerateText on empty input."""
    counts = compute_counts(text, config.easy_words, config.abbreviations)
    _guard(counts)
    unavailable = {
        "sbert": "no pretrained readability model bundled",
        "subtlexus_frequency": "frequency corpus not bundled; feature omitted",
        "lemma": "approximated by lowercase surface form",
    }
    optional: dict[str, float] = {}
    if config.combiners:
        fv = extract_features(text, config.resources)
        for name in fv.missing_resources:
            unavailable[name] = "resource_missing"
        for name, combiner in config.combiners.items():
            optional[name] = linear_combine(fv, combiner.weights, combiner.intercept)
    return MetricReport(
        ari=ari(counts),
        fre=fre(counts),
        fkgl=fkgl(counts),
        ndc=ndc(counts),
        counts=counts,
        optional_scores=optional,
        unavailable=unavailable,
    )


def join_texts(texts) -> str:
    """Join utterances with single spaces, closing each as a sentence.

    A terminal mark is appended to fragments that lack one so sentence
    counts stay well-defined across concatenation boundaries.
    """
    parts: list[str] = []
    for text in texts:
        text = text.strip()
        if not text:
            continue
        if text[-1] not in _TERMINALS:
            text += "."
        parts.append(text)
    return " ".join(parts)


def report_to_dict(report: MetricReport) -> dict:
    c = report.counts
    return {
        "ari": report.ari,
        "fre": report.fre,
        "fkgl": report.fkgl,
        "ndc": report.ndc,
        "counts": {
            "sentences": c.sentences,
            "words": c.words,
            "characters": c.characters,
            "syllables": c.syllables,
            "difficult_words": c.difficult_words,
        },
        "optional_scores": dict(report.optional_scores),
        "unavailable": dict(report.unavailable),
    }


def report_from_dict(obj: dict) -> MetricReport:
    return MetricReport(
        ari=obj["ari"],
        fre=obj["fre"],
        fkgl=obj["fkgl"],
        ndc=obj["ndc"],
        counts=TextCounts(**obj["counts"]),
        optional_scores=dict(obj.get("optional_scores", {})),
        unavailable=dict(obj.get("unavailable", {})),
    )


METRIC_CSV_HEADER = "text_id,ari,fre,fkgl,ndc,sentences,words,syllables,characters,difficult"


def metric_csv_row(text_id: str, report: MetricReport) -> str:
    c = report.counts
    return (
        f"{text_id},{report.ari:.4f},{report.fre:.4f},{report.fkgl:.4f},{report.ndc:.4f},"
        f"{c.sentences},{c.words},{c.syllables},{c.characters},{c.difficult_words}"
    )
