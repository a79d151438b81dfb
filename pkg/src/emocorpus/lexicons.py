"""Word-list resources: easy words, per-emotion denylists, connectives, brands.

All lists share one file format: UTF-8, one entry per line, ``#`` comments
allowed, entries lowercased and deduplicated on load.  The bundled seed
lexicons are curated defaults; rigorous work should supply project-specific
files via configuration.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .transcript import EMOTIONS


class LexiconError(Exception):
    """Base class for word-list loading failures."""


class EmptyList(LexiconError):
    def __init__(self, source: str):
        self.source = source
        super().__init__(f"word list {source!r} has no entries")


class InvalidEntry(LexiconError):
    def __init__(self, source: str, entry: str, reason: str):
        self.entry = entry
        super().__init__(f"word list {source!r}: bad entry {entry!r} ({reason})")


class MissingEmotionFile(LexiconError):
    def __init__(self, emotion: str):
        self.emotion = emotion
        super().__init__(f"no word list for emotion {emotion!r}")


class DuplicateAcrossEmotions(LexiconError):
    def __init__(self, word: str, first: str, second: str):
        self.word = word
        self.emotions = (first, second)
        super().__init__(f"word {word!r} listed under both {first!r} and {second!r}")


@dataclass(frozen=True)
class WordList:
    name: str
    entries: frozenset[str]
    source_path: str = ""
    checksum: str = ""

    def __contains__(self, word: str) -> bool:
        return word.lower() in self.entries

    def __len__(self) -> int:
        return len(self.entries)


def word_list_from_text(text: str, name: str, source: str = "", allow_phrases: bool = False) -> WordList:
    """Build a WordList from raw file text; checksum covers the exact bytes."""
    entries: set[str] = set()
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        entry = " ".join(line.lower().split())
        if " " in entry and not allow_phrases:
            raise InvalidEntry(source or name, raw.strip(), "whitespace inside a single-word entry")
        entries.add(entry)
    if not entries:
        raise EmptyList(source or name)
    checksum = hashlib.sha256(text.encode("utf-8")).hexdigest()
    return WordList(name=name, entries=frozenset(entries), source_path=source, checksum=checksum)


def load_word_list(path: str | Path, name: str | None = None, allow_phrases: bool = False) -> WordList:
    path = Path(path)
    text = path.read_text("utf-8")
    return word_list_from_text(text, name or path.stem, str(path), allow_phrases)


@dataclass(frozen=True)
class EmotionLexicon:
    lists: dict[str, WordList]

    def __post_init__(self):
        for emotion in EMOTIONS:
            if emotion not in self.lists:
                raise MissingEmotionFile(emotion)
        owner: dict[str, str] = {}
        for emotion in EMOTIONS:
            for word in sorted(self.lists[emotion].entries):
                if word in owner:
                    raise DuplicateAcrossEmotions(word, owner[word], emotion)
                owner[word] = emotion

    def words(self, emotion: str) -> frozenset[str]:
        if emotion not in self.lists:
            raise MissingEmotionFile(emotion)
        return self.lists[emotion].entries


def load_emotion_lexicon(directory: str | Path) -> EmotionLexicon:
    """Load ``<emotion>.txt`` for each of the six emotions from a directory."""
    directory = Path(directory)
    lists: dict[str, WordList] = {}
    for emotion in EMOTIONS:
        path = directory / f"{emotion}.txt"
        if not path.is_file():
            raise MissingEmotionFile(emotion)
        lists[emotion] = load_word_list(path, emotion)
    return EmotionLexicon(lists)


def _bundled_text(relative: str) -> str:
    return resources.files("emocorpus.data").joinpath(relative).read_text("utf-8")


def bundled_easy_words() -> WordList:
    """Miniature easy-word list for tests and demos, not the full published one."""
    return word_list_from_text(_bundled_text("easy_words_mini.txt"), "easy_words_mini", "bundled:easy_words_mini.txt")


def bundled_temporal_connectives() -> WordList:
    return word_list_from_text(_bundled_text("temporal_connectives.txt"), "temporal_connectives", "bundled:temporal_connectives.txt")


def bundled_stopwords() -> WordList:
    return word_list_from_text(_bundled_text("stopwords.txt"), "stopwords", "bundled:stopwords.txt")


def bundled_brands() -> WordList:
    return word_list_from_text(_bundled_text("brands.txt"), "brands", "bundled:brands.txt", allow_phrases=True)


def bundled_emotion_lexicon() -> EmotionLexicon:
    lists = {
        emotion: word_list_from_text(
            _bundled_text(f"emotions/{emotion}.txt"), emotion, f"bundled:emotions/{emotion}.txt"
        )
        for emotion in EMOTIONS
    }
    return EmotionLexicon(lists)
