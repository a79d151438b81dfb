from __future__ import annotations

import pytest

from emocorpus.lexicons import (
    DuplicateAcrossEmotions,
    EmotionLexicon,
    EmptyList,
    InvalidEntry,
    MissingEmotionFile,
    WordList,
    bundled_brands,
    bundled_easy_words,
    bundled_emotion_lexicon,
    bundled_stopwords,
    bundled_temporal_connectives,
    load_emotion_lexicon,
    load_word_list,
    word_list_from_text,
)
from emocorpus.transcript import EMOTIONS


class TestWordList:
    def test_lowercase_and_dedupe(self):
        wl = word_list_from_text("Angry\nangry\nFURIOUS\n", "x")
        assert wl.entries == frozenset({"angry", "furious"})

    def test_comments_and_blanks_skipped(self):
        wl = word_list_from_text("# header\n\nmad\n  \n# tail\n", "x")
        assert wl.entries == frozenset({"mad"})

    def test_contains_is_case_insensitive(self):
        wl = word_list_from_text("mad\n", "x")
        assert "MAD" in wl and "mad" in wl and "sad" not in wl
        assert len(wl) == 1

    def test_empty_rejected(self):
        with pytest.raises(EmptyList):
            word_list_from_text("# only comments\n", "x")

    def test_phrase_rejected_by_default(self):
        with pytest.raises(InvalidEntry) as exc:
            word_list_from_text("acme x200\n", "brands")
        assert "acme x200" in str(exc.value)

    def test_phrases_allowed_when_opted_in(self):
        wl = word_list_from_text("Acme   X200\n", "brands", allow_phrases=True)
        assert wl.entries == frozenset({"acme x200"})

    def test_checksum_tracks_source_bytes(self):
        a = word_list_from_text("mad\n", "x")
        b = word_list_from_text("mad\n", "x")
        c = word_list_from_text("mad\n\n", "x")
        assert a.checksum == b.checksum
        assert a.checksum != c.checksum

    def test_load_from_file(self, tmp_path):
        path = tmp_path / "words.txt"
        path.write_text("alpha\nbeta\n", encoding="utf-8")
        wl = load_word_list(path)
        assert wl.entries == frozenset({"alpha", "beta"})
        assert wl.source_path.endswith("words.txt")


class TestEmotionLexicon:
    def test_requires_all_six(self):
        lists = {e: word_list_from_text(f"{e}word\n", e) for e in EMOTIONS[:-1]}
        with pytest.raises(MissingEmotionFile):
            EmotionLexicon(lists)

    def test_cross_emotion_duplicate_rejected(self):
        lists = {e: word_list_from_text(f"{e}word\n", e) for e in EMOTIONS}
        lists["joy"] = word_list_from_text("joyword\nshared\n", "joy")
        lists["fear"] = word_list_from_text("fearword\nshared\n", "fear")
        with pytest.raises(DuplicateAcrossEmotions) as exc:
            EmotionLexicon(lists)
        assert exc.value.word == "shared"

    def test_words_lookup(self):
        lists = {e: word_list_from_text(f"{e}word\n", e) for e in EMOTIONS}
        lex = EmotionLexicon(lists)
        assert lex.words("anger") == frozenset({"angerword"})

    def test_load_from_directory(self, tmp_path):
        for e in EMOTIONS:
            (tmp_path / f"{e}.txt").write_text(f"{e}word\n", encoding="utf-8")
        lex = load_emotion_lexicon(tmp_path)
        assert lex.words("disgust") == frozenset({"disgustword"})

    def test_missing_file_in_directory(self, tmp_path):
        for e in EMOTIONS[:-1]:
            (tmp_path / f"{e}.txt").write_text(f"{e}word\n", encoding="utf-8")
        with pytest.raises(MissingEmotionFile):
            load_emotion_lexicon(tmp_path)


class TestBundled:
    def test_emotion_lexicon_covers_all_emotions(self):
        lex = bundled_emotion_lexicon()
        for e in EMOTIONS:
            assert len(lex.words(e)) >= 10
        assert "angry" in lex.words("anger")
        assert "frustrated" in lex.words("anger")
        assert "surprised" in lex.words("surprise")

    def test_easy_words(self):
        wl = bundled_easy_words()
        assert {"the", "cat", "sat"} <= wl.entries

    def test_temporal_connectives(self):
        assert "then" in bundled_temporal_connectives().entries

    def test_stopwords(self):
        assert "the" in bundled_stopwords().entries

    def test_brands_are_phrases(self):
        wl = bundled_brands()
        assert any(" " in entry for entry in wl.entries)
