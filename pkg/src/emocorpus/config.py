"""TOML configuration: provider settings, resource paths, CEFR bands, store.

Every section is optional; omitted values fall back to bundled resources
and documented defaults, so the pipeline runs out of the box.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .curation import DEFAULT_BANDS, CefrBandTable
from .generator import ProviderConfig
from .lexicons import (
    EmotionLexicon,
    WordList,
    bundled_brands,
    bundled_easy_words,
    bundled_emotion_lexicon,
    bundled_stopwords,
    bundled_temporal_connectives,
    load_emotion_lexicon,
    load_word_list,
)
from .textmetrics import Combiner, FeatureResources, ScoreConfig


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class AppConfig:
    provider: ProviderConfig = ProviderConfig()
    provider_kind: str = "http"  # "http" or "mock"
    mock_leak_emotion_words: bool = False
    store_path: str = "corpus.jsonl"
    easy_words_path: str = ""  # empty means the bundled miniature list
    emotions_dir: str = ""
    brands_path: str = ""
    connectives_path: str = ""
    bands: CefrBandTable = DEFAULT_BANDS
    combiners: dict[str, Combiner] = field(default_factory=dict)
    runs_per_stratum: int = 10
    sample_cap: int = 1000
    base_seed: int = 0


def _band_bound(value) -> float:
    if isinstance(value, str):
        if value.lower() in ("inf", "+inf", "infinity"):
            return math.inf
        raise ConfigError(f"band bound must be a number or 'inf', got {value!r}")
    return float(value)


def _parse_bands(table: dict) -> CefrBandTable:
    bands = {}
    for level, bounds in table.items():
        if not isinstance(bounds, list) or len(bounds) != 2:
            raise ConfigError(f"band {level!r} must be a [lo, hi] pair")
        bands[level] = (_band_bound(bounds[0]), _band_bound(bounds[1]))
    try:
        return CefrBandTable(bands)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _parse_combiners(table: dict) -> dict[str, Combiner]:
    combiners = {}
    for name, entries in table.items():
        if not isinstance(entries, dict):
            raise ConfigError(f"combiner {name!r} must be a table of feature weights")
        weights = {k: float(v) for k, v in entries.items() if k != "intercept"}
        combiners[name] = Combiner(weights=weights, intercept=float(entries.get("intercept", 0.0)))
    return combiners


def load_config(path: str | Path | None = None) -> AppConfig:
    if path is None:
        return AppConfig()
    data = tomllib.loads(Path(path).read_text("utf-8"))

    provider_table = dict(data.get("provider", {}))
    kind = provider_table.pop("kind", "http")
    leak = bool(provider_table.pop("mock_leak_emotion_words", False))
    if kind not in ("http", "mock"):
        raise ConfigError(f"provider kind must be 'http' or 'mock', got {kind!r}")
    known = {f for f in ProviderConfig.__dataclass_fields__}
    unknown = set(provider_table) - known
    if unknown:
        raise ConfigError(f"unknown provider settings: {sorted(unknown)}")
    try:
        provider = ProviderConfig(**provider_table)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad provider settings: {exc}") from exc

    lexicons_table = data.get("lexicons", {})
    store_table = data.get("store", {})
    sampler_table = data.get("sampler", {})
    return AppConfig(
        provider=provider,
        provider_kind=kind,
        mock_leak_emotion_words=leak,
        store_path=str(store_table.get("path", "corpus.jsonl")),
        easy_words_path=str(lexicons_table.get("easy_words", "")),
        emotions_dir=str(lexicons_table.get("emotions_dir", "")),
        brands_path=str(lexicons_table.get("brands", "")),
        connectives_path=str(lexicons_table.get("temporal_connectives", "")),
        bands=_parse_bands(data["bands"]) if "bands" in data else DEFAULT_BANDS,
        combiners=_parse_combiners(data.get("combiners", {})),
        runs_per_stratum=int(sampler_table.get("runs", 10)),
        sample_cap=int(sampler_table.get("cap", 1000)),
        base_seed=int(sampler_table.get("seed", 0)),
    )


@dataclass(frozen=True)
class Resources:
    lexicon: EmotionLexicon
    easy_words: WordList
    brands: WordList
    connectives: WordList
    score_config: ScoreConfig


def load_resources(cfg: AppConfig) -> Resources:
    """Resolve configured paths to loaded word lists, bundled ones as fallback."""
    lexicon = load_emotion_lexicon(cfg.emotions_dir) if cfg.emotions_dir else bundled_emotion_lexicon()
    easy = load_word_list(cfg.easy_words_path, "easy_words") if cfg.easy_words_path else bundled_easy_words()
    brands = (
        load_word_list(cfg.brands_path, "brands", allow_phrases=True) if cfg.brands_path else bundled_brands()
    )
    connectives = (
        load_word_list(cfg.connectives_path, "temporal_connectives")
        if cfg.connectives_path
        else bundled_temporal_connectives()
    )
    score_config = ScoreConfig(
        easy_words=easy.entries,
        resources=FeatureResources(
            temporal_connectives=connectives.entries,
            content_stoplist=bundled_stopwords().entries,
        ),
        combiners=dict(cfg.combiners),
    )
    return Resources(
        lexicon=lexicon,
        easy_words=easy,
        brands=brands,
        connectives=connectives,
        score_config=score_config,
    )
