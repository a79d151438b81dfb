"""Emotion- and CEFR-conditioned customer-service dialogue corpus tools."""

from .curation import (
    DEFAULT_BANDS,
    QOI_GRADES,
    AlreadyDisposed,
    CefrBandTable,
    CurationError,
    GateRecord,
    InvalidGrade,
    auto_check,
    check_complexity_coherence,
    check_emotional_coherence,
    check_ied,
    disposition,
    record_review,
)
from .generator import (
    GenerationResult,
    HttpChatProvider,
    MockChatProvider,
    PromptSpec,
    ProviderConfig,
    ProviderError,
    build_prompt,
    generate,
    generate_batch,
)
from .lexicons import (
    EmotionLexicon,
    LexiconError,
    WordList,
    bundled_brands,
    bundled_easy_words,
    bundled_emotion_lexicon,
    load_emotion_lexicon,
    load_word_list,
)
from .sampler import (
    AggregateStats,
    SamplerError,
    SampleRun,
    Stratum,
    build_sample,
    derive_seed,
    run_experiment,
    run_explicit_vs_implicit,
)
from .store import (
    ChainPattern,
    CorpusRecord,
    CorpusStore,
    DuplicateId,
    StoreError,
    StoreLocked,
    make_record,
    mine_chain_patterns,
)
from .textmetrics import (
    MetricReport,
    ScoreConfig,
    TextCounts,
    ari,
    compute_counts,
    count_syllables,
    fkgl,
    fre,
    join_texts,
    ndc,
    score_text,
)
from .transcript import (
    AGENT,
    CEFR_LEVELS,
    CLIENT,
    EMOTIONS,
    AttitudeChain,
    Dialogue,
    DialogueMeta,
    TranscriptError,
    Turn,
    extract_attitude_chain,
    load_bundled_sample,
    parse_transcript,
    redact_brands,
    serialize_transcript,
)

__version__ = "0.1.0"
