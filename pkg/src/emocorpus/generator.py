"""Prompt construction and chat-completion providers.

The wire contract is the de-facto chat-completion shape: POST
``<endpoint>/chat/completions`` with ``{model, messages, temperature}``;
the first choice's message content is the raw transcript.  A deterministic
mock provider synthesizes transcripts offline for tests and dry runs.
"""

from __future__ import annotations

import os
import re
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import httpx

from .transcript import CEFR_LEVELS, EMOTIONS

DEFAULT_SCENARIO = "customer service of a hypothetical phone company"


class ProviderError(Exception):
    transient = False


class ProviderUnavailable(ProviderError):
    def __init__(self, message: str, transient: bool = True):
        super().__init__(message)
        self.transient = transient


class Timeout(ProviderError):
    transient = True


class AuthFailure(ProviderError):
    pass


class MalformedResponse(ProviderError):
    pass


@dataclass(frozen=True)
class PromptSpec:
    target_emotion: str
    cefr: str
    implicit: bool = False
    scenario: str = DEFAULT_SCENARIO
    target_turns: int = 5
    require_attitude_labels: bool = True

    def __post_init__(self):
        if self.target_emotion not in EMOTIONS:
            raise ValueError(f"unknown emotion {self.target_emotion!r}")
        if self.cefr not in CEFR_LEVELS:
            raise ValueError(f"unknown CEFR level {self.cefr!r}")
        if self.target_turns < 2:
            raise ValueError("target_turns must be at least 2")


@dataclass(frozen=True)
class ProviderConfig:
    endpoint: str = "http://127.0.0.1:8080/v1"
    model: str = "chat-default"
    api_key_env: str = ""  # name of the environment variable, never the key
    timeout: float = 30.0
    max_retries: int = 3  # additional attempts after the first
    max_parallel: int = 4
    temperature: float = 0.7
    backoff_seconds: float = 0.5

    def __post_init__(self):
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")
        if self.max_parallel < 1:
            raise ValueError("max_parallel must be at least 1")
        if self.max_retries < 0:
            raise ValueError("max_retries cannot be negative")


@dataclass(frozen=True)
class GenerationResult:
    spec: PromptSpec
    raw_text: str
    provider: str
    latency: float
    attempt: int
    temperature: float
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


def build_prompt(spec: PromptSpec, denylist=()) -> str:
    """Deterministic prompt for one (emotion, CEFR, implicit) cell."""
    lines = [
        f"Write a short, interactive dialogue of approximately {spec.target_turns} turns "
        f"between a Client and an Agent, set in the {spec.scenario}.",
        f"The Client expresses {spec.target_emotion} throughout the conversation.",
        f"The Client writes at CEFR level {spec.cefr}.",
    ]
    if spec.require_attitude_labels:
        lines += [
            "Label each turn with the speaker's attitude in parentheses.",
            "Use exactly this line format, one turn per line:",
            "Client (attitude): ...",
            "Agent (attitude): ...",
        ]
    if spec.implicit:
        if denylist:
            words = ", ".join(sorted(denylist))
            lines.append(f"Do not use any of the following words in the Client's utterances: {words}.")
        else:
            lines.append("Do not name the emotion directly in the Client's utterances.")
    return "\n".join(lines)


# One adjective per emotion; each appears in that emotion's seed lexicon, so
# synthesized explicit dialogues pass the coherence gate by construction.
_EMOTION_ADJECTIVES = {
    "anger": "angry",
    "joy": "happy",
    "sadness": "sad",
    "fear": "afraid",
    "surprise": "surprised",
    "disgust": "disgusted",
}

_OPENERS = {
    (False, "A2"): "Hello. My phone is broken and I am very {adj}.",
    (False, "B2"): "Hello, I'm calling because my phone stopped working and I am quite {adj} about it.",
    (False, "C2"): "Good afternoon. My phone has become inoperative, and I confess I am thoroughly {adj} at the disruption.",
    (True, "A2"): "Hello. My phone is broken again. This is too much.",
    (True, "B2"): "Hello, I'm calling because my phone stopped working again, and I really cannot accept this.",
    (True, "C2"): "Good afternoon. My phone has failed once more, and I find these recurring interruptions entirely unacceptable.",
}
_DETAILS = {
    "A2": "It does not turn on. I use it every day.",
    "B2": "It refuses to turn on even after charging, and I rely on it for work.",
    "C2": "It remains unresponsive despite repeated charging attempts, which jeopardizes my professional commitments.",
}
_CLOSINGS = {
    "A2": "Okay. Please fix it soon.",
    "B2": "Alright, I would appreciate a quick solution.",
    "C2": "Very well, I trust this will be resolved without further delay.",
}


def synthesize_transcript(emotion: str, cefr: str, implicit: bool, leak_emotion_words: bool = False) -> str:
    """Canned six-turn transcript for one grid cell.

    Implicit transcripts keep the emotion out of the Client's words (it shows
    only in attitude labels); ``leak_emotion_words`` deliberately breaks that
    promise so the lexical validator has something to catch.
    """
    adj = _EMOTION_ADJECTIVES[emotion]
    opener = _OPENERS[(implicit, cefr)].format(adj=adj)
    detail = _DETAILS[cefr]
    if implicit and leak_emotion_words:
        detail = f"{detail} Honestly, I am {adj} about the whole thing."
    lines = [
        f"Client ({adj}): {opener}",
        "Agent (calm): I'm sorry to hear that. Can you tell me what happened?",
        f"Client (tense): {detail}",
        "Agent (helpful): Thank you for the details. Let me look into your account right away.",
        f"Client (expectant): {_CLOSINGS[cefr]}",
        "Agent (reassuring): I have applied a fix on our side. Please restart your phone and contact us if anything else comes up.",
    ]
    return "\n".join(lines) + "\n"


_PROMPT_EMOTION_RE = re.compile(r"Client expresses (\w+)")
_PROMPT_CEFR_RE = re.compile(r"CEFR level (\w\d)")


class MockChatProvider:
    """Offline provider: reads the grid cell back out of the prompt and
    synthesizes a matching transcript (or returns a canned one).

    ``fail_times`` makes the first N calls raise a transient error, for
    exercising the retry path.
    """

    name = "mock"

    def __init__(self, canned: dict | None = None, fail_times: int = 0, leak_emotion_words: bool = False):
        self.canned = dict(canned or {})
        self.fail_times = fail_times
        self.leak_emotion_words = leak_emotion_words
        self.calls = 0

    def complete(self, prompt: str) -> str:
        self.calls += 1
        if self.calls <= self.fail_times:
            raise ProviderUnavailable(f"simulated transient failure {self.calls}")
        emotion_m = _PROMPT_EMOTION_RE.search(prompt)
        cefr_m = _PROMPT_CEFR_RE.search(prompt)
        emotion = emotion_m.group(1) if emotion_m and emotion_m.group(1) in EMOTIONS else "anger"
        cefr = cefr_m.group(1) if cefr_m and cefr_m.group(1) in CEFR_LEVELS else "B2"
        implicit = "Do not" in prompt
        key = (emotion, cefr, implicit)
        if key in self.canned:
            return self.canned[key]
        return synthesize_transcript(emotion, cefr, implicit, self.leak_emotion_words)


class HttpChatProvider:
    """Thin client for any chat-completion endpoint speaking the common shape."""

    def __init__(self, config: ProviderConfig, transport: httpx.BaseTransport | None = None):
        self.config = config
        self.name = config.model
        self._client = httpx.Client(timeout=config.timeout, transport=transport)

    def _headers(self) -> dict[str, str]:
        headers = {"Content-Type": "application/json"}
        if self.config.api_key_env:
            key = os.environ.get(self.config.api_key_env, "")
            if not key:
                raise AuthFailure(f"environment variable {self.config.api_key_env!r} is not set")
            headers["Authorization"] = f"Bearer {key}"
        return headers

    def complete(self, prompt: str) -> str:
        url = self.config.endpoint.rstrip("/") + "/chat/completions"
        body = {
            "model": self.config.model,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": self.config.temperature,
        }
        try:
            response = self._client.post(url, json=body, headers=self._headers())
        except httpx.TimeoutException as exc:
            raise Timeout(str(exc)) from exc
        except httpx.HTTPError as exc:
            raise ProviderUnavailable(str(exc)) from exc
        if response.status_code in (401, 403):
            raise AuthFailure(f"provider rejected credentials (HTTP {response.status_code})")
        if response.status_code == 429 or response.status_code >= 500:
            raise ProviderUnavailable(f"HTTP {response.status_code}", transient=True)
        if response.status_code >= 400:
            raise ProviderUnavailable(f"HTTP {response.status_code}", transient=False)
        try:
            content = response.json()["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError) as exc:
            raise MalformedResponse(f"response is missing assistant text: {exc}") from exc
        if not isinstance(content, str):
            raise MalformedResponse("assistant text is not a string")
        return content


def generate(spec: PromptSpec, config: ProviderConfig, provider=None, denylist=()) -> GenerationResult:
    """One generation with exponential backoff on transient provider failures."""
    if provider is None:
        provider = HttpChatProvider(config)
    prompt = build_prompt(spec, denylist)
    delay = config.backoff_seconds
    start = time.perf_counter()
    attempts = config.max_retries + 1
    for attempt in range(1, attempts + 1):
        try:
            raw = provider.complete(prompt)
            if not raw or not raw.strip():
                raise MalformedResponse("provider returned no assistant text")
            return GenerationResult(
                spec=spec,
                raw_text=raw,
                provider=provider.name,
                latency=time.perf_counter() - start,
                attempt=attempt,
                temperature=config.temperature,
            )
        except ProviderError as exc:
            exc.attempt = attempt
            if not exc.transient or attempt == attempts:
                raise
            time.sleep(delay)
            delay *= 2
    raise AssertionError("unreachable")


def generate_batch(specs, config: ProviderConfig, provider=None, denylists=None) -> list[GenerationResult]:
    """Bounded-parallel generation; results come back in input order and
    per-item failures are embedded rather than aborting the batch."""
    specs = list(specs)
    if not specs:
        raise ValueError("specs must be non-empty")
    if provider is None:
        provider = HttpChatProvider(config)
    denylists = denylists or {}

    def run_one(spec: PromptSpec) -> GenerationResult:
        started = time.perf_counter()
        try:
            return generate(spec, config, provider, tuple(denylists.get(spec.target_emotion, ())))
        except ProviderError as exc:
            return GenerationResult(
                spec=spec,
                raw_text="",
                provider=provider.name,
                latency=time.perf_counter() - started,
                attempt=getattr(exc, "attempt", 0),
                temperature=config.temperature,
                error=f"{type(exc).__name__}: {exc}",
            )

    with ThreadPoolExecutor(max_workers=config.max_parallel) as pool:
        return list(pool.map(run_one, specs))
