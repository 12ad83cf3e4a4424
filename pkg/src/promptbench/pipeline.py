"""Compose prompts, call the completion backend, and gate the result
through code extraction and the construct filter.

Every submission is a single stateless shot: the rendered prompt is a
pure function of (scaffold, student text, policy), with no conversational
carryover between attempts.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from typing import Protocol

import httpx

from .codefilter import ExtractedCode, detect_constructs, extract_code
from .errors import (
    BackendRejected,
    BackendTimeout,
    EmptyPrompt,
    FilterExhausted,
    QuotaExceeded,
)
from .problems import FilterPolicy, PromptProblem, PromptScaffold

logger = logging.getLogger(__name__)

GUIDANCE_PREAMBLE_TEMPLATE = (
    "You are a code generator. Respond with a single complete {language} "
    "program only. Output no explanations, no comments, and no text outside "
    "one fenced code block."
)

_LANGUAGE_DISPLAY = {"python": "Python"}


def guidance_preamble(exercise_language: str = "python") -> str:
    display = _LANGUAGE_DISPLAY.get(exercise_language, exercise_language.capitalize())
    return GUIDANCE_PREAMBLE_TEMPLATE.format(language=display)


@dataclass(frozen=True)
class FullPrompt:
    guidance_preamble: str
    scaffold_prefix: str
    student_text: str
    allowed_constructs_clause: str | None = None

    def rendered(self) -> str:
        text = f"{self.guidance_preamble}\n\n{self.scaffold_prefix} {self.student_text}"
        if self.allowed_constructs_clause:
            text += f"\n\n{self.allowed_constructs_clause}"
        return text


@dataclass(frozen=True)
class ModelResponse:
    raw_text: str
    model_id: str
    latency_ms: int
    variant_index: int


@dataclass(frozen=True)
class GenerationConfig:
    model_id: str = "gpt-3.5-turbo"
    temperature: float = 0.2
    max_output_tokens: int = 1024
    variants_per_submission: int = 1
    request_timeout_ms: int = 60_000

    def __post_init__(self):
        if not 0.0 <= self.temperature <= 2.0:
            raise ValueError("temperature must be in [0, 2]")
        if self.variants_per_submission < 1:
            raise ValueError("variants_per_submission must be >= 1")


def compose_prompt(
    scaffold: PromptScaffold,
    student_text: str,
    policy: FilterPolicy,
    *,
    exercise_language: str = "python",
) -> FullPrompt:
    """Build the full prompt from the immutable scaffold and student text.

    Raises EmptyPrompt when the student text is blank after trimming,
    mirroring the UI rule that the submit button only enables once text
    is entered.
    """
    text = student_text.strip()
    if not text:
        raise EmptyPrompt("student text is empty")
    clause = None
    if policy.allowed_constructs_hint:
        allowed = ", ".join(policy.allowed_constructs_hint)
        clause = f"Only the following language constructs are permitted in the solution: {allowed}."
    return FullPrompt(
        guidance_preamble=guidance_preamble(exercise_language),
        scaffold_prefix=scaffold.prefix,
        student_text=text,
        allowed_constructs_clause=clause,
    )


class CompletionBackend(Protocol):
    """Rendered prompt in, completion texts out."""

    def complete(self, rendered_prompt: str, config: GenerationConfig) -> list[str]:
        """Return config.variants_per_submission completion texts."""
        ...


class HttpChatBackend:
    """Chat-completions client for an OpenAI-style HTTP endpoint."""

    def __init__(self, base_url: str, api_key: str = ""):
        self.base_url = base_url.rstrip("/")
        self._api_key = api_key

    def complete(self, rendered_prompt: str, config: GenerationConfig) -> list[str]:
        headers = {}
        if self._api_key:
            headers["Authorization"] = f"Bearer {self._api_key}"
        body = {
            "model": config.model_id,
            "temperature": config.temperature,
            "max_tokens": config.max_output_tokens,
            "n": config.variants_per_submission,
            "messages": [{"role": "user", "content": rendered_prompt}],
        }
        try:
            response = httpx.post(
                f"{self.base_url}/v1/chat/completions",
                json=body,
                headers=headers,
                timeout=config.request_timeout_ms / 1000.0,
            )
        except httpx.TimeoutException as exc:
            raise BackendTimeout(f"completion backend timed out: {exc}") from exc
        except httpx.HTTPError as exc:
            raise BackendRejected(f"completion backend unreachable: {exc}") from exc

        if response.status_code == 429:
            raise QuotaExceeded(
                "completion backend quota exceeded",
                status_code=429,
                body=response.text,
            )
        if response.status_code >= 300:
            raise BackendRejected(
                f"completion backend returned HTTP {response.status_code}",
                status_code=response.status_code,
                body=response.text,
            )
        try:
            choices = response.json()["choices"]
            texts = [choice["message"]["content"] for choice in choices]
        except (ValueError, KeyError, TypeError) as exc:
            raise BackendRejected(f"malformed backend response: {exc}") from exc
        if len(texts) != config.variants_per_submission:
            raise BackendRejected(
                f"backend returned {len(texts)} completions, "
                f"expected {config.variants_per_submission}"
            )
        return texts


class MockBackend:
    """Deterministic table-driven backend keyed by the exact rendered prompt.

    A table value may be a single text (always returned) or a list of
    texts consumed in order across successive calls, with the last entry
    repeating once exhausted, enough to script filter-regeneration
    sequences.
    """

    def __init__(self, table: dict[str, str | list[str]], fallback: str | None = None):
        self._table = dict(table)
        self._fallback = fallback
        self._cursors: dict[str, int] = {}

    def complete(self, rendered_prompt: str, config: GenerationConfig) -> list[str]:
        entry = self._table.get(rendered_prompt)
        if entry is None:
            if self._fallback is not None:
                return [self._fallback] * config.variants_per_submission
            raise BackendRejected(
                "mock backend has no response for this rendered prompt",
                status_code=None,
                body=rendered_prompt,
            )
        if isinstance(entry, str):
            return [entry] * config.variants_per_submission

        texts = []
        cursor = self._cursors.get(rendered_prompt, 0)
        for _ in range(config.variants_per_submission):
            texts.append(entry[min(cursor, len(entry) - 1)])
            cursor += 1
        self._cursors[rendered_prompt] = cursor
        return texts


def request_completion(
    prompt: FullPrompt,
    config: GenerationConfig,
    backend: CompletionBackend,
) -> list[ModelResponse]:
    """Request one batch of completions; one ModelResponse per variant."""
    started = time.perf_counter()
    texts = backend.complete(prompt.rendered(), config)
    latency_ms = int((time.perf_counter() - started) * 1000)
    responses = [
        ModelResponse(
            raw_text=text,
            model_id=config.model_id,
            latency_ms=latency_ms,
            variant_index=i,
        )
        for i, text in enumerate(texts)
    ]
    for response in responses:
        logger.info(
            "completion model=%s variant=%d latency_ms=%d chars=%d",
            response.model_id,
            response.variant_index,
            response.latency_ms,
            len(response.raw_text),
        )
    return responses


@dataclass(frozen=True)
class CheckedCode:
    source: str
    extracted: ExtractedCode
    responses: tuple[ModelResponse, ...]  # every generation, accepted one last
    rejected_generations: int


def generate_checked_code(
    prompt: FullPrompt,
    problem: PromptProblem,
    config: GenerationConfig,
    backend: CompletionBackend,
) -> CheckedCode:
    """Generate code and enforce the problem's construct policy.

    Each variant is extracted and scanned; a variant using a disallowed
    construct is rejected and a fresh generation is requested, up to
    max_regenerations re-requests.  Raises FilterExhausted when every
    generation violated the policy.
    """
    policy = problem.filter_policy
    all_responses: list[ModelResponse] = []
    rejected = 0
    violated: list[str] = []

    for round_index in range(policy.max_regenerations + 1):
        responses = request_completion(prompt, config, backend)
        all_responses.extend(responses)
        for response in responses:
            extracted = extract_code(response.raw_text)
            matches = detect_constructs(extracted.source, list(policy.disallowed_constructs))
            if not matches:
                return CheckedCode(
                    source=extracted.source,
                    extracted=extracted,
                    responses=tuple(all_responses),
                    rejected_generations=rejected,
                )
            rejected += 1
            violated.extend(m.construct for m in matches)
            logger.info(
                "rejected generation round=%d variant=%d constructs=%s",
                round_index,
                response.variant_index,
                sorted({m.construct for m in matches}),
            )

    raise FilterExhausted(violated, rejected)
