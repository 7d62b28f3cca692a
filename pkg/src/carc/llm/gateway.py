"""Provider-agnostic chat completion gateway.

Every request is a single user message carrying the prompt text unchanged.
Transient failures (rate limits, timeouts, 5xx, transport errors) are retried
with exponential backoff; authentication and payload errors are not. Each
call, successful or not, is appended to a JSON-lines transcript.
"""

import asyncio
import hashlib
import json
import logging
import os
import time
from datetime import UTC, datetime
from pathlib import Path
from types import TracebackType
from typing import Any, Self

import httpx
from tenacity import (
    AsyncRetrying,
    before_sleep_log,
    retry_if_exception_type,
    stop_after_attempt,
    wait_exponential,
)

from carc.config import settings
from carc.llm.errors import (
    AuthenticationError,
    MalformedPayloadError,
    ProviderError,
    ProviderTimeoutError,
    ProviderUnavailableError,
    RateLimitError,
    TransientProviderError,
)
from carc.llm.models import Completion, MockBehavior, ModelConfig, Provider

logger = logging.getLogger(__name__)

EXCERPT_CHARS = 200


def prompt_hash(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _raise_for_status(response: httpx.Response) -> None:
    status = response.status_code
    if status < 400:
        return
    excerpt = response.text[:EXCERPT_CHARS]
    if status in (401, 403):
        raise AuthenticationError(f"HTTP {status}: {excerpt}")
    if status == 429:
        raise RateLimitError(f"HTTP 429: {excerpt}")
    if status == 408 or status >= 500:
        raise ProviderUnavailableError(f"HTTP {status}: {excerpt}")
    raise ProviderError(f"HTTP {status}: {excerpt}")


def _json_body(response: httpx.Response) -> Any:
    try:
        return response.json()
    except ValueError as e:
        raise MalformedPayloadError("response is not JSON", response.text[:EXCERPT_CHARS]) from e


class LMGateway:
    """Shared client for all model calls of a run.

    Use as an async context manager so the HTTP client is closed::

        async with LMGateway() as gateway:
            completion = await gateway.complete(cfg, prompt.text)
    """

    def __init__(
        self,
        transcript_path: Path | None = None,
        in_flight_limit: int | None = None,
        client: httpx.AsyncClient | None = None,
    ) -> None:
        self.transcript_path = transcript_path
        self.in_flight_limit = in_flight_limit or settings.gateway.in_flight_limit
        self._client = client
        self._owns_client = client is None
        self._semaphores: dict[Provider, asyncio.Semaphore] = {}
        self._transcript_lock = asyncio.Lock()
        self._answers: dict[str, str] = {}
        self._mock_failures: dict[tuple[str, str], int] = {}

    async def __aenter__(self) -> Self:
        return self

    async def __aexit__(
        self,
        exc_type: type[BaseException] | None,
        exc: BaseException | None,
        tb: TracebackType | None,
    ) -> None:
        await self.aclose()

    async def aclose(self) -> None:
        if self._client is not None and self._owns_client:
            await self._client.aclose()
            self._client = None

    @property
    def client(self) -> httpx.AsyncClient:
        if self._client is None:
            self._client = httpx.AsyncClient()
        return self._client

    def register_answer(self, prompt_text: str, answer: str) -> None:
        """Answer the mock ``oracle`` behavior gives for ``prompt_text``."""
        self._answers[prompt_hash(prompt_text)] = answer

    def _semaphore(self, provider: Provider) -> asyncio.Semaphore:
        sem = self._semaphores.get(provider)
        if sem is None:
            sem = asyncio.Semaphore(self.in_flight_limit)
            self._semaphores[provider] = sem
        return sem

    async def complete(self, cfg: ModelConfig, prompt_text: str) -> Completion:
        """Send ``prompt_text`` as one user message and return the raw reply.

        Raises:
            TransientProviderError: if retries are exhausted
            AuthenticationError: on missing or rejected credentials
            MalformedPayloadError: if the reply cannot be read
        """
        started = time.perf_counter()
        attempts = 0
        text = ""
        try:
            retrying = AsyncRetrying(
                stop=stop_after_attempt(cfg.retry.max_attempts),
                wait=wait_exponential(
                    multiplier=cfg.retry.backoff_multiplier,
                    min=cfg.retry.backoff_min,
                    max=cfg.retry.backoff_max,
                ),
                retry=retry_if_exception_type(TransientProviderError),
                before_sleep=before_sleep_log(logger, logging.WARNING),
                reraise=True,
            )
            async for attempt in retrying:
                with attempt:
                    attempts = attempt.retry_state.attempt_number
                    # slot is held per attempt, never across a backoff sleep
                    async with self._semaphore(cfg.provider):
                        text = await self._send(cfg, prompt_text)
        except ProviderError as e:
            await self._record(cfg, prompt_text, None, started, attempts, error=str(e))
            raise

        completion = Completion(
            text=text, attempts=attempts, latency_seconds=time.perf_counter() - started
        )
        await self._record(cfg, prompt_text, completion.text, started, attempts)
        return completion

    async def _send(self, cfg: ModelConfig, prompt_text: str) -> str:
        if cfg.provider is Provider.MOCK:
            return self._mock(cfg, prompt_text)
        try:
            if cfg.provider is Provider.OPENAI:
                return await self._openai(cfg, prompt_text)
            return await self._anthropic(cfg, prompt_text)
        except httpx.TimeoutException as e:
            raise ProviderTimeoutError(f"{cfg.name}: timed out after {cfg.timeout}s") from e
        except httpx.TransportError as e:
            raise ProviderUnavailableError(f"{cfg.name}: {e}") from e

    def _api_key(self, cfg: ModelConfig) -> str:
        key = os.environ.get(cfg.api_key_env or "")
        if not key:
            raise AuthenticationError(f"{cfg.name}: environment variable {cfg.api_key_env} unset")
        return key

    async def _openai(self, cfg: ModelConfig, prompt_text: str) -> str:
        base = cfg.base_url or settings.gateway.openai_base_url
        response = await self.client.post(
            f"{base}/chat/completions",
            headers={"Authorization": f"Bearer {self._api_key(cfg)}"},
            json={
                "model": cfg.model,
                "messages": [{"role": "user", "content": prompt_text}],
                "temperature": cfg.temperature,
                "max_completion_tokens": cfg.max_tokens,
            },
            timeout=cfg.timeout,
        )
        _raise_for_status(response)
        body = _json_body(response)
        try:
            content = body["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError) as e:
            excerpt = response.text[:EXCERPT_CHARS]
            raise MalformedPayloadError("no choices[0].message", excerpt) from e
        return content or ""

    async def _anthropic(self, cfg: ModelConfig, prompt_text: str) -> str:
        base = cfg.base_url or settings.gateway.anthropic_base_url
        response = await self.client.post(
            f"{base}/v1/messages",
            headers={
                "x-api-key": self._api_key(cfg),
                "anthropic-version": settings.gateway.anthropic_version,
            },
            json={
                "model": cfg.model,
                "max_tokens": cfg.max_tokens,
                "temperature": cfg.temperature,
                "messages": [{"role": "user", "content": prompt_text}],
            },
            timeout=cfg.timeout,
        )
        _raise_for_status(response)
        body = _json_body(response)
        try:
            blocks = body["content"]
            return "".join(b["text"] for b in blocks if b.get("type") == "text")
        except (KeyError, TypeError) as e:
            raise MalformedPayloadError("no content blocks", response.text[:EXCERPT_CHARS]) from e

    def _mock(self, cfg: ModelConfig, prompt_text: str) -> str:
        key = prompt_hash(prompt_text)
        if cfg.behavior is MockBehavior.EMPTY:
            return ""
        if cfg.behavior is MockBehavior.ORACLE:
            return self._answers.get(key, "")
        if cfg.behavior is MockBehavior.FLAKY:
            failed = self._mock_failures.get((cfg.name, key), 0)
            if failed < cfg.failures:
                self._mock_failures[(cfg.name, key)] = failed + 1
                raise ProviderUnavailableError(f"{cfg.name}: mock failure {failed + 1}")
        return cfg.canned

    async def _record(
        self,
        cfg: ModelConfig,
        prompt_text: str,
        response: str | None,
        started: float,
        attempts: int,
        error: str | None = None,
    ) -> None:
        if self.transcript_path is None:
            return
        record = {
            "timestamp": datetime.now(UTC).isoformat(),
            "model": cfg.name,
            "provider": cfg.provider.value,
            "prompt_sha256": prompt_hash(prompt_text),
            "response": response,
            "latency_seconds": round(time.perf_counter() - started, 4),
            "attempts": attempts,
            "error": error,
        }
        async with self._transcript_lock:
            self.transcript_path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.transcript_path, "a") as f:
                f.write(json.dumps(record) + "\n")
