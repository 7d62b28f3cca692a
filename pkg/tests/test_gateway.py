"""Tests for the language model gateway."""

import asyncio
import json

import httpx
import pytest

from carc.llm.errors import (
    AuthenticationError,
    MalformedPayloadError,
    ProviderUnavailableError,
    RateLimitError,
)
from carc.llm.gateway import LMGateway, prompt_hash
from carc.llm.models import MockBehavior, ModelConfig, Provider, RetryPolicy

NO_WAIT = RetryPolicy(max_attempts=3, backoff_multiplier=0, backoff_min=0, backoff_max=0)
PROMPT = (
    "Example input-output arrays:\n\n[[1, 0]] -> [[0, 1]]\n\n"
    "Test input-output arrays:\n\n[[0, 1]] -> "
)


class Recorder:
    """Mock transport handler replaying scripted responses."""

    def __init__(self, *responses: httpx.Response) -> None:
        self.responses = list(responses)
        self.requests: list[httpx.Request] = []

    def __call__(self, request: httpx.Request) -> httpx.Response:
        self.requests.append(request)
        scripted = self.responses.pop(0) if len(self.responses) > 1 else self.responses[0]
        return httpx.Response(
            scripted.status_code, headers=scripted.headers, content=scripted.content
        )


def _gateway(handler: Recorder, **kwargs) -> LMGateway:
    client = httpx.AsyncClient(transport=httpx.MockTransport(handler))
    return LMGateway(client=client, **kwargs)


def _openai(**kwargs) -> ModelConfig:
    return ModelConfig(provider=Provider.OPENAI, model="gpt-4o-mini", retry=NO_WAIT, **kwargs)


def _chat(content: str) -> httpx.Response:
    return httpx.Response(200, json={"choices": [{"message": {"content": content}}]})


@pytest.fixture(autouse=True)
def api_keys(monkeypatch):
    monkeypatch.setenv("OPENAI_API_KEY", "sk-test")
    monkeypatch.setenv("ANTHROPIC_API_KEY", "ak-test")


async def test_openai_request_carries_prompt_verbatim():
    """Test the prompt goes out as one user message, byte for byte."""
    handler = Recorder(_chat("[[0, 1]]"))

    async with _gateway(handler) as gateway:
        completion = await gateway.complete(_openai(), PROMPT)

    body = json.loads(handler.requests[0].content)
    assert completion.text == "[[0, 1]]"
    assert completion.attempts == 1
    assert body["messages"] == [{"role": "user", "content": PROMPT}]
    assert body["temperature"] == 0.0
    assert body["max_completion_tokens"] == 4096
    assert handler.requests[0].headers["authorization"] == "Bearer sk-test"
    assert handler.requests[0].url.path.endswith("/chat/completions")


async def test_anthropic_request():
    """Test the messages endpoint, headers and text block extraction."""
    handler = Recorder(
        httpx.Response(200, json={"content": [{"type": "text", "text": "[[2]]"}]})
    )
    cfg = ModelConfig(provider="anthropic", model="claude-test", retry=NO_WAIT)

    async with _gateway(handler) as gateway:
        completion = await gateway.complete(cfg, PROMPT)

    request = handler.requests[0]
    assert completion.text == "[[2]]"
    assert request.url.path == "/v1/messages"
    assert request.headers["x-api-key"] == "ak-test"
    assert "anthropic-version" in request.headers
    assert json.loads(request.content)["messages"][0]["content"] == PROMPT


async def test_transient_errors_are_retried():
    """Test a 503 followed by success takes two attempts."""
    handler = Recorder(httpx.Response(503, text="overloaded"), _chat("ok"))

    async with _gateway(handler) as gateway:
        completion = await gateway.complete(_openai(), PROMPT)

    assert completion.text == "ok"
    assert completion.attempts == 2
    assert len(handler.requests) == 2


async def test_retries_exhausted():
    """Test persistent rate limiting surfaces after max_attempts calls."""
    handler = Recorder(httpx.Response(429, text="slow down"))

    async with _gateway(handler) as gateway:
        with pytest.raises(RateLimitError):
            await gateway.complete(_openai(), PROMPT)

    assert len(handler.requests) == 3


async def test_auth_errors_are_not_retried():
    """Test a 401 fails on the first attempt."""
    handler = Recorder(httpx.Response(401, text="bad key"))

    async with _gateway(handler) as gateway:
        with pytest.raises(AuthenticationError):
            await gateway.complete(_openai(), PROMPT)

    assert len(handler.requests) == 1


async def test_missing_api_key(monkeypatch):
    """Test an unset key variable fails before any request."""
    monkeypatch.delenv("OPENAI_API_KEY")
    handler = Recorder(_chat("unused"))

    async with _gateway(handler) as gateway:
        with pytest.raises(AuthenticationError):
            await gateway.complete(_openai(), PROMPT)

    assert handler.requests == []


async def test_malformed_payload():
    """Test a non-JSON body raises with an excerpt of the payload."""
    handler = Recorder(httpx.Response(200, text="<html>gateway</html>"))

    async with _gateway(handler) as gateway:
        with pytest.raises(MalformedPayloadError) as exc:
            await gateway.complete(_openai(), PROMPT)

    assert "<html>" in exc.value.excerpt
    assert len(handler.requests) == 1


async def test_missing_choices():
    """Test a JSON body without choices is malformed."""
    handler = Recorder(httpx.Response(200, json={"error": None}))

    async with _gateway(handler) as gateway:
        with pytest.raises(MalformedPayloadError):
            await gateway.complete(_openai(), PROMPT)


async def test_mock_flaky_recovers():
    """Test the flaky mock fails twice per prompt and then answers."""
    cfg = ModelConfig(
        provider="mock", model="flaky", behavior=MockBehavior.FLAKY, canned="[[3]]", retry=NO_WAIT
    )

    async with LMGateway() as gateway:
        completion = await gateway.complete(cfg, PROMPT)

    assert completion.text == "[[3]]"
    assert completion.attempts == 3


async def test_mock_flaky_exhausts_retries():
    """Test more failures than attempts surfaces the transient error."""
    cfg = ModelConfig(
        provider="mock", model="flaky", behavior="flaky", failures=5, retry=NO_WAIT
    )

    async with LMGateway() as gateway:
        with pytest.raises(ProviderUnavailableError):
            await gateway.complete(cfg, PROMPT)


async def test_backoff_releases_in_flight_slot():
    """Test a call sleeping between retries does not block another call for the provider."""
    slow_retry = RetryPolicy(
        max_attempts=2, backoff_multiplier=0, backoff_min=0.3, backoff_max=0.3
    )
    flaky = ModelConfig(
        provider="mock", model="flaky", behavior="flaky", failures=1, retry=slow_retry
    )
    canned = ModelConfig(provider="mock", model="canned", canned="[[1]]")
    finished: list[str] = []

    async def call(gateway: LMGateway, cfg: ModelConfig) -> None:
        await gateway.complete(cfg, PROMPT)
        finished.append(cfg.name)

    async with LMGateway(in_flight_limit=1) as gateway:
        await asyncio.gather(call(gateway, flaky), call(gateway, canned))

    assert finished == ["canned", "flaky"]


async def test_mock_empty_and_oracle():
    """Test the empty mock gives no response and the oracle returns the registered answer."""
    async with LMGateway() as gateway:
        gateway.register_answer(PROMPT, "[[1, 0]]")
        empty = await gateway.complete(
            ModelConfig(provider="mock", model="empty", behavior="empty"), PROMPT
        )
        oracle = await gateway.complete(
            ModelConfig(provider="mock", model="oracle", behavior="oracle"), PROMPT
        )

    assert empty.no_response
    assert oracle.text == "[[1, 0]]"


async def test_transcript(tmp_path):
    """Test each call, failed or not, is appended to the transcript."""
    path = tmp_path / "transcript.jsonl"
    handler = Recorder(_chat("[[0]]"), httpx.Response(401, text="denied"))

    async with _gateway(handler, transcript_path=path) as gateway:
        await gateway.complete(_openai(), PROMPT)
        with pytest.raises(AuthenticationError):
            await gateway.complete(_openai(), PROMPT)

    records = [json.loads(line) for line in path.read_text().splitlines()]
    assert len(records) == 2
    assert records[0]["prompt_sha256"] == prompt_hash(PROMPT)
    assert records[0]["response"] == "[[0]]"
    assert records[0]["error"] is None
    assert records[1]["response"] is None
    assert "401" in records[1]["error"]


def test_reasoning_models_pin_temperature():
    """Test o-series models run at temperature 1.0 and names default to the model."""
    cfg = ModelConfig(provider="openai", model="o3-mini", temperature=0.2)

    assert cfg.temperature == 1.0
    assert cfg.name == "o3-mini"
    assert cfg.api_key_env == "OPENAI_API_KEY"
    assert _openai().temperature == 0.0
