"""Model configuration and completion values."""

import re
from enum import Enum
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, model_validator

# o1, o3-mini, o4-mini, ... only accept temperature 1.0
_REASONING_MODEL = re.compile(r"^o\d")

DEFAULT_KEY_ENV = {"openai": "OPENAI_API_KEY", "anthropic": "ANTHROPIC_API_KEY"}


class Provider(str, Enum):
    OPENAI = "openai"
    ANTHROPIC = "anthropic"
    MOCK = "mock"


class MockBehavior(str, Enum):
    """Deterministic mock provider behaviors.

    ``canned`` answers with ``ModelConfig.canned``; ``oracle`` with the answer
    registered for the prompt; ``empty`` with an empty body; ``flaky`` fails
    ``ModelConfig.failures`` times per prompt before answering like ``canned``.
    """

    CANNED = "canned"
    ORACLE = "oracle"
    EMPTY = "empty"
    FLAKY = "flaky"


class RetryPolicy(BaseModel):
    model_config = ConfigDict(frozen=True)

    max_attempts: int = Field(default=3, ge=1)
    backoff_multiplier: float = Field(default=0.5, ge=0)
    backoff_min: float = Field(default=0.5, ge=0)
    backoff_max: float = Field(default=8.0, ge=0)


class ModelConfig(BaseModel):
    """One model endpoint.

    ``name`` labels the model in reports and defaults to ``model``. Reasoning
    models (``o1``, ``o4-mini``, ...) have their temperature pinned to 1.0.
    """

    model_config = ConfigDict(frozen=True)

    name: str = ""
    provider: Provider
    model: str
    api_key_env: str | None = None
    base_url: str | None = None
    temperature: float = Field(default=0.0, ge=0)
    max_tokens: int = Field(default=4096, ge=1)
    timeout: float = Field(default=120.0, gt=0)
    retry: RetryPolicy = Field(default_factory=RetryPolicy)
    behavior: MockBehavior = MockBehavior.CANNED
    canned: str = ""
    failures: int = Field(default=2, ge=0)

    @model_validator(mode="before")
    @classmethod
    def _defaults(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            return data
        data = dict(data)
        model = str(data.get("model", ""))
        if not data.get("name"):
            data["name"] = model
        if _REASONING_MODEL.match(model):
            data["temperature"] = 1.0
        provider = data.get("provider", "")
        provider = provider.value if isinstance(provider, Provider) else str(provider)
        if data.get("api_key_env") is None and provider in DEFAULT_KEY_ENV:
            data["api_key_env"] = DEFAULT_KEY_ENV[provider]
        return data


class Completion(BaseModel):
    """Raw assistant text of one call, before any parsing."""

    model_config = ConfigDict(frozen=True)

    text: str
    attempts: int
    latency_seconds: float

    @property
    def no_response(self) -> bool:
        return not self.text.strip()
