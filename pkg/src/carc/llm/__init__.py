"""Language model gateway: OpenAI, Anthropic and a deterministic mock."""

from carc.llm.errors import (
    AuthenticationError,
    MalformedPayloadError,
    ProviderError,
    ProviderTimeoutError,
    ProviderUnavailableError,
    RateLimitError,
    TransientProviderError,
)
from carc.llm.gateway import LMGateway, prompt_hash
from carc.llm.models import Completion, MockBehavior, ModelConfig, Provider, RetryPolicy

__all__ = [
    "AuthenticationError",
    "Completion",
    "LMGateway",
    "MalformedPayloadError",
    "MockBehavior",
    "ModelConfig",
    "Provider",
    "ProviderError",
    "ProviderTimeoutError",
    "ProviderUnavailableError",
    "RateLimitError",
    "RetryPolicy",
    "TransientProviderError",
    "prompt_hash",
]
