"""Provider errors raised by the language model gateway."""

from carc.errors import CarcError


class ProviderError(CarcError):
    """A provider call failed and will not be retried."""


class TransientProviderError(ProviderError):
    """A provider call failed in a way worth retrying."""


class RateLimitError(TransientProviderError):
    """HTTP 429."""


class ProviderTimeoutError(TransientProviderError):
    """The request exceeded its timeout."""


class ProviderUnavailableError(TransientProviderError):
    """Transport failure or a 5xx response."""


class AuthenticationError(ProviderError):
    """Missing or rejected credentials."""


class MalformedPayloadError(ProviderError):
    """The provider answered with a body the gateway cannot read.

    Attributes:
        excerpt: Start of the offending payload
    """

    def __init__(self, message: str, excerpt: str) -> None:
        super().__init__(f"{message}: {excerpt!r}")
        self.excerpt = excerpt
