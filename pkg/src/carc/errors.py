"""Exception hierarchy for carc."""


class CarcError(Exception):
    """Base class for all carc errors."""


class SpecificationError(CarcError, ValueError):
    """An exogenous spec or structural parameter is invalid."""


class ContractError(CarcError, ValueError):
    """An operation was called with arguments that violate its contract."""


class SizeError(ContractError):
    """A requested grid does not fit the 30x30 limit."""


class OracleLimitError(ContractError):
    """The graph oracle refuses grids with too many exogenous cells."""


class DecodeError(CarcError, ValueError):
    """A task document could not be decoded.

    Attributes:
        path: JSON path of the offending element, e.g. ``train[0].output``
    """

    def __init__(self, path: str, message: str) -> None:
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message


class ConfigError(CarcError):
    """A configuration or combination of options cannot be honored."""
