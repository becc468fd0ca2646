"""Exception types shared across the package."""


class MunscError(Exception):
    """Base class for all library errors."""


class ContractError(MunscError, ValueError):
    """An API precondition was violated by the caller."""


class BudgetExceededError(MunscError):
    """Exhaustive enumeration would exceed the combinatorial budget."""


class PremiseError(MunscError):
    """A checker was invoked on inputs that violate its stated premise."""


class InfeasibleBinDivisionError(MunscError):
    """No integer bin layout can satisfy all four division constraints."""


class StreamProtocolError(MunscError):
    """The one-point-at-a-time stream discipline was broken."""
