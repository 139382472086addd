"""Exception types shared across the package."""


class ParameterError(ValueError):
    """Invalid parameters passed to a generator, engine or check."""


class CapacityError(ParameterError):
    """Request exceeds a configured brute-force cap."""


class InputError(ValueError):
    """Malformed algorithm input (e.g. an invalid absorption partition)."""


class ContractError(RuntimeError):
    """An operation was called outside its precondition."""
