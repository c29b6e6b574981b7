"""Exception hierarchy shared by all modules."""


class LearnabilityError(Exception):
    """Base class for every error raised by this package."""


class InvalidDomainError(LearnabilityError, ValueError):
    pass


class InvalidExtensionError(LearnabilityError, ValueError):
    pass


class DomainMismatchError(LearnabilityError, ValueError):
    """A point does not belong to the domain it is evaluated on."""


class BudgetExceededError(LearnabilityError):
    """An exhaustive computation would exceed its enumeration budget."""

    def __init__(self, needed: int, budget: int, what: str = "domain") -> None:
        self.needed = needed
        self.budget = budget
        from .domain import format_count

        super().__init__(f"{what} of size {format_count(needed)} exceeds budget {budget}")


class InvalidModelError(LearnabilityError, ValueError):
    """Bad model payload: entries, weights, regions or indicators."""


class InvalidPartitionError(LearnabilityError, ValueError):
    pass


class DegenerateDomainError(LearnabilityError, ValueError):
    pass


class SpecFileError(LearnabilityError, ValueError):
    """A model description file failed to parse or validate."""

    def __init__(self, path: str, message: str, hint: str | None = None) -> None:
        self.path = path
        self.hint = hint
        text = f"{path}: {message}" if path else message
        if hint:
            text += f" (hint: {hint})"
        super().__init__(text)
