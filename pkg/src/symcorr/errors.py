"""Exception hierarchy shared by all modules."""


class SymcorrError(Exception):
    """Base class for package errors."""


class InvalidInputError(SymcorrError, ValueError):
    pass


class InsufficientDataError(InvalidInputError):
    pass


class DomainError(SymcorrError, ValueError):
    pass


class SeriesParseError(InvalidInputError):
    def __init__(self, message, line=None):
        super().__init__(message)
        self.line = line
