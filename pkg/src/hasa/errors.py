"""Exception types shared across the package."""


class HasaError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(HasaError):
    """Syntax or well-formedness error in one of the text formats.

    Carries an optional source location so command-line diagnostics can
    point at the offending line/column.
    """

    def __init__(self, message, line=None, column=None, source=None):
        super().__init__(message)
        self.message = message
        self.line = line
        self.column = column
        self.source = source

    def __str__(self):
        prefix = self.source or ""
        if self.line is not None:
            prefix += f":{self.line}"
            if self.column is not None:
                prefix += f":{self.column}"
        return f"{prefix}: {self.message}" if prefix else self.message


class PositionNotInTree(HasaError):
    """A position was addressed that the tree does not contain."""


class RootReplacementError(HasaError):
    """The root was replaced by a hedge that is not a single tree."""


class SymbolNotInAlphabet(HasaError):
    """A word fed to a horizontal automaton used an undeclared symbol."""


class StateBudgetExceeded(HasaError):
    """Determinization exceeded the configured subset-state budget."""

    def __init__(self, budget):
        super().__init__(f"determinization exceeded the state budget of {budget}")
        self.budget = budget


class EnumerationLimitExceeded(HasaError):
    """Bounded tree enumeration produced more trees than the caller allowed."""


class EmptyPoolError(HasaError):
    """An update rule needs instances of a type whose pool is empty."""

    def __init__(self, state):
        super().__init__(f"no instance trees available for type state {state!r}")
        self.state = state


class UnknownTypeStateError(HasaError):
    """An update rule referenced a state the types automaton does not have."""

    def __init__(self, state):
        super().__init__(f"unknown type state {state!r}")
        self.state = state
