"""Exception hierarchy shared by all splang modules."""


class SplangError(Exception):
    """Base class for all errors raised by this package."""


class TermSyntaxError(SplangError):
    """Malformed text in any of the line formats (terms, regexes, grammars, automata).

    Carries the byte offset of the offending character when known.
    """

    def __init__(self, message: str, offset: int | None = None):
        self.offset = offset
        if offset is not None:
            message = f"{message} (at offset {offset})"
        super().__init__(message)


class ModeMismatchError(SplangError):
    """Two languages with different semantics modes were combined."""


class EnumerationCapError(SplangError):
    """A bounded enumeration grew past the configured cardinality cap."""


class FragmentError(SplangError):
    """A regex outside the parallel fragment was passed to the grammar converter."""


class NotParallelLinearError(SplangError):
    """A grammar without parallel-linear shape was passed to the automaton builder."""
