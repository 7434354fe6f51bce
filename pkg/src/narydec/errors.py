"""Exception hierarchy shared by the library and the CLI."""


class NarydecError(Exception):
    """Base class for all errors raised by narydec."""


class FieldMismatchError(NarydecError, ValueError):
    """Two operands live over different base fields."""


class UnsupportedFieldError(NarydecError):
    """The operation needs a prime field (enumeration) but got the rationals."""


class ScalarFormatError(NarydecError, ValueError):
    pass


class SingularMatrixError(NarydecError, ValueError):
    pass


class FormatError(NarydecError, ValueError):
    """Malformed tensor or matrix document.

    ``field`` names the offending part of the document.
    """

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


class InternalInconsistencyError(NarydecError):
    """A computed result failed its own post-hoc verification.

    This points at a bug (or a falsified statement), never at bad input.
    """


class SearchExhausted(NarydecError):
    """A bounded search hit its limits without an answer.

    Distinct from a definitive negative, which is reported as ``None``.
    """


class NotADecompositionBlockError(NarydecError, ValueError):
    pass


class OrbitHypothesisError(NarydecError, ValueError):
    """The basis change does not commute with the map."""
