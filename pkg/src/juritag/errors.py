"""Exception types raised across the package."""


class JuritagError(Exception):
    """Base class for all package-specific errors."""


class ConlluParseError(JuritagError):
    """Malformed CoNLL-U input; carries the 1-based line number."""

    def __init__(self, message, line_number=None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class BracketParseError(JuritagError):
    """Malformed bracketed constituency tree; carries the character offset."""

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"offset {offset}: {message}"
        super().__init__(message)
        self.offset = offset


class CycleError(JuritagError):
    """A dependency graph contains a cycle; names one token on it."""

    def __init__(self, token_index, message=None):
        super().__init__(message or f"dependency cycle through token {token_index}")
        self.token_index = token_index


class TaxonomyError(JuritagError):
    """Invalid concept-taxonomy file (duplicate term, orphan node, ...)."""


class EmbeddingError(JuritagError):
    """Invalid embedding file or vector operation."""


class AspectConfigError(JuritagError):
    """Invalid aspect configuration."""


class DocumentError(JuritagError):
    """A document failed validation (token/tree mismatch, bad indices, ...)."""


class IndexFormatError(JuritagError):
    """Persisted corpus index has an unknown or invalid format."""


class RecommendError(JuritagError):
    """Invalid recommendation request (empty selection, unknown document, ...)."""
