# Exception hierarchy
# Every failure raised by lexsimp derives from LexSimpError


class LexSimpError(Exception):
    """Base class for lexsimp errors."""


class ConfigError(LexSimpError, ValueError):
    """Configuration document is invalid."""


class TsvParseError(LexSimpError, ValueError):
    """A TSV line does not follow the expected layout."""

    def __init__(self, message: str, line_no: int | None = None) -> None:
        self.line_no = line_no
        prefix = f"line {line_no}: " if line_no is not None else ""
        super().__init__(f"{prefix}{message}")


class SpanResolutionError(TsvParseError):
    """The target does not occur as a whole token in its context."""


class ResourceLoadError(LexSimpError):
    """A lexical resource could not be loaded."""

    def __init__(
        self, message: str, path: str | None = None, line_no: int | None = None
    ) -> None:
        self.path = path
        self.line_no = line_no
        where = path or ""
        if line_no is not None:
            where = f"{where}:{line_no}" if where else f"line {line_no}"
        super().__init__(f"{where}: {message}" if where else message)


class VerbNetLookupError(LexSimpError, KeyError):
    """Unknown VerbNet class id."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""


class NotAVerbNetVerb(LexSimpError):
    """The target lemma belongs to no VerbNet class."""


class ClassVoteError(LexSimpError):
    """The VSD vote had nothing to count."""


class MaskedLMBackendError(LexSimpError):
    """The masked-LM backend failed or violated its protocol."""

    def __init__(self, message: str, payload: object | None = None) -> None:
        self.payload = payload
        super().__init__(message)


class EmptyCandidatesError(LexSimpError):
    """No module produced a candidate for an instance."""

    def __init__(self, message: str, trace: object | None = None) -> None:
        self.trace = trace
        super().__init__(message)


class EvaluationError(LexSimpError):
    """Gold and prediction files cannot be evaluated together."""
