class ExtractorError(Exception):
    """Base class for extractor failures."""


class EncoderLoadFailure(ExtractorError):
    """The requested encoder could not be resolved or loaded."""


class EmptyLabelLine(ExtractorError):
    """A label file contains an empty line."""

    def __init__(self, line: int, message: str | None = None):
        self.line = line
        super().__init__(message or f"line {line} is empty")
