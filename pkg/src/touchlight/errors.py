"""Shared error types for the codec, engine, and pipeline layers."""


class RangeError(ValueError):
    """A coordinate, pressure, or level is outside its declared range."""


class FramingError(ValueError):
    """A wire frame failed structural validation (sync bits, header, length)."""


class ChecksumError(ValueError):
    """A light command's checksum byte does not match its payload."""


class TraceFormatError(ValueError):
    """A trace file line could not be parsed; carries the 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no
