"""Exceptions raised by attrdq."""

from typing import Optional, Sequence


class AttrDQError(Exception):
    """Base class for every error the library raises on bad input."""


class ConfigError(AttrDQError):
    """Invalid option or configuration value."""


class DictionaryLoadError(AttrDQError):
    """A dictionary file could not be parsed."""

    def __init__(self, message: str, line: Optional[int] = None, source: Optional[str] = None):
        self.line = line
        self.source = source
        location = ""
        if source:
            location = source
        if line is not None:
            location = f"{location}:{line}" if location else f"line {line}"
        super().__init__(f"{location}: {message}" if location else message)


class IngestionError(AttrDQError):
    """The input file could not be turned into a dataset."""


class UnsupportedFormatError(IngestionError):
    """The input is a format that is not parsed (e.g. spreadsheets)."""


class ArchiveMemberError(IngestionError):
    """An archive member was not given or could not be found."""

    def __init__(self, message: str, members: Sequence[str] = ()):
        self.members = list(members)
        if self.members:
            message = f"{message}; available members: {', '.join(self.members)}"
        super().__init__(message)
