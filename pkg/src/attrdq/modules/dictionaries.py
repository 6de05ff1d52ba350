"""Formats and Abbreviations dictionaries: loading, validation, lookup and statistics.

File grammar (both dictionaries): one ``key<TAB>value`` entry per line, blank lines
and lines starting with ``#`` are ignored. Keys are matched case-insensitively.
"""

import io
import logging
import re
from collections import Counter
from pathlib import Path
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, TextIO, Union

from pydantic import Field, PrivateAttr, model_validator

from .data_types import FrozenModel, SemanticType
from .errors import DictionaryLoadError
from .semantic_model import parse_type_name

logger = logging.getLogger(__name__)

_WORD_RE = re.compile(r"[^\W_]+")


def phrase_tokens(text: str) -> List[str]:
    """Lowercase alphanumeric words of a phrase."""
    return _WORD_RE.findall(text.lower())


class FormatEntry(FrozenModel):
    keyword: str
    semantic_type: SemanticType
    position: int


class KeywordMatch(NamedTuple):
    semantic_type: SemanticType
    keyword: str
    position: int


class FormatFrequency(NamedTuple):
    label: str
    frequency: int
    percentage: float


class FormatsDictionary(FrozenModel):
    """Ordered keyword -> semantic type map."""
    entries: List[FormatEntry] = Field(default_factory=list)

    _index: Dict[str, FormatEntry] = PrivateAttr(default_factory=dict)
    _max_words: int = PrivateAttr(default=0)

    @model_validator(mode="after")
    def check_unique(self) -> "FormatsDictionary":
        seen = set()
        for entry in self.entries:
            if entry.keyword in seen:
                raise ValueError(f"duplicate keyword {entry.keyword!r}")
            seen.add(entry.keyword)
        return self

    def model_post_init(self, __context) -> None:
        self._index = {entry.keyword: entry for entry in self.entries}
        self._max_words = max((len(e.keyword.split()) for e in self.entries), default=0)

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, keyword: str) -> bool:
        return " ".join(phrase_tokens(keyword)) in self._index

    def get(self, keyword: str) -> Optional[FormatEntry]:
        return self._index.get(" ".join(phrase_tokens(keyword)))

    def lookup(self, phrase: Sequence[str]) -> Optional[KeywordMatch]:
        return lookup(self, phrase)


class AbbreviationsDictionary(FrozenModel):
    """Abbreviation -> expansion phrase map."""
    entries: Dict[str, str] = Field(default_factory=dict)

    @model_validator(mode="after")
    def check_entries(self) -> "AbbreviationsDictionary":
        for abbreviation, expansion in self.entries.items():
            if not expansion.strip():
                raise ValueError(f"empty expansion for {abbreviation!r}")
            if abbreviation == expansion:
                raise ValueError(f"{abbreviation!r} maps to itself")
        return self

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, abbreviation: str) -> bool:
        return abbreviation in self.entries

    def expansion(self, abbreviation: str) -> Optional[str]:
        return self.entries.get(abbreviation)


def _entries(source: Union[TextIO, Iterable[str]], source_name: Optional[str]) -> Iterable[tuple]:
    """Yield (line_number, key, value) for every non-comment line."""
    for line_number, raw in enumerate(source, start=1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        key, tab, value = line.partition("\t")
        if not tab:
            raise DictionaryLoadError("expected two tab-separated fields", line_number, source_name)
        yield line_number, key, value.strip()


def load_formats_dictionary(
    source: Union[TextIO, Iterable[str]], source_name: Optional[str] = None
) -> FormatsDictionary:
    """Parse a formats dictionary (``keyword<TAB>type`` lines)."""
    entries: List[FormatEntry] = []
    seen: Dict[str, int] = {}
    for line_number, key, value in _entries(source, source_name):
        keyword = " ".join(phrase_tokens(key))
        if not keyword:
            raise DictionaryLoadError("empty keyword", line_number, source_name)
        if keyword in seen:
            raise DictionaryLoadError(
                f"duplicate keyword {keyword!r} (first defined on line {seen[keyword]})",
                line_number, source_name,
            )
        try:
            semantic_type = parse_type_name(value)
        except ValueError as e:
            raise DictionaryLoadError(str(e), line_number, source_name) from None
        seen[keyword] = line_number
        entries.append(FormatEntry(keyword=keyword, semantic_type=semantic_type, position=len(entries)))
    logger.debug(f"Loaded {len(entries)} format keywords from {source_name or 'stream'}")
    return FormatsDictionary(entries=entries)


def load_abbreviations_dictionary(
    source: Union[TextIO, Iterable[str]], source_name: Optional[str] = None
) -> AbbreviationsDictionary:
    """Parse an abbreviations dictionary (``abbr<TAB>expansion`` lines)."""
    entries: Dict[str, str] = {}
    lines: Dict[str, int] = {}
    for line_number, key, value in _entries(source, source_name):
        words = phrase_tokens(key)
        if len(words) != 1:
            raise DictionaryLoadError(
                f"abbreviation {key.strip()!r} must be a single word", line_number, source_name
            )
        abbreviation = words[0]
        expansion = " ".join(phrase_tokens(value))
        if abbreviation in entries:
            raise DictionaryLoadError(
                f"duplicate abbreviation {abbreviation!r} (first defined on line {lines[abbreviation]})",
                line_number, source_name,
            )
        if not expansion:
            raise DictionaryLoadError(f"empty expansion for {abbreviation!r}", line_number, source_name)
        if expansion == abbreviation:
            raise DictionaryLoadError(f"{abbreviation!r} maps to itself", line_number, source_name)
        entries[abbreviation] = expansion
        lines[abbreviation] = line_number
    logger.debug(f"Loaded {len(entries)} abbreviations from {source_name or 'stream'}")
    return AbbreviationsDictionary(entries=entries)


def load_formats_file(path: Union[str, Path]) -> FormatsDictionary:
    path = Path(path)
    with path.open(encoding="utf-8") as f:
        formats = load_formats_dictionary(f, source_name=str(path))
    logger.info(f"Formats dictionary {path}: {len(formats)} keywords")
    return formats


def load_abbreviations_file(path: Union[str, Path]) -> AbbreviationsDictionary:
    path = Path(path)
    with path.open(encoding="utf-8") as f:
        abbreviations = load_abbreviations_dictionary(f, source_name=str(path))
    logger.info(f"Abbreviations dictionary {path}: {len(abbreviations)} entries")
    return abbreviations


def dump_formats_dictionary(formats: FormatsDictionary) -> str:
    """Serialize back to the file grammar, in entry order."""
    buffer = io.StringIO()
    for entry in formats.entries:
        buffer.write(f"{entry.keyword}\t{entry.semantic_type.label}\n")
    return buffer.getvalue()


def dump_abbreviations_dictionary(abbreviations: AbbreviationsDictionary) -> str:
    buffer = io.StringIO()
    for abbreviation, expansion in abbreviations.entries.items():
        buffer.write(f"{abbreviation}\t{expansion}\n")
    return buffer.getvalue()


def lookup(formats: FormatsDictionary, phrase: Sequence[str]) -> Optional[KeywordMatch]:
    """Find the keyword a phrase matches.

    Keywords match as contiguous token runs. The longest matching keyword wins,
    ties go to the one that comes first in the dictionary.
    """
    longest = min(formats._max_words, len(phrase))
    for width in range(longest, 0, -1):
        found = [
            formats._index[key]
            for key in (" ".join(phrase[i:i + width]) for i in range(len(phrase) - width + 1))
            if key in formats._index
        ]
        if found:
            best = min(found, key=lambda entry: entry.position)
            return KeywordMatch(best.semantic_type, best.keyword, best.position)
    return None


def format_frequencies(formats: FormatsDictionary) -> List[FormatFrequency]:
    """Keyword count per format, most frequent first, with percentages to two decimals."""
    counts = Counter(entry.semantic_type.label for entry in formats.entries)
    total = sum(counts.values())
    # Counter.most_common keeps first-seen order among equal counts
    return [
        FormatFrequency(label, count, round(100.0 * count / total, 2))
        for label, count in counts.most_common()
    ]
