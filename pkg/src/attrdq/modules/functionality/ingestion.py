"""Reading delimited files (plain or compressed) into datasets of raw text columns."""

import csv
import gzip
import io
import logging
import re
import tarfile
import zipfile
import zlib
from collections import Counter
from pathlib import Path
from typing import Iterable, List, NamedTuple, Optional, Sequence, TextIO, Union

from ..constants import (
    ACCEPTED_INNER_EXTENSIONS,
    SNIFF_SAMPLE_LINES,
    SYNTHESIZED_COLUMN_PREFIX,
    UNSUPPORTED_EXTENSIONS,
)
from ..data_types import ColumnProfile, Dataset, Delimiter
from ..dictionaries import FormatsDictionary, phrase_tokens
from ..errors import ArchiveMemberError, IngestionError, UnsupportedFormatError

logger = logging.getLogger(__name__)

ENCODING = "utf-8-sig"

NUMBER_RE = re.compile(r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?")

# Raised by corrupt or truncated archives and compressed streams
_ARCHIVE_ERRORS = (zipfile.BadZipFile, tarfile.TarError, EOFError, zlib.error, NotImplementedError)

# Tried in this order; ties keep the earlier candidate
_CANDIDATES = (Delimiter.COMMA, Delimiter.SEMICOLON)


class LoadOptions(NamedTuple):
    """Overrides for load_dataset; None means detect."""
    delimiter: Optional[Delimiter] = None
    header: Optional[bool] = None
    inner: Optional[str] = None
    formats: Optional[FormatsDictionary] = None


def is_number(text: str) -> bool:
    return NUMBER_RE.fullmatch(text.strip()) is not None


def _is_tar(name: str) -> bool:
    lowered = name.lower()
    return lowered.endswith((".tar.gz", ".tgz", ".tar"))


def _check_member_name(name: str) -> None:
    lowered = name.lower()
    if lowered.endswith(UNSUPPORTED_EXTENSIONS):
        raise UnsupportedFormatError(f"unsupported format: {name} (spreadsheets are not parsed)")
    if not lowered.endswith(ACCEPTED_INNER_EXTENSIONS):
        raise ArchiveMemberError(f"member {name!r} is not a .txt, .csv or .data file")


def _text(data: bytes) -> TextIO:
    return io.StringIO(data.decode(ENCODING, errors="replace"), newline="")


def _data_members(names: Iterable[str]) -> List[str]:
    return sorted(n for n in names if n.lower().endswith(ACCEPTED_INNER_EXTENSIONS))


def _read_zip(path: Path, inner: Optional[str]) -> TextIO:
    with zipfile.ZipFile(path) as archive:
        members = _data_members(i.filename for i in archive.infolist() if not i.is_dir())
        if inner is None:
            raise ArchiveMemberError(f"{path.name} is an archive; choose a member", members)
        _check_member_name(inner)
        if inner not in archive.namelist():
            raise ArchiveMemberError(f"no member {inner!r} in {path.name}", members)
        logger.info(f"Reading member {inner} from {path.name}")
        return _text(archive.read(inner))


def _read_tar(path: Path, inner: Optional[str]) -> TextIO:
    with tarfile.open(path, "r:*") as archive:
        files = [m for m in archive.getmembers() if m.isfile()]
        members = _data_members(m.name for m in files)
        if inner is None:
            raise ArchiveMemberError(f"{path.name} is an archive; choose a member", members)
        _check_member_name(inner)
        member = next((m for m in files if m.name == inner), None)
        if member is None:
            raise ArchiveMemberError(f"no member {inner!r} in {path.name}", members)
        logger.info(f"Reading member {inner} from {path.name}")
        return _text(archive.extractfile(member).read())


def open_input(path: Union[str, Path], inner: Optional[str] = None) -> TextIO:
    """Open a data file as text, decompressing archives transparently.

    ``.gz`` holds a single file and is read directly. ``.zip`` and ``.tar.gz``
    need ``inner`` to choose the member; without it the error lists the members.
    A corrupt archive raises IngestionError naming the file.
    """
    path = Path(path)
    if not path.exists():
        raise IngestionError(f"input file not found: {path}")
    name = path.name.lower()
    if name.endswith(UNSUPPORTED_EXTENSIONS):
        raise UnsupportedFormatError(f"unsupported format: {path.name} (spreadsheets are not parsed)")

    try:
        if name.endswith(".zip"):
            return _read_zip(path, inner)
        if _is_tar(name):
            return _read_tar(path, inner)
    except _ARCHIVE_ERRORS as e:
        raise IngestionError(f"{path.name}: unreadable archive ({e})") from e

    if name.endswith(".gz"):
        if name[:-3].endswith(UNSUPPORTED_EXTENSIONS):
            raise UnsupportedFormatError(f"unsupported format: {path.name} (spreadsheets are not parsed)")
        return gzip.open(path, "rt", encoding=ENCODING, errors="replace", newline="")

    return path.open("r", encoding=ENCODING, errors="replace", newline="")


def read_text(path: Union[str, Path], inner: Optional[str] = None) -> str:
    """Whole decoded contents of an input file; truncated or corrupt gzip data raises IngestionError."""
    path = Path(path)
    try:
        with open_input(path, inner) as stream:
            return stream.read()
    except (EOFError, zlib.error, gzip.BadGzipFile) as e:
        raise IngestionError(f"{path.name}: corrupt or truncated compressed data ({e})") from e


def source_name(path: Path, inner: Optional[str] = None) -> str:
    """Name of the file actually analysed: the archive member, or the file without '.gz'."""
    if inner:
        return inner
    if path.name.lower().endswith(".gz") and not _is_tar(path.name):
        return path.name[:-3]
    return path.name


def _split(line: str, delimiter: Delimiter) -> List[str]:
    if delimiter is Delimiter.WHITESPACE:
        return line.split()
    return next(csv.reader([line], delimiter=delimiter.char), [])


def detect_delimiter(sample: Sequence[str]) -> Delimiter:
    """Choose the separator whose field count (>= 2) is shared by the most sample lines.

    Falls back to whitespace when neither comma nor semicolon gives such a count.
    """
    lines = [line for line in sample if line.strip()]
    if not lines:
        raise IngestionError("cannot detect the delimiter of an empty sample")
    best, best_score = Delimiter.WHITESPACE, 0
    for candidate in _CANDIDATES:
        widths = Counter(len(_split(line, candidate)) for line in lines)
        score = max((n for width, n in widths.items() if width >= 2), default=0)
        if score > best_score:
            best, best_score = candidate, score
    return best


def _matches_keyword(cell: str, formats: Optional[FormatsDictionary]) -> bool:
    return formats is not None and bool(phrase_tokens(cell)) and cell in formats


def detect_header(
    first_row: Sequence[str],
    subsequent_rows: Sequence[Sequence[str]],
    formats: Optional[FormatsDictionary] = None,
) -> bool:
    """Decide whether the first row names the columns.

    True when the first row has no numeric cell while some column whose first
    cell is text is mostly numeric below it, or when a first-row cell is a
    formats dictionary keyword.
    """
    if not subsequent_rows:
        return False
    if any(_matches_keyword(cell, formats) for cell in first_row):
        return True
    if any(is_number(cell) for cell in first_row):
        return False
    for j, cell in enumerate(first_row):
        below = [row[j] for row in subsequent_rows if j < len(row)]
        if below and sum(is_number(v) for v in below) / len(below) > 0.5:
            return True
    return False


def _clean(cell: str) -> str:
    cell = cell.strip()
    if len(cell) >= 2 and cell[0] == '"' and cell[-1] == '"':
        cell = cell[1:-1].strip()
    return cell


def _unique_names(names: Sequence[str]) -> List[str]:
    """Fill blank names with col_k and suffix repeats as name_2, name_3, ..."""
    result: List[str] = []
    taken = set()
    for k, name in enumerate(names, start=1):
        base = name or f"{SYNTHESIZED_COLUMN_PREFIX}{k}"
        candidate, n = base, 1
        while candidate in taken:
            n += 1
            candidate = f"{base}_{n}"
        taken.add(candidate)
        result.append(candidate)
    return result


def _read_rows(text: str, delimiter: Delimiter, name: str) -> List[List[str]]:
    if delimiter is Delimiter.WHITESPACE:
        rows = [line.split() for line in text.splitlines()]
    else:
        reader = csv.reader(io.StringIO(text, newline=""), delimiter=delimiter.char)
        try:
            rows = list(reader)
        except csv.Error as e:
            # an unbalanced quote swallows the rest of the file into one field
            raise IngestionError(f"{name}: malformed row near line {reader.line_num} ({e})") from e
    # blank lines carry no row; a line of empty fields does
    return [[_clean(c) for c in row] for row in rows if len(row) > 1 or any(c.strip() for c in row)]


def load_dataset(path: Union[str, Path], options: Optional[LoadOptions] = None) -> Dataset:
    """Read a delimited file into named columns of trimmed raw text."""
    options = options or LoadOptions()
    path = Path(path)
    text = read_text(path, options.inner)

    delimiter = options.delimiter
    if delimiter is None:
        sample = [line for line in text.splitlines() if line.strip()][:SNIFF_SAMPLE_LINES]
        if not sample:
            raise IngestionError(f"{path.name}: no data rows")
        delimiter = detect_delimiter(sample)
    rows = _read_rows(text, delimiter, path.name)
    if not rows:
        raise IngestionError(f"{path.name}: no data rows")

    had_header = options.header
    if had_header is None:
        had_header = detect_header(rows[0], rows[1:SNIFF_SAMPLE_LINES], options.formats)
    header, data = (rows[0], rows[1:]) if had_header else ([], rows)
    if not data:
        raise IngestionError(f"{path.name}: no data rows")

    width = max(len(header), max(len(row) for row in data))
    names = _unique_names(list(header) + [""] * (width - len(header)))
    padded_rows = [i for i, row in enumerate(data) if len(row) < width]
    columns = [[] for _ in range(width)]
    for row in data:
        for j in range(width):
            columns[j].append(row[j] if j < len(row) else "")

    logger.info(
        f"Loaded {path.name}: {len(data)} rows x {width} columns, "
        f"delimiter={delimiter.value}, header={had_header}, padded rows={len(padded_rows)}"
    )
    return Dataset(
        source_name=source_name(path, options.inner),
        columns=[ColumnProfile(name=n, cells=cells) for n, cells in zip(names, columns)],
        row_count=len(data),
        delimiter=delimiter,
        had_header=had_header,
        padded_rows=padded_rows,
    )


def dump_dataset(dataset: Dataset) -> str:
    """Write a dataset back out with its own delimiter."""
    header = [c.name for c in dataset.columns] if dataset.had_header else None
    rows = list(zip(*(c.cells for c in dataset.columns)))
    if dataset.delimiter is Delimiter.WHITESPACE:
        lines = ([" ".join(header)] if header else []) + [" ".join(row) for row in rows]
        return "".join(line + "\n" for line in lines)
    buffer = io.StringIO()
    writer = csv.writer(buffer, delimiter=dataset.delimiter.char, lineterminator="\n")
    if header:
        writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()
