"""Semantic type detection from column headers and descriptions."""

import logging
import re
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from pydantic import ValidationError

from ..constants import UNCLASSIFIED_LABEL
from ..data_types import Dataset, DetectionEntry, LabelAnalysis, Provenance, SemanticType, TypeKind
from ..errors import ConfigError
from ..dictionaries import AbbreviationsDictionary, FormatsDictionary, KeywordMatch, lookup, phrase_tokens
from ..semantic_model import GENERIC_KINDS, SPECIFIC_KINDS, parse_type_name, semantic_type

logger = logging.getLogger(__name__)

_CAMEL_BOUNDARY_RE = re.compile(r"(?<=[a-z])(?=[A-Z])")

ID_TOKEN = "id"


def tokenize(header: str) -> List[str]:
    """Split a header into lowercase words.

    Boundaries are whitespace, punctuation (underscore, hyphen, period, slash, ...)
    and lower-to-upper camelCase transitions.
    """
    return phrase_tokens(_CAMEL_BOUNDARY_RE.sub(" ", header))


def expand_abbreviations(tokens: Sequence[str], abbreviations: AbbreviationsDictionary) -> List[str]:
    """Replace each known abbreviation by its expansion words, in a single pass."""
    expanded: List[str] = []
    for token in tokens:
        expansion = abbreviations.expansion(token)
        if expansion is None:
            expanded.append(token)
        else:
            expanded.extend(expansion.split())
    return expanded


def _match(tokens: Sequence[str], formats: FormatsDictionary) -> Tuple[Optional[SemanticType], Optional[str], bool]:
    """Return (format, matched keyword, id rule fired)."""
    if ID_TOKEN in tokens:
        return semantic_type(TypeKind.ID), ID_TOKEN, True
    words = [t for t in tokens if not t.isdigit()]
    found: Optional[KeywordMatch] = lookup(formats, words)
    if found is None:
        return None, None, False
    return found.semantic_type, found.keyword, False


def identify_format(tokens: Sequence[str], formats: FormatsDictionary) -> Optional[SemanticType]:
    """Format named by a token list: 'id' first, then the dictionary."""
    return _match(tokens, formats)[0]


def resolve_format(
    name_format: Optional[SemanticType], description_format: Optional[SemanticType]
) -> Optional[SemanticType]:
    """Pick the final format from the name and description findings.

    The name wins, except that a generic string/numerical name gives way to a
    more specific description format. None means unclassified.
    """
    if name_format is None:
        return description_format
    if (
        name_format.kind in GENERIC_KINDS
        and description_format is not None
        and description_format.kind in SPECIFIC_KINDS
    ):
        return description_format
    return name_format


def analyze_label(
    header: str,
    description: Optional[str],
    formats: FormatsDictionary,
    abbreviations: AbbreviationsDictionary,
) -> LabelAnalysis:
    """Detect the semantic type of one column from its header and optional description."""
    tokens = tokenize(header)
    expanded = expand_abbreviations(tokens, abbreviations)
    name_format, keyword, id_rule = _match(expanded, formats)

    description_format = None
    description_keyword = None
    if description and (name_format is None or name_format.kind in GENERIC_KINDS):
        description_tokens = expand_abbreviations(tokenize(description), abbreviations)
        description_format, description_keyword, _ = _match(description_tokens, formats)

    final_format = resolve_format(name_format, description_format)

    if final_format is None:
        provenance = Provenance.UNCLASSIFIED
    elif final_format is not name_format:
        provenance = Provenance.FROM_DESCRIPTION
        keyword = description_keyword
    elif id_rule:
        provenance = Provenance.ID_RULE
    elif expanded != tokens and identify_format(tokens, formats) != name_format:
        provenance = Provenance.FROM_ABBREVIATION
    else:
        provenance = Provenance.FROM_NAME

    analysis = LabelAnalysis(
        original_header=header,
        description=description,
        tokens=tokens,
        expanded_tokens=expanded,
        name_format=name_format,
        description_format=description_format,
        final_format=final_format,
        provenance=provenance,
        matched_keyword=keyword if final_format is not None else None,
    )
    logger.debug(f"Column {header!r}: {analysis.final_label} ({provenance.value})")
    return analysis


def detection_entry(column: str, analysis: LabelAnalysis) -> DetectionEntry:
    """The detect listing line for one analysed column."""
    return DetectionEntry(
        column=column,
        format=analysis.final_label,
        provenance=analysis.provenance,
        keyword=analysis.matched_keyword,
    )


def analysis_from_entry(entry: DetectionEntry) -> LabelAnalysis:
    """Rebuild a column's header analysis from a detect listing line.

    Raises ConfigError when the format is unknown or contradicts the provenance.
    """
    tokens = tokenize(entry.column)
    try:
        fmt = None if entry.format == UNCLASSIFIED_LABEL else parse_type_name(entry.format)
        from_description = entry.provenance is Provenance.FROM_DESCRIPTION
        return LabelAnalysis(
            original_header=entry.column,
            tokens=tokens,
            expanded_tokens=tokens,
            name_format=None if from_description else fmt,
            description_format=fmt if from_description else None,
            final_format=fmt,
            provenance=entry.provenance,
            matched_keyword=entry.keyword if fmt is not None else None,
        )
    except (ValueError, ValidationError) as e:
        raise ConfigError(f"column {entry.column!r} in the analysed columns listing: {e}") from None


def analyses_from_listing(entries: Iterable[DetectionEntry]) -> Dict[str, LabelAnalysis]:
    """Map column names to the analyses a detect listing recorded; a repeated column keeps its last line."""
    return {entry.column: analysis_from_entry(entry) for entry in entries}


def analyze_dataset(
    dataset: Dataset,
    formats: FormatsDictionary,
    abbreviations: AbbreviationsDictionary,
    descriptions: Optional[Mapping[str, str]] = None,
    analysed: Optional[Mapping[str, LabelAnalysis]] = None,
) -> Dataset:
    """Return a copy of the dataset with every column's header analysed.

    ``descriptions`` maps column names to description text and takes precedence
    over a description already held by the column. Columns named in ``analysed``
    take that analysis as given instead of being looked up again.
    """
    descriptions = descriptions or {}
    analysed = analysed or {}
    columns = []
    for column in dataset.columns:
        description = descriptions.get(column.name, column.description)
        analysis = analysed.get(column.name)
        if analysis is None:
            analysis = analyze_label(column.name, description, formats, abbreviations)
        columns.append(column.model_copy(update={"description": description, "analysis": analysis}))
    classified = sum(1 for c in columns if c.analysis.is_classified)
    reused = sum(1 for c in dataset.columns if c.name in analysed)
    logger.info(
        f"{dataset.source_name}: classified {classified} of {len(columns)} columns"
        + (f" ({reused} from the analysed columns listing)" if reused else "")
    )
    return dataset.model_copy(update={"columns": columns})
