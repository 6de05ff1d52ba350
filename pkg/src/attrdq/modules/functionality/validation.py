"""Content checks per semantic type, producing quality issues and frequency distributions."""

import logging
import re
import unicodedata
from datetime import date, datetime
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from ..constants import (
    DATASET_SCOPE,
    DAY_FIRST_DATE_PATTERN,
    ISO_DATE_PATTERN,
    MIXED_TYPE_MIN_CELLS,
    MONTH_FIRST_DATE_PATTERN,
    TIME_PATTERNS,
    WEEKDAY_NAMES,
)
from ..data_types import (
    BOUNDED_KINDS,
    AnalysisConfig,
    ColumnProfile,
    Dataset,
    Evidence,
    FrequencyDistribution,
    FrequencyEntry,
    IssueKind,
    MissingMarkerSet,
    QualityIssue,
    SemanticType,
    TypeKind,
)
from ..semantic_model import (
    CAPITALIZED_KINDS,
    CATEGORICAL_KINDS,
    NUMERICAL_KINDS,
    SPECIAL_KINDS,
    STRING_KINDS,
    TEMPORAL_KINDS,
    sorted_dimensions,
)
from .ingestion import NUMBER_RE

logger = logging.getLogger(__name__)

# Kinds whose cells are all expected to be numbers
NUMBER_VALUED_KINDS = NUMERICAL_KINDS | BOUNDED_KINDS

_INTEGER_RE = re.compile(r"[+-]?\d+")
_TIME_RE = re.compile(r"(\d{1,2}):(\d{2})(?::(\d{2})(?:\.\d+)?)?")
_EMAIL_DOMAIN_RE = re.compile(r"[^\s@]+\.[^\s@]+")
_URL_RE = re.compile(r"(?i)(?:https?|ftp)://[^\s/?#]+(?:[/?#]\S*)?")
_IP_RE = re.compile(r"(\d{1,3})\.(\d{1,3})\.(\d{1,3})\.(\d{1,3})")
_POSTAL_RE = re.compile(r"[A-Za-z0-9](?:[A-Za-z0-9 -]*[A-Za-z0-9])?")
_PHONE_NOISE_RE = re.compile(r"[+\-() ]")
_FIRST_LETTER_RE = re.compile(r"[^\W\d_]")


def _config(config: Optional[AnalysisConfig]) -> AnalysisConfig:
    return config if config is not None else AnalysisConfig()


def _cells(column: ColumnProfile) -> pd.Series:
    return pd.Series(column.cells, dtype="object").str.strip()


def _missing_mask(cells: pd.Series, markers: MissingMarkerSet) -> pd.Series:
    return cells.str.lower().isin(markers.normalized)


def _present(column: ColumnProfile, config: AnalysisConfig) -> pd.Series:
    """Non-missing trimmed cells, indexed by row."""
    cells = _cells(column)
    return cells[~_missing_mask(cells, config.missing_markers)]


def _numeric_mask(values: pd.Series) -> pd.Series:
    return values.str.fullmatch(NUMBER_RE.pattern).astype(bool)


def _issue(
    column: str, kind: IssueKind, offending: pd.Series, config: AnalysisConfig, note: str
) -> QualityIssue:
    """Build an issue from the offending cells (a Series indexed by row)."""
    codes, uniques = pd.factorize(offending, sort=False)
    tally = np.bincount(codes, minlength=len(uniques))
    capped = [str(u) for u in uniques[:config.evidence_value_cap]]
    return QualityIssue(
        column=column,
        issue=kind,
        dimensions=sorted_dimensions(kind),
        evidence=Evidence(
            offending_values=capped,
            value_counts={v: int(n) for v, n in zip(capped, tally[:config.evidence_value_cap])},
            count=len(offending),
            example_rows=[int(i) for i in offending.index[:config.evidence_row_cap]],
        ),
        note=note,
    )


def _map_unique(values: pd.Series, parse: Callable) -> pd.Series:
    """Apply ``parse`` once per distinct value."""
    return values.map({v: parse(v) for v in values.unique()})


def check_missing(
    column: ColumnProfile,
    markers: Optional[MissingMarkerSet] = None,
    config: Optional[AnalysisConfig] = None,
) -> Optional[QualityIssue]:
    """Flag cells holding a missing-data marker, whatever the column's format."""
    config = _config(config)
    markers = markers or config.missing_markers
    cells = _cells(column)
    found = cells[_missing_mask(cells, markers)]
    if found.empty:
        return None
    return _issue(column.name, IssueKind.MISSING_DATA, found, config, "missing-value markers")


def check_numerical(
    column: ColumnProfile,
    non_negative: bool = False,
    bounds: Optional[Tuple[float, float]] = None,
    config: Optional[AnalysisConfig] = None,
) -> List[QualityIssue]:
    """Non-numeric cells, negative values (when non_negative) and values outside bounds."""
    config = _config(config)
    present = _present(column, config)
    numeric = _numeric_mask(present)
    issues = []
    wrong = present[~numeric]
    if not wrong.empty:
        issues.append(_issue(
            column.name, IssueKind.WRONG_DATA_TYPE, wrong, config, "non-numeric values in a numerical column"
        ))
    text = present[numeric]
    values = text.astype(float)
    if non_negative:
        negative = text[values < 0]
        if not negative.empty:
            issues.append(_issue(column.name, IssueKind.DOMAIN_VIOLATION, negative, config, "negative values"))
    if bounds is not None:
        lo, hi = bounds
        outside = text[(values < lo) | (values > hi)]
        if not outside.empty:
            issues.append(_issue(
                column.name, IssueKind.DOMAIN_VIOLATION, outside, config,
                f"values outside [{lo:g}, {hi:g}]",
            ))
    return issues


def check_id(column: ColumnProfile, config: Optional[AnalysisConfig] = None) -> List[QualityIssue]:
    """Identifiers must be unique and present."""
    config = _config(config)
    cells = _cells(column)
    missing = _missing_mask(cells, config.missing_markers)
    present = cells[~missing]
    duplicated = present[present.duplicated(keep=False)]
    issues = []
    if not duplicated.empty:
        issues.append(_issue(column.name, IssueKind.DUPLICATES, duplicated, config, "duplicate identifiers"))
    if not duplicated.empty or missing.any():
        offending = pd.concat([duplicated, cells[missing]]).sort_index()
        issues.append(_issue(
            column.name, IssueKind.UNIQUENESS_VIOLATION, offending, config,
            "column cannot serve as a primary key",
        ))
    return issues


def _starts_lowercase(text: str) -> bool:
    letter = _FIRST_LETTER_RE.search(text)
    return letter is not None and letter.group().islower()


def check_string_content(
    column: ColumnProfile, semantic_type: SemanticType, config: Optional[AnalysisConfig] = None
) -> List[QualityIssue]:
    """Text columns must not hold bare numbers; names and places start with a capital."""
    config = _config(config)
    present = _present(column, config)
    issues = []
    numbers = present[_numeric_mask(present)]
    if not numbers.empty:
        issues.append(_issue(
            column.name, IssueKind.NON_STRING_DATA_TYPE, numbers, config, "numeric values in a text column"
        ))
    if semantic_type.kind in CAPITALIZED_KINDS:
        lowercase = present[_map_unique(present, _starts_lowercase).astype(bool)]
        if not lowercase.empty:
            issues.append(_issue(
                column.name, IssueKind.WRONG_DATA_TYPE, lowercase, config, "improper capitalization"
            ))
    return issues


def frequency_distribution(name: str, present: pd.Series) -> FrequencyDistribution:
    """Counts per value, most frequent first, ties in order of first appearance."""
    codes, uniques = pd.factorize(present, sort=False)
    tally = np.bincount(codes, minlength=len(uniques))
    total = int(tally.sum())
    order = np.argsort(-tally, kind="stable")
    return FrequencyDistribution(
        column=name,
        entries=[
            FrequencyEntry(value=str(uniques[i]), count=int(tally[i]), fraction=float(tally[i]) / total)
            for i in order
        ],
        distinct_count=len(uniques),
    )


def check_categorical(
    column: ColumnProfile,
    max_categories: Optional[int] = None,
    binary: bool = False,
    config: Optional[AnalysisConfig] = None,
) -> Tuple[FrequencyDistribution, List[QualityIssue]]:
    """Frequency distribution plus too-many-categories and non-binary checks."""
    config = _config(config)
    max_categories = max_categories or config.max_categories
    present = _present(column, config)
    distribution = frequency_distribution(column.name, present)
    issues = []
    ranked = [entry.value for entry in distribution.entries]
    if distribution.distinct_count > max_categories:
        extra = present[present.isin(set(ranked[max_categories:]))]
        issues.append(_issue(
            column.name, IssueKind.EXTRANEOUS_DATA, extra, config,
            f"{distribution.distinct_count} distinct categories exceed the limit of {max_categories}",
        ))
    if binary and distribution.distinct_count > 2:
        extra = present[~present.isin(set(ranked[:2]))]
        issues.append(_issue(
            column.name, IssueKind.DOMAIN_VIOLATION, extra, config,
            f"binary column holds {distribution.distinct_count} distinct values",
        ))
    return distribution, issues


def _strptime(text: str, patterns) -> Optional[datetime]:
    for pattern in patterns:
        try:
            return datetime.strptime(text, pattern)
        except ValueError:
            continue
    return None


def _date_patterns(slash_pattern: str, with_time: bool) -> List[str]:
    dates = [ISO_DATE_PATTERN, slash_pattern]
    if not with_time:
        return dates
    patterns = [f"{d} {t}" for d in dates for t in TIME_PATTERNS]
    patterns += [f"{ISO_DATE_PATTERN}T{t}" for t in TIME_PATTERNS]
    return patterns


def _slash_pattern(present: pd.Series, sample_size: int) -> str:
    """Lock day-first or month-first for a column, by which parses more sampled cells."""
    sample = [v.replace("T", " ").split(" ")[0] for v in present.iloc[:sample_size]]
    day_first = sum(_strptime(v, [DAY_FIRST_DATE_PATTERN]) is not None for v in sample)
    month_first = sum(_strptime(v, [MONTH_FIRST_DATE_PATTERN]) is not None for v in sample)
    return MONTH_FIRST_DATE_PATTERN if month_first > day_first else DAY_FIRST_DATE_PATTERN


def _date_verdict(text: str, patterns: Sequence[str], start: date, end: date) -> str:
    """'ok', 'invalid', 'old' (before the window) or 'future' (after it)."""
    parsed = _strptime(text, patterns)
    if parsed is None:
        return "invalid"
    day = parsed.date()
    if day < start:
        return "old"
    if day > end:
        return "future"
    return "ok"


def _check_dates(column: ColumnProfile, with_time: bool, config: AnalysisConfig) -> List[QualityIssue]:
    present = _present(column, config)
    patterns = _date_patterns(_slash_pattern(present, config.date_sample_size), with_time)
    start, end = config.date_window_start, config.date_window_end
    verdicts = _map_unique(present, lambda v: _date_verdict(v, patterns, start, end))
    issues = []
    invalid = present[verdicts == "invalid"]
    if not invalid.empty:
        issues.append(_issue(
            column.name, IssueKind.WRONG_DATA_TYPE, invalid, config, "unparseable or invalid dates"
        ))
    too_old = present[verdicts == "old"]
    if not too_old.empty:
        issues.append(_issue(
            column.name, IssueKind.OUTDATED_TEMPORAL_DATA, too_old, config, f"dates before {start.isoformat()}"
        ))
    future = present[verdicts == "future"]
    if not future.empty:
        issues.append(_issue(
            column.name, IssueKind.DOMAIN_VIOLATION, future, config, f"dates after {end.isoformat()}"
        ))
    return issues


def _valid_time(text: str) -> bool:
    match = _TIME_RE.fullmatch(text)
    if not match:
        return False
    hours, minutes, seconds = (int(g) if g else 0 for g in match.groups())
    return hours < 24 and minutes < 60 and seconds < 60


def _check_times(column: ColumnProfile, config: AnalysisConfig) -> List[QualityIssue]:
    present = _present(column, config)
    valid = _map_unique(present, _valid_time).astype(bool)
    invalid = present[~valid]
    if invalid.empty:
        return []
    return [_issue(column.name, IssueKind.WRONG_DATA_TYPE, invalid, config, "invalid times of day")]


def _weekday_verdict(text: str) -> str:
    """'ok', 'range' (integer outside 1-7) or 'type'."""
    lowered = text.lower()
    if lowered in WEEKDAY_NAMES or lowered in {n[:3] for n in WEEKDAY_NAMES}:
        return "ok"
    if _INTEGER_RE.fullmatch(text):
        return "ok" if 1 <= int(text) <= 7 else "range"
    return "type"


def _check_weekdays(column: ColumnProfile, config: AnalysisConfig) -> List[QualityIssue]:
    present = _present(column, config)
    verdicts = _map_unique(present, _weekday_verdict)
    issues = []
    wrong = present[verdicts == "type"]
    if not wrong.empty:
        issues.append(_issue(column.name, IssueKind.WRONG_DATA_TYPE, wrong, config, "not a day of the week"))
    outside = present[verdicts == "range"]
    if not outside.empty:
        issues.append(_issue(column.name, IssueKind.DOMAIN_VIOLATION, outside, config, "weekday numbers outside [1, 7]"))
    return issues


def check_temporal(
    column: ColumnProfile, semantic_type: SemanticType, config: Optional[AnalysisConfig] = None
) -> List[QualityIssue]:
    """Dates, datetimes, times and weekdays; year/month/day/hour are range-checked numbers."""
    config = _config(config)
    kind = semantic_type.kind
    if kind is TypeKind.DATE:
        return _check_dates(column, False, config)
    if kind is TypeKind.DATETIME:
        return _check_dates(column, True, config)
    if kind is TypeKind.TIME:
        return _check_times(column, config)
    if kind is TypeKind.WEEKDAY:
        return _check_weekdays(column, config)
    return check_numerical(column, bounds=semantic_type.bounds, config=config)


def _valid_email(text: str) -> bool:
    local, at, domain = text.partition("@")
    return bool(at) and bool(local) and "@" not in domain and _EMAIL_DOMAIN_RE.fullmatch(domain) is not None


def _valid_ip(text: str) -> bool:
    match = _IP_RE.fullmatch(text)
    return match is not None and all(int(octet) <= 255 for octet in match.groups())


def _valid_phone(text: str) -> bool:
    digits = _PHONE_NOISE_RE.sub("", text)
    return digits.isdigit() and digits.isascii() and 7 <= len(digits) <= 15


def _valid_postal_code(text: str) -> bool:
    if not _POSTAL_RE.fullmatch(text):
        return False
    return 3 <= sum(c.isalnum() for c in text) <= 10


def _valid_money(text: str) -> bool:
    if text and unicodedata.category(text[0]) == "Sc":
        text = text[1:].lstrip()
    return NUMBER_RE.fullmatch(text) is not None


_SYNTAX_RULES: Dict[TypeKind, Callable[[str], bool]] = {
    TypeKind.EMAIL: _valid_email,
    TypeKind.URL: lambda text: _URL_RE.fullmatch(text) is not None,
    TypeKind.IP: _valid_ip,
    TypeKind.PHONE: _valid_phone,
    TypeKind.POSTAL_CODE: _valid_postal_code,
    TypeKind.MONEY: _valid_money,
}


def check_special(
    column: ColumnProfile, semantic_type: SemanticType, config: Optional[AnalysisConfig] = None
) -> List[QualityIssue]:
    """Syntax checks for emails, URLs, IPs, phones, postal codes and money; bounds for the rest."""
    config = _config(config)
    rule = _SYNTAX_RULES.get(semantic_type.kind)
    if rule is None:
        return check_numerical(column, bounds=semantic_type.bounds, config=config)
    present = _present(column, config)
    valid = _map_unique(present, rule).astype(bool)
    invalid = present[~valid]
    if invalid.empty:
        return []
    return [_issue(
        column.name, IssueKind.WRONG_DATA_TYPE, invalid, config, f"invalid {semantic_type.label} syntax"
    )]


def detect_structural_conflicts(
    dataset: Dataset, config: Optional[AnalysisConfig] = None
) -> List[QualityIssue]:
    """Padded ragged rows (dataset scope) and classified columns split between numbers and text.

    A column conflicts when both populations exceed the mixed-type threshold and
    hold at least two cells each. The evidence is the population the format does
    not expect: text in number-valued formats, numbers everywhere else.
    """
    config = _config(config)
    issues = []
    if dataset.padded_rows:
        rows = pd.Series([""] * len(dataset.padded_rows), index=dataset.padded_rows, dtype="object")
        issues.append(_issue(
            DATASET_SCOPE, IssueKind.STRUCTURAL_CONFLICTS, rows, config,
            f"{len(dataset.padded_rows)} rows had fewer fields than the widest row and were padded",
        ))
    threshold = config.mixed_type_threshold
    for column in dataset.columns:
        fmt = column.analysis.final_format if column.analysis else None
        if fmt is None:
            continue
        present = _present(column, config)
        if present.empty:
            continue
        numeric = _numeric_mask(present)
        numbers = int(numeric.sum())
        texts = len(present) - numbers
        share = numbers / len(present)
        if min(numbers, texts) < MIXED_TYPE_MIN_CELLS or share <= threshold or 1.0 - share <= threshold:
            continue
        offending = present[~numeric] if fmt.kind in NUMBER_VALUED_KINDS else present[numeric]
        issues.append(_issue(
            column.name, IssueKind.STRUCTURAL_CONFLICTS, offending, config,
            f"mixed numeric and text values ({share:.0%} numeric)",
        ))
    return issues


def validate_column(
    column: ColumnProfile,
    markers: Optional[MissingMarkerSet] = None,
    config: Optional[AnalysisConfig] = None,
) -> Tuple[List[QualityIssue], Optional[FrequencyDistribution]]:
    """Missing-marker check plus the one check family the column's format selects."""
    config = _config(config)
    if markers is not None:
        config = config.model_copy(update={"missing_markers": markers})
    if column.analysis is None:
        raise ValueError(f"column {column.name!r} has no label analysis")

    issues: List[QualityIssue] = []
    distribution = None
    missing = check_missing(column, config=config)
    if missing is not None:
        issues.append(missing)

    fmt = column.analysis.final_format
    if fmt is None:
        return issues, None
    kind = fmt.kind
    if kind in NUMERICAL_KINDS:
        issues += check_numerical(
            column, non_negative=kind is TypeKind.NUMERICAL_NON_NEGATIVE, bounds=fmt.bounds, config=config
        )
    elif kind is TypeKind.ID:
        issues += check_id(column, config=config)
    elif kind in STRING_KINDS:
        issues += check_string_content(column, fmt, config=config)
    elif kind in CATEGORICAL_KINDS:
        distribution, found = check_categorical(column, binary=kind is TypeKind.BINARY, config=config)
        issues += found
    elif kind in TEMPORAL_KINDS:
        issues += check_temporal(column, fmt, config=config)
    elif kind in SPECIAL_KINDS:
        issues += check_special(column, fmt, config=config)
    logger.debug(f"Column {column.name!r} ({fmt.token}): {len(issues)} issues")
    return issues, distribution
