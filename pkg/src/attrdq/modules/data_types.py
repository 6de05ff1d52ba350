"""Data types and models for attrdq."""

from datetime import date, timedelta
from enum import Enum
from pathlib import Path
from typing import Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .constants import (
    DEFAULT_DATE_SAMPLE_SIZE,
    DEFAULT_DATE_WINDOW_START,
    DEFAULT_MAX_CATEGORIES,
    DEFAULT_MISSING_MARKERS,
    DEFAULT_MIXED_TYPE_THRESHOLD,
    EVIDENCE_ROW_CAP,
    EVIDENCE_VALUE_CAP,
    REPORT_SCHEMA_VERSION,
    UNCLASSIFIED_LABEL,
)


# Base class for immutable models
class FrozenModel(BaseModel):
    """Base model for values that never change after construction."""
    model_config = ConfigDict(frozen=True)


# Taxonomies
class TypeKind(str, Enum):
    """Semantic type members."""
    AGE = "age"
    BINARY = "binary"
    CATEGORICAL = "categorical"
    CITY = "city"
    COUNTRY = "country"
    DATE = "date"
    DATETIME = "datetime"
    DAY = "day"
    EMAIL = "email"
    HOUR = "hour"
    ID = "id"
    IP = "ip"
    LATITUDE = "latitude"
    LONGITUDE = "longitude"
    MONEY = "money"
    MODEL_NAME = "model_name"
    MONTH = "month"
    NAME = "name"
    NORMALIZED = "normalized"
    NUMERICAL = "numerical"
    NUMERICAL_NON_NEGATIVE = "numerical_non_negative"
    PERCENTAGE = "percentage"
    PH = "ph"
    PHONE = "phone"
    POSTAL_CODE = "postal_code"
    STATE = "state"
    STREET = "street"
    STRING = "string"
    TIME = "time"
    WEEKDAY = "weekday"
    YEAR = "year"
    URL = "url"
    NUMERICAL_BETWEEN = "numerical_between"


BOUNDED_KINDS = frozenset({
    TypeKind.AGE, TypeKind.DAY, TypeKind.HOUR, TypeKind.LATITUDE, TypeKind.LONGITUDE,
    TypeKind.MONTH, TypeKind.NORMALIZED, TypeKind.PERCENTAGE, TypeKind.PH, TypeKind.YEAR,
    TypeKind.NUMERICAL_BETWEEN,
})

# Display labels that differ from the enum value
_KIND_LABELS = {
    TypeKind.NUMERICAL_NON_NEGATIVE: "numerical>=0",
    TypeKind.MODEL_NAME: "model name",
    TypeKind.POSTAL_CODE: "postal code",
}


class IssueKind(str, Enum):
    """Data quality issue categories."""
    MISSING_DATA = "missing_data"
    EXTRANEOUS_DATA = "extraneous_data"
    OUTDATED_TEMPORAL_DATA = "outdated_temporal_data"
    DUPLICATES = "duplicates"
    STRUCTURAL_CONFLICTS = "structural_conflicts"
    DOMAIN_VIOLATION = "domain_violation"
    WRONG_DATA_TYPE = "wrong_data_type"
    UNIQUENESS_VIOLATION = "uniqueness_violation"
    NON_STRING_DATA_TYPE = "non_string_data_type"


class Dimension(str, Enum):
    """Data quality dimensions."""
    ACCURACY = "accuracy"
    COMPLETENESS = "completeness"
    CONSISTENCY = "consistency"
    UNIQUENESS = "uniqueness"
    TIMELINESS = "timeliness"


class Provenance(str, Enum):
    """Where a column's final format came from."""
    FROM_NAME = "from_name"
    FROM_DESCRIPTION = "from_description"
    FROM_ABBREVIATION = "from_abbreviation"
    ID_RULE = "id_rule"
    UNCLASSIFIED = "unclassified"


class Delimiter(str, Enum):
    """Field separators recognised in delimited files."""
    COMMA = "comma"
    SEMICOLON = "semicolon"
    WHITESPACE = "whitespace"

    @property
    def char(self) -> Optional[str]:
        """Separator character, None for runs of whitespace."""
        return {"comma": ",", "semicolon": ";"}.get(self.value)


def format_bound(value: float) -> str:
    """Render a bound without a trailing '.0' for whole numbers."""
    if float(value).is_integer():
        return str(int(value))
    return repr(float(value))


class SemanticType(FrozenModel):
    """A member of the semantic type taxonomy.

    Bounded members carry an inclusive (lo, hi) range, every other member carries none.
    """
    kind: TypeKind
    bounds: Optional[Tuple[float, float]] = None

    @model_validator(mode="after")
    def check_bounds(self) -> "SemanticType":
        if self.kind in BOUNDED_KINDS:
            if self.bounds is None:
                raise ValueError(f"{self.kind.value} requires bounds")
            lo, hi = self.bounds
            if lo > hi:
                raise ValueError(f"lower bound {lo} exceeds upper bound {hi}")
        elif self.bounds is not None:
            raise ValueError(f"{self.kind.value} carries no bounds")
        return self

    @property
    def is_bounded(self) -> bool:
        return self.bounds is not None

    @property
    def token(self) -> str:
        """Lowercase snake_case name used in reports."""
        if self.kind is TypeKind.NUMERICAL_BETWEEN:
            lo, hi = self.bounds
            return f"numerical_between({format_bound(lo)},{format_bound(hi)})"
        return self.kind.value

    @property
    def label(self) -> str:
        """Name used in dictionary files and listings."""
        if self.kind is TypeKind.NUMERICAL_BETWEEN:
            lo, hi = self.bounds
            return f"numerical between {format_bound(lo)} and {format_bound(hi)}"
        return _KIND_LABELS.get(self.kind, self.kind.value)

    def __str__(self) -> str:
        return self.token


# Label analysis
class LabelAnalysis(FrozenModel):
    """Outcome of analysing one column header (and optional description)."""
    original_header: str
    description: Optional[str] = None
    tokens: List[str] = Field(default_factory=list)
    expanded_tokens: List[str] = Field(default_factory=list)
    name_format: Optional[SemanticType] = None
    description_format: Optional[SemanticType] = None
    # None means the column is unclassified
    final_format: Optional[SemanticType] = None
    provenance: Provenance = Provenance.UNCLASSIFIED
    matched_keyword: Optional[str] = None

    @model_validator(mode="after")
    def check_consistency(self) -> "LabelAnalysis":
        if (self.final_format is None) != (self.provenance is Provenance.UNCLASSIFIED):
            raise ValueError("provenance 'unclassified' must match a missing final format")
        if self.provenance is Provenance.ID_RULE and (
            self.final_format is None or self.final_format.kind is not TypeKind.ID
        ):
            raise ValueError("id_rule provenance requires the id format")
        return self

    @property
    def is_classified(self) -> bool:
        return self.final_format is not None

    @property
    def final_token(self) -> str:
        return self.final_format.token if self.final_format else UNCLASSIFIED_LABEL

    @property
    def final_label(self) -> str:
        return self.final_format.label if self.final_format else UNCLASSIFIED_LABEL


# Ingestion
class ColumnProfile(BaseModel):
    """One column of raw cells plus its header analysis."""
    name: str
    description: Optional[str] = None
    cells: List[str] = Field(default_factory=list)
    analysis: Optional[LabelAnalysis] = None


class Dataset(BaseModel):
    """A delimited file materialised as named columns of raw text cells."""
    source_name: str
    columns: List[ColumnProfile] = Field(default_factory=list)
    row_count: int = Field(ge=0)
    delimiter: Delimiter
    had_header: bool
    # Data-row indices that were padded with empty cells
    padded_rows: List[int] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_shape(self) -> "Dataset":
        names = [c.name for c in self.columns]
        if len(set(names)) != len(names):
            raise ValueError("column names must be unique")
        for column in self.columns:
            if len(column.cells) != self.row_count:
                raise ValueError(
                    f"column {column.name!r} has {len(column.cells)} cells, expected {self.row_count}"
                )
        return self

    def column(self, name: str) -> ColumnProfile:
        for column in self.columns:
            if column.name == name:
                return column
        raise KeyError(name)


# Validation
class Evidence(FrozenModel):
    """What was found: capped distinct values, their counts and example row indices."""
    offending_values: List[str] = Field(default_factory=list)
    value_counts: Dict[str, int] = Field(default_factory=dict)
    count: int = Field(ge=1)
    example_rows: List[int] = Field(default_factory=list)


class QualityIssue(FrozenModel):
    """One detected violation in a column (or, with column '*', in the dataset)."""
    column: str
    issue: IssueKind
    dimensions: List[Dimension] = Field(min_length=1)
    evidence: Evidence
    note: str = ""


class FrequencyEntry(FrozenModel):
    value: str
    count: int
    fraction: float


class FrequencyDistribution(FrozenModel):
    """Value frequencies over the non-missing cells of a column."""
    column: str
    entries: List[FrequencyEntry] = Field(default_factory=list)
    distinct_count: int = 0


class MissingMarkerSet(FrozenModel):
    """Cell values that denote absent data; the empty string is always included."""
    markers: Tuple[str, ...] = DEFAULT_MISSING_MARKERS

    @field_validator("markers", mode="after")
    @classmethod
    def always_empty(cls, markers: Tuple[str, ...]) -> Tuple[str, ...]:
        stripped = [m.strip() for m in markers]
        if "" not in stripped:
            stripped.append("")
        return tuple(dict.fromkeys(stripped))

    @property
    def normalized(self) -> frozenset:
        """Markers as compared against trimmed, lowercased cells."""
        return frozenset(m.lower() for m in self.markers)

    def matches(self, cell: str) -> bool:
        return cell.strip().lower() in self.normalized

    @classmethod
    def parse(cls, text: str) -> "MissingMarkerSet":
        """Build a set from a comma-separated override such as '?,NA'."""
        return cls(markers=tuple(part.strip() for part in text.split(",")))


class AnalysisConfig(BaseModel):
    """Thresholds and switches for validation."""
    missing_markers: MissingMarkerSet = Field(default_factory=MissingMarkerSet)
    max_categories: int = Field(default=DEFAULT_MAX_CATEGORIES, ge=1)
    date_window_start: date = date.fromisoformat(DEFAULT_DATE_WINDOW_START)
    reference_date: date = Field(default_factory=date.today)
    date_sample_size: int = Field(default=DEFAULT_DATE_SAMPLE_SIZE, ge=1)
    mixed_type_threshold: float = Field(default=DEFAULT_MIXED_TYPE_THRESHOLD, gt=0, lt=1)
    workers: Optional[int] = Field(default=None, ge=1)
    evidence_value_cap: int = Field(default=EVIDENCE_VALUE_CAP, ge=1)
    evidence_row_cap: int = Field(default=EVIDENCE_ROW_CAP, ge=1)

    @property
    def date_window_end(self) -> date:
        """Latest plausible date: one year after the reference date."""
        try:
            return self.reference_date.replace(year=self.reference_date.year + 1)
        except ValueError:
            # 29 February
            return self.reference_date + timedelta(days=365)


# Reporting
class DatasetInfo(FrozenModel):
    source_name: str
    row_count: int
    column_count: int
    delimiter: Delimiter
    had_header: bool


class ColumnReport(FrozenModel):
    name: str
    final_format: str
    provenance: Provenance
    issues: List[QualityIssue] = Field(default_factory=list)
    distribution: Optional[FrequencyDistribution] = None


class ReportSummary(FrozenModel):
    issue_counts_by_kind: Dict[str, int] = Field(default_factory=dict)
    dimension_counts: Dict[str, int] = Field(default_factory=dict)
    columns_with_issues: int = 0
    classified_fraction: float = 0.0
    format_counts: Dict[str, int] = Field(default_factory=dict)
    columns_per_marker: Dict[str, int] = Field(default_factory=dict)


class QualityReport(FrozenModel):
    """Per-dataset assembly of column findings and summary statistics."""
    schema_version: int = REPORT_SCHEMA_VERSION
    dataset: DatasetInfo
    columns: List[ColumnReport] = Field(default_factory=list)
    dataset_issues: List[QualityIssue] = Field(default_factory=list)
    summary: ReportSummary = Field(default_factory=ReportSummary)


class CorpusSummary(FrozenModel):
    """Tallies over every dataset assessed in one run."""
    dataset_count: int = 0
    datasets_with_issues: int = 0
    column_count: int = 0
    columns_with_issues: int = 0
    classified_fraction: float = 0.0
    issue_counts_by_kind: Dict[str, int] = Field(default_factory=dict)
    dimension_counts: Dict[str, int] = Field(default_factory=dict)
    format_counts: Dict[str, int] = Field(default_factory=dict)
    columns_per_marker: Dict[str, int] = Field(default_factory=dict)


class CorpusReport(FrozenModel):
    """One report per dataset, in input order, plus the combined summary."""
    schema_version: int = REPORT_SCHEMA_VERSION
    datasets: List[QualityReport] = Field(default_factory=list)
    summary: CorpusSummary = Field(default_factory=CorpusSummary)


class DetectionEntry(BaseModel):
    """One line of the detect listing; the JSON listing can be fed back to analyze."""
    column: str
    format: str
    provenance: Provenance
    keyword: Optional[str] = None


# Request parameter types
OutputFormat = Literal["json", "text", "csv"]
DelimiterMode = Literal["auto", "comma", "semicolon", "space"]
HeaderMode = Literal["auto", "yes", "no"]


class CliConfig(BaseModel):
    """Options shared by the command-line commands."""
    input_path: Optional[Path] = None
    # analyze only: several inputs are assessed together
    input_paths: List[Path] = Field(default_factory=list)
    inner: Optional[str] = None
    formats_dict: Path
    abbrev_dict: Path
    delimiter: DelimiterMode = "auto"
    header: HeaderMode = "auto"
    output_format: OutputFormat = "json"
    output: Optional[Path] = None
    max_categories: int = Field(default=DEFAULT_MAX_CATEGORIES, ge=1)
    missing_markers: Optional[str] = None
    descriptions: Optional[Path] = None
    analysed_columns: Optional[Path] = None
    workers: Optional[int] = Field(default=None, ge=1)
    reference_date: Optional[date] = None

    @model_validator(mode="after")
    def check_inputs(self) -> "CliConfig":
        if self.inner is not None and len(self.input_paths) > 1:
            raise ValueError("--inner selects one archive member and needs a single input")
        return self

    @property
    def inputs(self) -> List[Path]:
        """Every input file, whichever command set them."""
        if self.input_paths:
            return list(self.input_paths)
        return [self.input_path] if self.input_path is not None else []

    def analysis_config(self) -> AnalysisConfig:
        """Translate command-line options into validation settings."""
        options = {"max_categories": self.max_categories, "workers": self.workers}
        if self.missing_markers is not None:
            options["missing_markers"] = MissingMarkerSet.parse(self.missing_markers)
        if self.reference_date is not None:
            options["reference_date"] = self.reference_date
        return AnalysisConfig(**options)
