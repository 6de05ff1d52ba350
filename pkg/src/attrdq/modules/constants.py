"""Constants for the attribute-based data quality assessment."""

from pathlib import Path

# Packaged seed dictionaries
DATA_DIR = Path(__file__).resolve().parent.parent / "data"
FORMATS_DICTIONARY_FILE = "formats_dictionary.txt"
ABBREVIATIONS_DICTIONARY_FILE = "abbreviations_dictionary.txt"

# Environment variables
ENV_DICT_DIR = "ATTRDQ_DICT_DIR"
ENV_LOG_LEVEL = "ATTRDQ_LOG_LEVEL"

# Output formats
OUTPUT_FORMAT_JSON = "json"
OUTPUT_FORMAT_TEXT = "text"
OUTPUT_FORMAT_CSV = "csv"

# Ingestion
SNIFF_SAMPLE_LINES = 20
ACCEPTED_INNER_EXTENSIONS = (".txt", ".csv", ".data")
UNSUPPORTED_EXTENSIONS = (".xls", ".xlsx")
SYNTHESIZED_COLUMN_PREFIX = "col_"

# Label used for columns without a semantic type
UNCLASSIFIED_LABEL = "NaN"

# Scope marker for issues that belong to the whole dataset
DATASET_SCOPE = "*"

# Validation defaults
DEFAULT_MISSING_MARKERS = ("?", "", "NA", "N/A", "null", "NaN")
DEFAULT_MAX_CATEGORIES = 1000
DEFAULT_DATE_WINDOW_START = "1900-01-01"
DEFAULT_DATE_SAMPLE_SIZE = 50
DEFAULT_MIXED_TYPE_THRESHOLD = 0.2
# A single odd cell is an outlier, not a population
MIXED_TYPE_MIN_CELLS = 2
EVIDENCE_VALUE_CAP = 20
EVIDENCE_ROW_CAP = 10

# Report
REPORT_SCHEMA_VERSION = 1
CSV_REPORT_HEADER = ("dataset", "column", "format", "issue", "dimensions", "count", "examples")

# Accepted temporal layouts, tried in this order
ISO_DATE_PATTERN = "%Y-%m-%d"
DAY_FIRST_DATE_PATTERN = "%d/%m/%Y"
MONTH_FIRST_DATE_PATTERN = "%m/%d/%Y"
TIME_PATTERNS = ("%H:%M:%S", "%H:%M")

WEEKDAY_NAMES = (
    "monday", "tuesday", "wednesday", "thursday", "friday", "saturday", "sunday",
)
