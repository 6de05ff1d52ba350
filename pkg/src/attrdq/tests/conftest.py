"""Shared test fixtures and configuration."""

from datetime import date
from typing import Optional, Sequence, Union

import pytest

from ..modules.constants import ABBREVIATIONS_DICTIONARY_FILE, DATA_DIR, FORMATS_DICTIONARY_FILE
from ..modules.data_types import (
    AnalysisConfig,
    ColumnProfile,
    LabelAnalysis,
    MissingMarkerSet,
    Provenance,
    SemanticType,
    TypeKind,
)
from ..modules.dictionaries import load_abbreviations_file, load_formats_file
from ..modules.semantic_model import semantic_type

# The dirty students table used throughout as the golden fixture
STUDENTS_CSV = (
    "Student ID,Last Name,First Name,Age,Country,Humidity,BirthDate\n"
    "I345343,white,3,200,USA,45,3/04/2121\n"
    "J892932,Stewart,Ronald,28,?,70,0/1/2010\n"
    "J892932,Johnson,Peter,56,Australia,-200,null\n"
)

STUDENTS_HEADERS = ["Student ID", "Last Name", "First Name", "Age", "Country", "Humidity", "BirthDate"]

REFERENCE_DATE = date(2024, 6, 1)


@pytest.fixture(scope="session")
def formats():
    """The packaged seed formats dictionary."""
    return load_formats_file(DATA_DIR / FORMATS_DICTIONARY_FILE)


@pytest.fixture(scope="session")
def abbreviations():
    """The packaged seed abbreviations dictionary."""
    return load_abbreviations_file(DATA_DIR / ABBREVIATIONS_DICTIONARY_FILE)


@pytest.fixture
def markers():
    return MissingMarkerSet()


@pytest.fixture
def config():
    """Validation settings pinned to a fixed reference date."""
    return AnalysisConfig(reference_date=REFERENCE_DATE, workers=2)


@pytest.fixture
def students_path(tmp_path):
    """The students table written as a CSV file."""
    path = tmp_path / "students.csv"
    path.write_text(STUDENTS_CSV, encoding="utf-8")
    return path


def build_column(
    cells: Sequence[str],
    fmt: Union[None, TypeKind, SemanticType] = None,
    name: str = "column",
) -> ColumnProfile:
    """A column whose header analysis resolved to ``fmt`` (None leaves it unclassified)."""
    if isinstance(fmt, TypeKind):
        fmt = semantic_type(fmt)
    analysis = LabelAnalysis(
        original_header=name,
        name_format=fmt,
        final_format=fmt,
        provenance=Provenance.FROM_NAME if fmt is not None else Provenance.UNCLASSIFIED,
    )
    return ColumnProfile(name=name, cells=list(cells), analysis=analysis)


@pytest.fixture
def make_column():
    """Factory for analysed columns."""
    return build_column
