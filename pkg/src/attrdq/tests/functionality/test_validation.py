"""Tests for per-format content checks."""

import random
from collections import Counter

import pytest

from ...modules.constants import DATASET_SCOPE
from ...modules.data_types import (
    AnalysisConfig,
    ColumnProfile,
    Dataset,
    Delimiter,
    Dimension,
    IssueKind,
    MissingMarkerSet,
    TypeKind,
)
from ...modules.functionality.validation import (
    check_categorical,
    check_id,
    check_missing,
    check_numerical,
    check_special,
    check_string_content,
    check_temporal,
    detect_structural_conflicts,
    validate_column,
)
from ...modules.semantic_model import semantic_type
from ..conftest import build_column

pytestmark = pytest.mark.unit

MARKERS = {"?", "", "na", "n/a", "null", "nan"}


def kinds(issues):
    return [issue.issue for issue in issues]


def offending(issues, kind):
    return next(issue for issue in issues if issue.issue is kind).evidence.offending_values


def brute_number(cell: str):
    try:
        return float(cell)
    except ValueError:
        return None


class TestMissing:
    """Test suite for missing-marker detection."""

    def test_country(self, make_column):
        """Test finding a '?' in a country column."""
        issue = check_missing(make_column(["USA", "?", "Australia"], TypeKind.COUNTRY, "Country"))
        assert issue.issue is IssueKind.MISSING_DATA
        assert issue.dimensions == [Dimension.COMPLETENESS]
        assert issue.evidence.count == 1
        assert issue.evidence.offending_values == ["?"]
        assert issue.evidence.example_rows == [1]

    def test_none_found(self, make_column):
        """Test a column with no markers."""
        assert check_missing(make_column(["a", "b", "c"])) is None

    def test_marker_counts(self, make_column):
        """Each marker is counted separately."""
        issue = check_missing(make_column(["", "NA", "?", " na "]))
        assert issue.evidence.count == 4
        assert issue.evidence.offending_values == ["", "NA", "?", "na"]
        assert issue.evidence.value_counts == {"": 1, "NA": 1, "?": 1, "na": 1}

    def test_custom_markers_keep_empty(self, make_column):
        """The empty string stays a marker whatever the override."""
        issue = check_missing(make_column(["", "NA", "null", "?"]), MissingMarkerSet.parse("?,NA"))
        assert issue.evidence.offending_values == ["", "NA", "?"]

    def test_matches_brute_force_scan(self, make_column):
        """Missing markers match a cell-by-cell scan on random columns."""
        rng = random.Random(1)
        pool = ["?", "", " ", " NA ", "na", "null", "NULL", "N/A", "nan", "x", "12", "abc", "Na N", "??"]
        for _ in range(1000):
            cells = [rng.choice(pool) for _ in range(rng.randint(0, 15))]
            expected = [i for i, c in enumerate(cells) if c.strip().lower() in MARKERS]
            issue = check_missing(make_column(cells))
            if not expected:
                assert issue is None
                continue
            assert issue.evidence.count == len(expected)
            assert issue.evidence.example_rows == expected[:10]
            assert sum(issue.evidence.value_counts.values()) == len(expected)


class TestNumerical:
    """Test suite for numerical checks."""

    def test_negative_humidity(self, make_column):
        """Test a negative value in a non-negative column."""
        issues = check_numerical(make_column(["45", "70", "-200"]), non_negative=True)
        assert kinds(issues) == [IssueKind.DOMAIN_VIOLATION]
        assert offending(issues, IssueKind.DOMAIN_VIOLATION) == ["-200"]

    def test_age_out_of_bounds(self, make_column):
        """Test an age above its range."""
        issues = check_numerical(make_column(["200"]), bounds=(0, 150))
        assert kinds(issues) == [IssueKind.DOMAIN_VIOLATION]
        assert issues[0].dimensions == [Dimension.ACCURACY]

    def test_clean(self, make_column):
        """Test a clean numeric column."""
        assert check_numerical(make_column(["1", "2", "3"]), bounds=(0, 10)) == []

    def test_both_checks(self, make_column):
        """Test a column with both wrong types and bad values."""
        issues = check_numerical(make_column(["abc", "-1", "11", "5", "?"]), non_negative=True, bounds=(0, 10))
        assert kinds(issues) == [IssueKind.WRONG_DATA_TYPE, IssueKind.DOMAIN_VIOLATION, IssueKind.DOMAIN_VIOLATION]
        assert issues[0].evidence.offending_values == ["abc"]
        assert issues[1].evidence.offending_values == ["-1"]
        assert issues[2].evidence.offending_values == ["-1", "11"]

    def test_comma_decimals_are_not_numbers(self, make_column):
        """Test that decimal commas are not numbers."""
        issues = check_numerical(make_column(["1,5", "2.5"]))
        assert offending(issues, IssueKind.WRONG_DATA_TYPE) == ["1,5"]

    def _random_cells(self, rng):
        words = ["abc", "12a", "--1", "", "?", "1,5", "NA"]
        makers = [
            lambda: str(rng.randint(-100, 100)),
            lambda: f"{rng.uniform(-5, 5):.2f}",
            lambda: rng.choice(["1e3", "-2.5e-1", "+7", ".5"]),
            lambda: rng.choice(words),
        ]
        return [rng.choice(makers)() for _ in range(rng.randint(0, 15))]

    def test_flags_match_brute_force(self, make_column):
        """Numeric flags match a cell-by-cell scan on random columns."""
        rng = random.Random(2)
        for _ in range(1000):
            cells = self._random_cells(rng)
            lo = rng.randint(-50, 0)
            hi = rng.randint(0, 50)
            issues = check_numerical(make_column(cells), non_negative=True, bounds=(lo, hi))

            present = [(i, c) for i, c in enumerate(cells) if c.strip().lower() not in MARKERS]
            parsed = [(i, brute_number(c)) for i, c in present]
            wrong = [i for i, v in parsed if v is None]
            negative = [i for i, v in parsed if v is not None and v < 0]
            outside = [i for i, v in parsed if v is not None and (v < lo or v > hi)]

            # wrong type first, then negatives, then out-of-range values
            expected = [rows for rows in (wrong, negative, outside) if rows]
            assert [issue.evidence.count for issue in issues] == [len(rows) for rows in expected]
            assert [issue.evidence.example_rows for issue in issues] == [rows[:10] for rows in expected]
            if wrong:
                assert issues[0].issue is IssueKind.WRONG_DATA_TYPE
            assert all(issue.issue is IssueKind.DOMAIN_VIOLATION for issue in issues[1 if wrong else 0:])


class TestIdentifiers:
    """Test suite for id columns."""

    def test_duplicate_ids(self, make_column):
        """Test repeated identifiers."""
        issues = check_id(make_column(["I345343", "J892932", "J892932"]))
        assert kinds(issues) == [IssueKind.DUPLICATES, IssueKind.UNIQUENESS_VIOLATION]
        assert issues[0].evidence.offending_values == ["J892932"]
        assert issues[0].evidence.count == 2

    def test_unique(self, make_column):
        """Test a unique identifier column."""
        assert check_id(make_column(["a", "b", "c"])) == []

    def test_all_same(self, make_column):
        """Test an identifier column with a single value."""
        issues = check_id(make_column(["x", "x", "x"]))
        assert issues[0].evidence.count == 3
        assert issues[0].evidence.value_counts == {"x": 3}
        assert kinds(issues)[1] is IssueKind.UNIQUENESS_VIOLATION

    def test_missing_breaks_uniqueness(self, make_column):
        """A missing identifier makes the column unusable as a key."""
        issues = check_id(make_column(["a", "?", "b"]))
        assert kinds(issues) == [IssueKind.UNIQUENESS_VIOLATION]

    def test_matches_brute_force_count(self, make_column):
        """Duplicate counts match a brute-force count on random columns."""
        rng = random.Random(3)
        pool = ["a", "b", "c", "d", "e", "f", "g", "?", ""]
        for _ in range(1000):
            cells = [rng.choice(pool) for _ in range(rng.randint(0, 12))]
            present = [c for c in cells if c not in ("?", "")]
            counts = Counter(present)
            duplicated = [c for c in present if counts[c] >= 2]
            missing = len(cells) - len(present)

            issues = check_id(make_column(cells))
            expected = []
            if duplicated:
                expected.append(IssueKind.DUPLICATES)
            if duplicated or missing:
                expected.append(IssueKind.UNIQUENESS_VIOLATION)
            assert kinds(issues) == expected
            if duplicated:
                evidence = issues[0].evidence
                assert evidence.count == len(duplicated)
                assert evidence.value_counts == {v: n for v, n in counts.items() if n >= 2}
            if expected:
                assert issues[-1].evidence.count == len(duplicated) + missing


class TestStrings:
    """Test suite for text columns."""

    def test_capitalization(self, make_column):
        """Test names that start in lowercase."""
        issues = check_string_content(make_column(["white", "Stewart", "Johnson"]), semantic_type(TypeKind.NAME))
        assert kinds(issues) == [IssueKind.WRONG_DATA_TYPE]
        assert issues[0].evidence.offending_values == ["white"]
        assert issues[0].note == "improper capitalization"

    def test_number_in_name(self, make_column):
        """Test a number in a name column."""
        issues = check_string_content(make_column(["3", "Ronald", "Peter"]), semantic_type(TypeKind.NAME))
        assert kinds(issues) == [IssueKind.NON_STRING_DATA_TYPE]
        assert issues[0].evidence.offending_values == ["3"]

    def test_clean(self, make_column):
        """Test a clean name column."""
        assert check_string_content(make_column(["Lisbon", "Perth"]), semantic_type(TypeKind.CITY)) == []

    def test_plain_strings_skip_capitalization(self, make_column):
        """Test that plain strings are not checked for capitals."""
        assert check_string_content(make_column(["lower case"]), semantic_type(TypeKind.STRING)) == []

    def test_first_letter_decides(self, make_column):
        """Only the first letter decides the capitalization."""
        issues = check_string_content(make_column(["Rua Augusta", "1st avenue"]), semantic_type(TypeKind.STREET))
        assert offending(issues, IssueKind.WRONG_DATA_TYPE) == ["1st avenue"]


class TestCategorical:
    """Test suite for categorical columns."""

    def test_distribution(self, make_column):
        """Test the frequency distribution of a categorical column."""
        distribution, issues = check_categorical(make_column(["a", "a", "b", "?"]))
        assert issues == []
        assert distribution.distinct_count == 2
        assert [(e.value, e.count) for e in distribution.entries] == [("a", 2), ("b", 1)]
        assert distribution.entries[0].fraction == pytest.approx(2 / 3)

    def test_binary_with_three_values(self, make_column):
        """Test a binary column with a third value."""
        distribution, issues = check_categorical(make_column(["y", "n", "y", "maybe"]), binary=True)
        assert kinds(issues) == [IssueKind.DOMAIN_VIOLATION]
        assert issues[0].evidence.offending_values == ["maybe"]
        assert distribution.distinct_count == 3

    def test_too_many_categories(self, make_column):
        """Test a column over the category limit."""
        cells = [f"v{i}" for i in range(4001)]
        distribution, issues = check_categorical(make_column(cells), max_categories=1000)
        assert kinds(issues) == [IssueKind.EXTRANEOUS_DATA]
        assert issues[0].evidence.count == 3001
        assert len(issues[0].evidence.offending_values) == 20
        assert issues[0].dimensions == [Dimension.CONSISTENCY, Dimension.UNIQUENESS]
        assert distribution.distinct_count == 4001

    def test_ties_keep_first_appearance(self, make_column):
        """Test that equal counts keep first-appearance order."""
        distribution, _ = check_categorical(make_column(["b", "a", "c", "a", "b"]))
        assert [e.value for e in distribution.entries] == ["b", "a", "c"]

    def test_distribution_matches_brute_force(self, make_column):
        """Distributions match a brute-force count on random columns."""
        rng = random.Random(4)
        pool = ["red", "green", "blue", "Red", "?", "", "NA", "x"]
        for _ in range(1000):
            cells = [rng.choice(pool) for _ in range(rng.randint(0, 20))]
            present = [c for c in cells if c.lower() not in MARKERS]
            distribution, _ = check_categorical(make_column(cells))
            assert distribution.distinct_count == len(set(present))
            assert sum(e.count for e in distribution.entries) == len(present)
            assert {e.value: e.count for e in distribution.entries} == dict(Counter(present))
            if present:
                assert sum(e.fraction for e in distribution.entries) == pytest.approx(1.0, abs=1e-9)
            counts = [e.count for e in distribution.entries]
            assert counts == sorted(counts, reverse=True)


class TestTemporal:
    """Test suite for temporal columns."""

    def test_birth_dates(self, make_column, config):
        """Test the students birth dates."""
        column = make_column(["3/04/2121", "0/1/2010", "null"], TypeKind.DATE, "BirthDate")
        issues = check_temporal(column, semantic_type(TypeKind.DATE), config)
        assert kinds(issues) == [IssueKind.WRONG_DATA_TYPE, IssueKind.DOMAIN_VIOLATION]
        assert offending(issues, IssueKind.WRONG_DATA_TYPE) == ["0/1/2010"]
        assert offending(issues, IssueKind.DOMAIN_VIOLATION) == ["3/04/2121"]

    def test_clean_date(self, make_column, config):
        """Test a clean date column."""
        assert check_temporal(make_column(["2020-01-15"]), semantic_type(TypeKind.DATE), config) == []

    def test_outdated(self, make_column, config):
        """Test dates before the window start."""
        issues = check_temporal(make_column(["1899-12-31", "1900-01-01"]), semantic_type(TypeKind.DATE), config)
        assert kinds(issues) == [IssueKind.OUTDATED_TEMPORAL_DATA]
        assert issues[0].dimensions == [Dimension.TIMELINESS]
        assert issues[0].evidence.offending_values == ["1899-12-31"]

    def test_window_end_follows_reference_date(self, make_column):
        """The latest plausible date moves with the reference date."""
        column = make_column(["2025-05-31", "2025-06-02"])
        config = AnalysisConfig(reference_date="2024-06-01")
        issues = check_temporal(column, semantic_type(TypeKind.DATE), config)
        assert offending(issues, IssueKind.DOMAIN_VIOLATION) == ["2025-06-02"]

    def test_calendar_invalid(self, make_column, config):
        """Test dates that do not exist."""
        issues = check_temporal(make_column(["30/02/2020", "2020-13-01"]), semantic_type(TypeKind.DATE), config)
        assert offending(issues, IssueKind.WRONG_DATA_TYPE) == ["30/02/2020", "2020-13-01"]

    def test_month_first_column(self, make_column, config):
        """Test a column written month first."""
        column = make_column(["12/31/2020", "01/15/2021", "02/03/2021"])
        assert check_temporal(column, semantic_type(TypeKind.DATE), config) == []

    def test_datetimes(self, make_column, config):
        """Test datetime values."""
        column = make_column(["2020-01-15T10:30", "2020-01-15 10:30:05", "15/01/2020 23:59", "2020-01-15 24:00"])
        issues = check_temporal(column, semantic_type(TypeKind.DATETIME), config)
        assert offending(issues, IssueKind.WRONG_DATA_TYPE) == ["2020-01-15 24:00"]

    def test_times(self, make_column, config):
        """Test time values."""
        column = make_column(["23:59:59", "00:00", "25:00:00", "12:60", "noon"])
        issues = check_temporal(column, semantic_type(TypeKind.TIME), config)
        assert kinds(issues) == [IssueKind.WRONG_DATA_TYPE]
        assert issues[0].evidence.offending_values == ["25:00:00", "12:60", "noon"]

    def test_weekdays(self, make_column, config):
        """Test weekday names and numbers."""
        column = make_column(["Monday", "tue", "3", "9", "blue", "SUNDAY"])
        issues = check_temporal(column, semantic_type(TypeKind.WEEKDAY), config)
        assert kinds(issues) == [IssueKind.WRONG_DATA_TYPE, IssueKind.DOMAIN_VIOLATION]
        assert offending(issues, IssueKind.WRONG_DATA_TYPE) == ["blue"]
        assert offending(issues, IssueKind.DOMAIN_VIOLATION) == ["9"]

    @pytest.mark.parametrize("kind,cells,bad", [
        (TypeKind.YEAR, ["1999", "3000"], ["3000"]),
        (TypeKind.MONTH, ["12", "13"], ["13"]),
        (TypeKind.DAY, ["0", "31"], ["0"]),
        (TypeKind.HOUR, ["24", "25"], ["25"]),
    ])
    def test_numeric_parts(self, make_column, config, kind, cells, bad):
        """Test bounded temporal numbers such as hours and months."""
        issues = check_temporal(make_column(cells), semantic_type(kind), config)
        assert offending(issues, IssueKind.DOMAIN_VIOLATION) == bad


class TestSpecial:
    """Test suite for special formats."""

    @pytest.mark.parametrize("kind,cells,bad", [
        (TypeKind.IP, ["256.1.1.1", "192.168.0.1", "1.2.3"], ["256.1.1.1", "1.2.3"]),
        (TypeKind.URL, ["https://example.edu", "ftp://x.org/file", "www.example.edu", "http://"], ["www.example.edu", "http://"]),
        (TypeKind.EMAIL, ["a@b.com", "a@b", "@b.com", "a@@b.com"], ["a@b", "@b.com", "a@@b.com"]),
        (TypeKind.PHONE, ["+1 (555) 123-4567", "555-1234", "12", "call me"], ["12", "call me"]),
        (TypeKind.POSTAL_CODE, ["1000-001", "SW1A 1AA", "-12", "12", "ABCDEFGHIJK"], ["-12", "12", "ABCDEFGHIJK"]),
        (TypeKind.MONEY, ["$12.50", "€5", "12", "12$", "$"], ["12$", "$"]),
    ])
    def test_syntax(self, make_column, kind, cells, bad):
        """Test syntax checks for special formats."""
        issues = check_special(make_column(cells), semantic_type(kind))
        assert kinds(issues) == [IssueKind.WRONG_DATA_TYPE]
        assert issues[0].evidence.offending_values == bad

    def test_clean_url(self, make_column):
        """Test a clean URL column."""
        assert check_special(make_column(["https://example.edu"]), semantic_type(TypeKind.URL)) == []

    def test_bounded_members(self, make_column):
        """Test bounded special members such as latitude."""
        issues = check_special(make_column(["7", "15.2"]), semantic_type(TypeKind.PH))
        assert offending(issues, IssueKind.DOMAIN_VIOLATION) == ["15.2"]
        issues = check_special(make_column(["91", "-45"]), semantic_type(TypeKind.LATITUDE))
        assert offending(issues, IssueKind.DOMAIN_VIOLATION) == ["91"]


class TestStructural:
    """Test suite for structural conflicts."""

    def _dataset(self, columns, padded_rows=()):
        return Dataset(
            source_name="test.csv",
            columns=columns,
            row_count=len(columns[0].cells),
            delimiter=Delimiter.COMMA,
            had_header=True,
            padded_rows=list(padded_rows),
        )

    def test_padded_rows(self):
        """Test the dataset-scope issue for padded rows."""
        dataset = self._dataset([build_column(["1", "", "3"], TypeKind.STRING)], padded_rows=[1])
        issues = detect_structural_conflicts(dataset)
        assert len(issues) == 1
        assert issues[0].column == DATASET_SCOPE
        assert issues[0].evidence.count == 1
        assert issues[0].evidence.example_rows == [1]

    def test_clean(self):
        """Test columns with a single population."""
        dataset = self._dataset([build_column(["1", "2"], TypeKind.NUMERICAL, "a"), build_column(["x", "y"], None, "b")])
        assert detect_structural_conflicts(dataset) == []

    def test_mixed_populations(self):
        """Both populations above the threshold with two or more cells each conflict."""
        dataset = self._dataset([
            build_column(["1", "2", "a", "b"], TypeKind.NUMERICAL, "half"),
            build_column(["1", "2", "3", "4", "a", "b"], TypeKind.NUMERICAL, "mostly"),
            build_column(["3", "Ann", "Bo", "4"], TypeKind.NAME, "names"),
        ])
        issues = detect_structural_conflicts(dataset)
        assert [i.column for i in issues] == ["half", "mostly", "names"]
        assert issues[0].evidence.offending_values == ["a", "b"]
        assert issues[1].evidence.offending_values == ["a", "b"]
        assert issues[0].dimensions == [Dimension.CONSISTENCY, Dimension.UNIQUENESS]

    def test_text_formats_report_the_numbers(self):
        """In a text-valued column the numeric population is the evidence."""
        dataset = self._dataset([build_column(["Lisbon", "Perth", "12", "40"], TypeKind.STRING, "city")])
        issues = detect_structural_conflicts(dataset)
        assert len(issues) == 1
        assert issues[0].evidence.offending_values == ["12", "40"]
        assert issues[0].evidence.example_rows == [2, 3]

    def test_single_odd_cell_is_not_a_population(self):
        """One numeric first name among three is a content issue, not a structural one."""
        dataset = self._dataset([build_column(["3", "Ronald", "Peter"], TypeKind.NAME, "First Name")])
        assert detect_structural_conflicts(dataset) == []

    def test_unclassified_columns_skipped(self):
        """Columns without a format get the missing-marker check only."""
        dataset = self._dataset([build_column(["1", "2", "a", "b"], None, "raw")])
        assert detect_structural_conflicts(dataset) == []

    def test_missing_markers_excluded(self):
        """Markers are neither numbers nor text when measuring the populations."""
        dataset = self._dataset([build_column(["1", "2", "3", "?", "?", "NA"], TypeKind.AGE, "Age")])
        assert detect_structural_conflicts(dataset) == []

    def test_small_minority_ignored(self):
        """Test that a small text minority is ignored."""
        dataset = self._dataset([build_column(["1"] * 9 + ["a"], TypeKind.NUMERICAL)])
        assert detect_structural_conflicts(dataset) == []


class TestValidateColumn:
    """Test suite for the per-column dispatcher."""

    def test_country(self, make_column, config):
        """Test the checks run for a country column."""
        issues, distribution = validate_column(make_column(["USA", "?", "Australia"], TypeKind.COUNTRY), config=config)
        assert kinds(issues) == [IssueKind.MISSING_DATA]
        assert distribution is None

    def test_student_ids(self, make_column, config):
        """Test the checks run for an identifier column."""
        issues, _ = validate_column(make_column(["I345343", "J892932", "J892932"], TypeKind.ID), config=config)
        assert kinds(issues) == [IssueKind.DUPLICATES, IssueKind.UNIQUENESS_VIOLATION]

    def test_all_missing(self, make_column, config):
        """A column of markers only reports missing data."""
        issues, _ = validate_column(make_column(["?", "", "NA"], TypeKind.AGE), config=config)
        assert kinds(issues) == [IssueKind.MISSING_DATA]

    def test_unclassified_gets_missing_check_only(self, make_column, config):
        """Test that unclassified columns get the missing check only."""
        issues, _ = validate_column(make_column(["-5", "?", "abc"], None), config=config)
        assert kinds(issues) == [IssueKind.MISSING_DATA]

    def test_categorical_distribution(self, make_column, config):
        """Test that categorical columns return a distribution."""
        issues, distribution = validate_column(make_column(["m", "f", "m", "?"], TypeKind.CATEGORICAL), config=config)
        assert kinds(issues) == [IssueKind.MISSING_DATA]
        assert distribution.distinct_count == 2

    def test_marker_override(self, make_column, config):
        """Test overriding the markers per call."""
        column = make_column(["Peru", "NA", ""], TypeKind.COUNTRY)
        issues, _ = validate_column(column, MissingMarkerSet.parse("?"), config)
        assert offending(issues, IssueKind.MISSING_DATA) == [""]

    def test_repeatable_and_pure(self, make_column, config):
        """Validation is repeatable and leaves the cells untouched."""
        cells = ["45", "-200", "?", "abc"]
        column = make_column(cells, TypeKind.NUMERICAL_NON_NEGATIVE)
        first = validate_column(column, config=config)
        assert validate_column(column, config=config) == first
        assert column.cells == cells

    def test_requires_analysis(self, config):
        """Test that a column must be analysed first."""
        with pytest.raises(ValueError):
            validate_column(ColumnProfile(name="raw", cells=["1"]), config=config)
