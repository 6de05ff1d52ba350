"""Tests for the semantic type taxonomy and the issue-to-dimension mapping."""

from collections import Counter

import pytest

from ...modules.data_types import Dimension, IssueKind, SemanticType, TypeKind
from ...modules.semantic_model import (
    all_members,
    bounds_of,
    dimension_bucket,
    dimensions_of,
    numerical_between,
    parse_type_name,
    parse_type_token,
    semantic_type,
)

pytestmark = pytest.mark.unit


class TestTaxonomy:
    """Test suite for semantic type members."""

    def test_members(self):
        """Thirty-two members including url; numerical_between is parameterised and not listed."""
        members = all_members()
        assert len(members) == 32
        assert TypeKind.NUMERICAL_BETWEEN not in {m.kind for m in members}
        assert semantic_type(TypeKind.URL) in members

    def test_bounded_members_carry_bounds(self):
        """Test that bounded members get their default ranges."""
        assert bounds_of(semantic_type(TypeKind.PH)) == (0.0, 14.0)
        assert bounds_of(semantic_type(TypeKind.AGE)) == (0.0, 150.0)
        assert bounds_of(semantic_type(TypeKind.STRING)) is None
        for member in all_members():
            assert member.is_bounded == (bounds_of(member) is not None)

    def test_bounds_validation(self):
        """Bounds are required, forbidden or ordered as the member demands."""
        with pytest.raises(ValueError):
            SemanticType(kind=TypeKind.AGE)
        with pytest.raises(ValueError):
            SemanticType(kind=TypeKind.STRING, bounds=(0, 1))
        with pytest.raises(ValueError):
            numerical_between(360, 0)
        with pytest.raises(ValueError):
            semantic_type(TypeKind.NUMERICAL_BETWEEN)

    def test_token_and_label(self):
        """Test report tokens and display labels."""
        heading = numerical_between(0, 360)
        assert heading.token == "numerical_between(0,360)"
        assert heading.label == "numerical between 0 and 360"
        assert str(heading) == heading.token
        assert numerical_between(0.5, 1).token == "numerical_between(0.5,1)"

        non_negative = semantic_type(TypeKind.NUMERICAL_NON_NEGATIVE)
        assert non_negative.token == "numerical_non_negative"
        assert non_negative.label == "numerical>=0"
        assert semantic_type(TypeKind.POSTAL_CODE).label == "postal code"

    def test_parse_type_name(self):
        """Test parsing type names and aliases."""
        assert parse_type_name("numerical between 0 and 360") == numerical_between(0, 360)
        assert parse_type_name("numerical_between(1,53)") == numerical_between(1, 53)
        assert parse_type_name("Numerical > 0").kind is TypeKind.NUMERICAL_NON_NEGATIVE
        assert parse_type_name("numerical>=0").kind is TypeKind.NUMERICAL_NON_NEGATIVE
        assert parse_type_name("ID column").kind is TypeKind.ID
        assert parse_type_name("postalcode").kind is TypeKind.POSTAL_CODE
        assert parse_type_name("model name").kind is TypeKind.MODEL_NAME
        assert parse_type_name("  Date ").kind is TypeKind.DATE

    @pytest.mark.parametrize("name", [
        "blob",
        "numerical between 5 and",
        "numerical between ten and 20",
        "numerical between 10 and 0",
    ])
    def test_parse_type_name_rejects(self, name):
        """Test rejecting unknown type names."""
        with pytest.raises(ValueError):
            parse_type_name(name)

    def test_tokens_parse_back(self):
        """Test that every token parses back to its member."""
        for member in all_members() + [numerical_between(-90, 90.5)]:
            assert parse_type_token(member.token) == member
            assert parse_type_name(member.label) == member


class TestDimensions:
    """Test suite for the issue-to-dimension mapping."""

    def test_every_issue_has_dimensions(self):
        """Test that every issue kind maps to a dimension."""
        for issue in IssueKind:
            assert dimensions_of(issue)

    def test_mapping(self):
        """Test the issue to dimension table."""
        assert dimensions_of(IssueKind.MISSING_DATA) == {Dimension.COMPLETENESS}
        assert dimensions_of(IssueKind.DOMAIN_VIOLATION) == {Dimension.ACCURACY}
        assert dimensions_of(IssueKind.DUPLICATES) == {Dimension.UNIQUENESS}
        assert dimensions_of(IssueKind.OUTDATED_TEMPORAL_DATA) == {Dimension.TIMELINESS}
        assert dimensions_of(IssueKind.STRUCTURAL_CONFLICTS) == {Dimension.CONSISTENCY, Dimension.UNIQUENESS}
        assert dimensions_of(IssueKind.EXTRANEOUS_DATA) == {Dimension.CONSISTENCY, Dimension.UNIQUENESS}

    def test_bucket_names(self):
        """Test the names of dimension buckets."""
        assert dimension_bucket([Dimension.UNIQUENESS, Dimension.CONSISTENCY]) == "consistency+uniqueness"
        assert dimension_bucket(["accuracy"]) == "accuracy"

    def test_weighted_counts_give_dimension_tally(self):
        """Weighted issue counts bucket into the expected dimension tally."""
        weights = {
            IssueKind.MISSING_DATA: 81,
            IssueKind.DOMAIN_VIOLATION: 7,
            IssueKind.WRONG_DATA_TYPE: 4,
            IssueKind.EXTRANEOUS_DATA: 3,
            IssueKind.STRUCTURAL_CONFLICTS: 3,
            IssueKind.DUPLICATES: 3,
            IssueKind.UNIQUENESS_VIOLATION: 3,
            IssueKind.NON_STRING_DATA_TYPE: 2,
        }
        tally = Counter()
        for issue, weight in weights.items():
            tally[dimension_bucket(dimensions_of(issue))] += weight

        assert dict(tally) == {
            "completeness": 81,
            "accuracy": 7,
            "consistency": 6,
            "consistency+uniqueness": 6,
            "uniqueness": 6,
        }
