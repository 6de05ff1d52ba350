"""Semantic type taxonomy, issue taxonomy and the issue-to-dimension mapping."""

import re
from typing import FrozenSet, Optional, Tuple

from .data_types import Dimension, IssueKind, SemanticType, TypeKind, BOUNDED_KINDS

# Conventional inclusive ranges for the bounded members
DEFAULT_BOUNDS = {
    TypeKind.AGE: (0.0, 150.0),
    TypeKind.DAY: (1.0, 31.0),
    TypeKind.HOUR: (0.0, 24.0),
    TypeKind.LATITUDE: (-90.0, 90.0),
    TypeKind.LONGITUDE: (-180.0, 180.0),
    TypeKind.MONTH: (1.0, 12.0),
    TypeKind.NORMALIZED: (0.0, 1.0),
    TypeKind.PERCENTAGE: (0.0, 100.0),
    TypeKind.PH: (0.0, 14.0),
    TypeKind.YEAR: (1000.0, 2100.0),
}

# Missing data counts under completeness only
ISSUE_DIMENSIONS = {
    IssueKind.MISSING_DATA: frozenset({Dimension.COMPLETENESS}),
    IssueKind.EXTRANEOUS_DATA: frozenset({Dimension.CONSISTENCY, Dimension.UNIQUENESS}),
    IssueKind.OUTDATED_TEMPORAL_DATA: frozenset({Dimension.TIMELINESS}),
    IssueKind.DUPLICATES: frozenset({Dimension.UNIQUENESS}),
    IssueKind.STRUCTURAL_CONFLICTS: frozenset({Dimension.CONSISTENCY, Dimension.UNIQUENESS}),
    IssueKind.DOMAIN_VIOLATION: frozenset({Dimension.ACCURACY}),
    IssueKind.WRONG_DATA_TYPE: frozenset({Dimension.CONSISTENCY}),
    IssueKind.UNIQUENESS_VIOLATION: frozenset({Dimension.UNIQUENESS}),
    IssueKind.NON_STRING_DATA_TYPE: frozenset({Dimension.CONSISTENCY}),
}

# Validation families
NUMERICAL_KINDS = frozenset({
    TypeKind.NUMERICAL, TypeKind.NUMERICAL_NON_NEGATIVE, TypeKind.NUMERICAL_BETWEEN, TypeKind.AGE,
})
STRING_KINDS = frozenset({
    TypeKind.STRING, TypeKind.NAME, TypeKind.MODEL_NAME,
    TypeKind.CITY, TypeKind.STATE, TypeKind.COUNTRY, TypeKind.STREET,
})
CAPITALIZED_KINDS = frozenset({
    TypeKind.NAME, TypeKind.CITY, TypeKind.STATE, TypeKind.COUNTRY, TypeKind.STREET,
})
CATEGORICAL_KINDS = frozenset({TypeKind.CATEGORICAL, TypeKind.BINARY})
TEMPORAL_KINDS = frozenset({
    TypeKind.DATE, TypeKind.DATETIME, TypeKind.TIME, TypeKind.YEAR,
    TypeKind.MONTH, TypeKind.DAY, TypeKind.HOUR, TypeKind.WEEKDAY,
})
SPECIAL_KINDS = frozenset({
    TypeKind.EMAIL, TypeKind.URL, TypeKind.IP, TypeKind.PHONE, TypeKind.POSTAL_CODE,
    TypeKind.LATITUDE, TypeKind.LONGITUDE, TypeKind.PH, TypeKind.PERCENTAGE,
    TypeKind.NORMALIZED, TypeKind.MONEY,
})
GEOGRAPHICAL_KINDS = frozenset({
    TypeKind.CITY, TypeKind.STATE, TypeKind.COUNTRY, TypeKind.STREET,
    TypeKind.POSTAL_CODE, TypeKind.LATITUDE, TypeKind.LONGITUDE,
})
GENERIC_KINDS = frozenset({TypeKind.STRING, TypeKind.NUMERICAL})
# Kinds that override a generic name format when found in the description
SPECIFIC_KINDS = (
    BOUNDED_KINDS | TEMPORAL_KINDS | GEOGRAPHICAL_KINDS | SPECIAL_KINDS
    | frozenset({TypeKind.ID, TypeKind.NAME})
)

# Alternative spellings accepted in dictionary files
_TYPE_ALIASES = {
    "numerical>=0": TypeKind.NUMERICAL_NON_NEGATIVE,
    "numerical >= 0": TypeKind.NUMERICAL_NON_NEGATIVE,
    "numerical > 0": TypeKind.NUMERICAL_NON_NEGATIVE,
    "numerical>0": TypeKind.NUMERICAL_NON_NEGATIVE,
    "numerical non-negative": TypeKind.NUMERICAL_NON_NEGATIVE,
    "numerical non negative": TypeKind.NUMERICAL_NON_NEGATIVE,
    "id column": TypeKind.ID,
    "ip format": TypeKind.IP,
    "e-mail format": TypeKind.EMAIL,
    "email format": TypeKind.EMAIL,
    "e-mail": TypeKind.EMAIL,
    "url format": TypeKind.URL,
    "model name": TypeKind.MODEL_NAME,
    "modelname": TypeKind.MODEL_NAME,
    "postal code": TypeKind.POSTAL_CODE,
    "postalcode": TypeKind.POSTAL_CODE,
}

_NUMBER = r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_BETWEEN_LABEL_RE = re.compile(rf"^numerical between\s+({_NUMBER})\s+and\s+({_NUMBER})$")
_BETWEEN_TOKEN_RE = re.compile(rf"^numerical_between\(({_NUMBER}),({_NUMBER})\)$")
_BETWEEN_PREFIX_RE = re.compile(r"^numerical between\b")


def dimensions_of(issue: IssueKind) -> FrozenSet[Dimension]:
    """Return the fixed dimension set an issue kind is attributed to."""
    return ISSUE_DIMENSIONS[issue]


def sorted_dimensions(issue: IssueKind) -> list:
    """Dimensions of an issue in a stable (alphabetical) order."""
    return sorted(dimensions_of(issue), key=lambda d: d.value)


def dimension_bucket(dimensions) -> str:
    """Name of the combined bucket an issue's dimension set counts under, e.g. 'consistency+uniqueness'."""
    return "+".join(sorted(Dimension(d).value for d in dimensions))


def bounds_of(semantic_type: SemanticType) -> Optional[Tuple[float, float]]:
    """Inclusive range of a bounded member, None for unbounded members."""
    return semantic_type.bounds


def semantic_type(kind: TypeKind) -> SemanticType:
    """Build a taxonomy member, filling in the conventional bounds where it has them."""
    kind = TypeKind(kind)
    if kind is TypeKind.NUMERICAL_BETWEEN:
        raise ValueError("numerical_between needs explicit bounds; use numerical_between()")
    return SemanticType(kind=kind, bounds=DEFAULT_BOUNDS.get(kind))


def numerical_between(lo: float, hi: float) -> SemanticType:
    return SemanticType(kind=TypeKind.NUMERICAL_BETWEEN, bounds=(float(lo), float(hi)))


def all_members() -> list:
    """Every fixed taxonomy member (numerical_between excluded, it is open-ended)."""
    return [semantic_type(k) for k in TypeKind if k is not TypeKind.NUMERICAL_BETWEEN]


def parse_type_name(name: str) -> SemanticType:
    """Parse a type name as written in a dictionary file.

    Accepts snake_case names, display labels, the legacy aliases and the
    ``numerical between <lo> and <hi>`` pattern. Raises ValueError otherwise.
    """
    text = " ".join(name.strip().lower().split())
    match = _BETWEEN_LABEL_RE.match(text) or _BETWEEN_TOKEN_RE.match(text)
    if match:
        lo, hi = float(match.group(1)), float(match.group(2))
        if lo > hi:
            raise ValueError(f"lower bound {lo:g} exceeds upper bound {hi:g}")
        return numerical_between(lo, hi)
    if _BETWEEN_PREFIX_RE.match(text) or text.startswith("numerical_between"):
        raise ValueError(f"malformed bounds in {name.strip()!r}")
    if text in _TYPE_ALIASES:
        return semantic_type(_TYPE_ALIASES[text])
    try:
        return semantic_type(TypeKind(text.replace(" ", "_")))
    except ValueError:
        raise ValueError(f"unknown type name {name.strip()!r}") from None


def parse_type_token(token: str) -> SemanticType:
    """Inverse of ``SemanticType.token``."""
    match = _BETWEEN_TOKEN_RE.match(token)
    if match:
        return numerical_between(float(match.group(1)), float(match.group(2)))
    return semantic_type(TypeKind(token))
