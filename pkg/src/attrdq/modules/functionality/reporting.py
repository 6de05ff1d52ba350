"""Quality report assembly, the per-dataset assessment driver and report serializers."""

import csv
import io
import logging
import os
from collections import Counter, defaultdict
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from tabulate import tabulate

from ..constants import (
    CSV_REPORT_HEADER,
    DATASET_SCOPE,
    OUTPUT_FORMAT_CSV,
    OUTPUT_FORMAT_JSON,
    OUTPUT_FORMAT_TEXT,
    UNCLASSIFIED_LABEL,
)
from ..data_types import (
    AnalysisConfig,
    ColumnReport,
    CorpusReport,
    CorpusSummary,
    Dataset,
    DatasetInfo,
    FrequencyDistribution,
    IssueKind,
    LabelAnalysis,
    OutputFormat,
    Provenance,
    QualityIssue,
    QualityReport,
    ReportSummary,
)
from ..dictionaries import AbbreviationsDictionary, FormatsDictionary
from ..errors import ConfigError
from ..semantic_model import dimension_bucket
from .label_analysis import analyze_dataset
from .validation import detect_structural_conflicts, validate_column

logger = logging.getLogger(__name__)

ColumnResult = Tuple[List[QualityIssue], Optional[FrequencyDistribution]]

# Distribution rows shown per column in the text report
TEXT_TOP_VALUES = 10


def summarize(columns: Sequence[ColumnReport], dataset_issues: Sequence[QualityIssue] = ()) -> ReportSummary:
    """Recompute the summary block from column reports and dataset-level issues."""
    issues = [issue for column in columns for issue in column.issues] + list(dataset_issues)
    by_kind = Counter(issue.issue for issue in issues)
    buckets = Counter(dimension_bucket(issue.dimensions) for issue in issues)

    # columns per marker spelling, from the (capped) offending values
    markers: Counter = Counter()
    for column in columns:
        for issue in column.issues:
            if issue.issue is IssueKind.MISSING_DATA:
                markers.update(issue.evidence.offending_values)

    classified = sum(1 for c in columns if c.final_format != UNCLASSIFIED_LABEL)
    return ReportSummary(
        issue_counts_by_kind={kind.value: by_kind[kind] for kind in IssueKind if by_kind[kind]},
        dimension_counts=dict(sorted(buckets.items())),
        columns_with_issues=sum(1 for c in columns if c.issues),
        classified_fraction=classified / len(columns) if columns else 0.0,
        format_counts=dict(Counter(c.final_format for c in columns).most_common()),
        columns_per_marker=dict(sorted(markers.items())),
    )


def compile_report(
    dataset: Dataset,
    per_column_results: Sequence[ColumnResult],
    dataset_issues: Sequence[QualityIssue] = (),
) -> QualityReport:
    """Assemble validated columns, in dataset order, into a report."""
    if len(per_column_results) != len(dataset.columns):
        raise ValueError(
            f"expected results for {len(dataset.columns)} columns, got {len(per_column_results)}"
        )
    columns = []
    for column, (issues, distribution) in zip(dataset.columns, per_column_results):
        analysis = column.analysis
        columns.append(ColumnReport(
            name=column.name,
            final_format=analysis.final_token if analysis else UNCLASSIFIED_LABEL,
            provenance=analysis.provenance if analysis else Provenance.UNCLASSIFIED,
            issues=list(issues),
            distribution=distribution,
        ))
    return QualityReport(
        dataset=DatasetInfo(
            source_name=dataset.source_name,
            row_count=dataset.row_count,
            column_count=len(dataset.columns),
            delimiter=dataset.delimiter,
            had_header=dataset.had_header,
        ),
        columns=columns,
        dataset_issues=list(dataset_issues),
        summary=summarize(columns, dataset_issues),
    )


def assess_dataset(
    dataset: Dataset,
    formats: FormatsDictionary,
    abbreviations: AbbreviationsDictionary,
    descriptions: Optional[Dict[str, str]] = None,
    config: Optional[AnalysisConfig] = None,
    analysed: Optional[Mapping[str, LabelAnalysis]] = None,
) -> QualityReport:
    """Detect every column's format, validate the columns and compile the report.

    Columns are validated on a thread pool; results keep column order. Structural
    conflicts found in a column follow that column's format issues. Columns named
    in ``analysed`` keep that header analysis.
    """
    config = config or AnalysisConfig()
    dataset = analyze_dataset(dataset, formats, abbreviations, descriptions, analysed)

    workers = config.workers or os.cpu_count() or 1
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(lambda column: validate_column(column, config=config), dataset.columns))

    dataset_issues: List[QualityIssue] = []
    structural: Dict[str, List[QualityIssue]] = defaultdict(list)
    for issue in detect_structural_conflicts(dataset, config):
        if issue.column == DATASET_SCOPE:
            dataset_issues.append(issue)
        else:
            structural[issue.column].append(issue)
    merged = [
        (issues + structural[column.name], distribution)
        for column, (issues, distribution) in zip(dataset.columns, results)
    ]

    report = compile_report(dataset, merged, dataset_issues)
    total = sum(report.summary.issue_counts_by_kind.values())
    logger.info(
        f"{dataset.source_name}: {total} issues in {report.summary.columns_with_issues} "
        f"of {len(report.columns)} columns"
    )
    return report


def summarize_corpus(reports: Sequence[QualityReport]) -> CorpusSummary:
    """Combine per-dataset summaries into tallies over the whole run."""
    by_kind: Counter = Counter()
    buckets: Counter = Counter()
    format_counts: Counter = Counter()
    markers: Counter = Counter()
    for report in reports:
        by_kind.update(report.summary.issue_counts_by_kind)
        buckets.update(report.summary.dimension_counts)
        format_counts.update(report.summary.format_counts)
        markers.update(report.summary.columns_per_marker)

    columns = [column for report in reports for column in report.columns]
    classified = sum(1 for c in columns if c.final_format != UNCLASSIFIED_LABEL)
    return CorpusSummary(
        dataset_count=len(reports),
        datasets_with_issues=sum(1 for r in reports if r.summary.issue_counts_by_kind),
        column_count=len(columns),
        columns_with_issues=sum(r.summary.columns_with_issues for r in reports),
        classified_fraction=classified / len(columns) if columns else 0.0,
        issue_counts_by_kind={kind.value: by_kind[kind.value] for kind in IssueKind if by_kind[kind.value]},
        dimension_counts=dict(sorted(buckets.items())),
        format_counts=dict(format_counts.most_common()),
        columns_per_marker=dict(sorted(markers.items())),
    )


def compile_corpus_report(reports: Sequence[QualityReport]) -> CorpusReport:
    """Keep the dataset reports in input order and add the combined summary."""
    return CorpusReport(datasets=list(reports), summary=summarize_corpus(reports))


def assess_datasets(
    datasets: Iterable[Dataset],
    formats: FormatsDictionary,
    abbreviations: AbbreviationsDictionary,
    descriptions: Optional[Dict[str, str]] = None,
    config: Optional[AnalysisConfig] = None,
    analysed: Optional[Mapping[str, LabelAnalysis]] = None,
) -> CorpusReport:
    """Assess several datasets with the same dictionaries and settings."""
    reports = [
        assess_dataset(dataset, formats, abbreviations, descriptions, config, analysed)
        for dataset in datasets
    ]
    corpus = compile_corpus_report(reports)
    summary = corpus.summary
    logger.info(
        f"{sum(summary.issue_counts_by_kind.values())} issues in {summary.columns_with_issues} of "
        f"{summary.column_count} columns; {summary.datasets_with_issues} of {summary.dataset_count} "
        f"datasets have issues"
    )
    return corpus


def _examples(issue: QualityIssue, separator: str) -> str:
    return separator.join(value if value else '""' for value in issue.evidence.offending_values)


def _grid(rows, headers: Sequence[str]) -> str:
    # cells are shown as found: '007' must not become 7
    return tabulate(rows, headers=list(headers), tablefmt="grid", disable_numparse=True)


def _counts_tables(issue_counts: Dict[str, int], dimension_counts: Dict[str, int]) -> List[str]:
    if not issue_counts:
        return []
    return [
        _grid(list(issue_counts.items()), ["Issue", "Count"]),
        _grid(list(dimension_counts.items()), ["Dimensions", "Count"]),
    ]


def format_report_as_text(report: QualityReport) -> str:
    """Render a report as per-column sections of tables."""
    info = report.dataset
    output = [f"DATASET {info.source_name}"]
    output.append(_grid(
        [
            ["Rows", info.row_count],
            ["Columns", info.column_count],
            ["Delimiter", info.delimiter.value],
            ["Header", "yes" if info.had_header else "no"],
        ],
        ["Field", "Value"],
    ))

    for column in report.columns:
        output.append(f"\nCOLUMN {column.name} (format: {column.final_format}, {column.provenance.value})")
        if column.issues:
            output.append(_grid(
                [
                    [i.issue.value, dimension_bucket(i.dimensions), i.evidence.count, _examples(i, ", ")]
                    for i in column.issues
                ],
                ["Issue", "Dimensions", "Count", "Examples"],
            ))
        else:
            output.append("No issues")
        if column.distribution and column.distribution.entries:
            top = column.distribution.entries[:TEXT_TOP_VALUES]
            output.append(f"Top values ({column.distribution.distinct_count} distinct)")
            output.append(_grid(
                [[e.value, e.count, f"{e.fraction:.2%}"] for e in top],
                ["Value", "Count", "Share"],
            ))

    if report.dataset_issues:
        output.append("\nDATASET ISSUES")
        output.append(_grid(
            [[i.issue.value, i.evidence.count, i.note] for i in report.dataset_issues],
            ["Issue", "Count", "Note"],
        ))

    summary = report.summary
    output.append("\nSUMMARY")
    output.append(_grid(
        [
            ["Columns with issues", summary.columns_with_issues],
            ["Classified columns", f"{summary.classified_fraction:.2%}"],
        ],
        ["Field", "Value"],
    ))
    output += _counts_tables(summary.issue_counts_by_kind, summary.dimension_counts)
    return "\n".join(output) + "\n"


def format_corpus_as_text(corpus: CorpusReport) -> str:
    """Every dataset's text report in input order, then the combined summary."""
    sections = [format_report_as_text(report) for report in corpus.datasets]
    summary = corpus.summary
    output = ["CORPUS SUMMARY"]
    output.append(_grid(
        [
            ["Datasets", summary.dataset_count],
            ["Datasets with issues", summary.datasets_with_issues],
            ["Columns", summary.column_count],
            ["Columns with issues", summary.columns_with_issues],
            ["Classified columns", f"{summary.classified_fraction:.2%}"],
        ],
        ["Field", "Value"],
    ))
    output += _counts_tables(summary.issue_counts_by_kind, summary.dimension_counts)
    if summary.format_counts:
        output.append(_grid(list(summary.format_counts.items()), ["Format", "Columns"]))
    sections.append("\n".join(output) + "\n")
    return "\n".join(sections)


def _csv_rows(report: QualityReport) -> Iterable[list]:
    source = report.dataset.source_name
    for column in report.columns:
        for issue in column.issues:
            yield [
                source, column.name, column.final_format, issue.issue.value,
                dimension_bucket(issue.dimensions), issue.evidence.count, _examples(issue, "|"),
            ]
    for issue in report.dataset_issues:
        yield [
            source, DATASET_SCOPE, "", issue.issue.value,
            dimension_bucket(issue.dimensions), issue.evidence.count, _examples(issue, "|"),
        ]


def format_report_as_csv(report: Union[QualityReport, CorpusReport]) -> str:
    """One row per (column, issue); the header row is always written once.

    A corpus report lists its datasets one after another.
    """
    reports = report.datasets if isinstance(report, CorpusReport) else [report]
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_REPORT_HEADER)
    for single in reports:
        writer.writerows(_csv_rows(single))
    return buffer.getvalue()


def serialize(report: Union[QualityReport, CorpusReport], format: OutputFormat = OUTPUT_FORMAT_JSON) -> bytes:
    """Serialize a dataset or corpus report to UTF-8 bytes."""
    if format == OUTPUT_FORMAT_JSON:
        text = report.model_dump_json(indent=2) + "\n"
    elif format == OUTPUT_FORMAT_TEXT:
        if isinstance(report, CorpusReport):
            text = format_corpus_as_text(report)
        else:
            text = format_report_as_text(report)
    elif format == OUTPUT_FORMAT_CSV:
        text = format_report_as_csv(report)
    else:
        raise ConfigError(f"unknown output format {format!r}")
    return text.encode("utf-8")


def parse_report(data: Union[bytes, str]) -> QualityReport:
    """Read back a report written by ``serialize`` in JSON."""
    return QualityReport.model_validate_json(data)


def parse_corpus_report(data: Union[bytes, str]) -> CorpusReport:
    """Read back a corpus report written by ``serialize`` in JSON."""
    return CorpusReport.model_validate_json(data)
