"""Command implementations: analyze, detect and dict-stats."""

import csv
import io
import json
import logging
import os
from pathlib import Path
from typing import Dict, List, Optional

import click
from pydantic import TypeAdapter, ValidationError
from tabulate import tabulate

from .modules.constants import (
    ABBREVIATIONS_DICTIONARY_FILE,
    DATA_DIR,
    ENV_DICT_DIR,
    FORMATS_DICTIONARY_FILE,
    OUTPUT_FORMAT_CSV,
    OUTPUT_FORMAT_JSON,
)
from .modules.data_types import CliConfig, Delimiter, DetectionEntry, LabelAnalysis, OutputFormat
from .modules.dictionaries import format_frequencies, load_abbreviations_file, load_formats_file
from .modules.errors import AttrDQError, ConfigError
from .modules.functionality.ingestion import LoadOptions, load_dataset
from .modules.functionality.label_analysis import analyses_from_listing, analyze_dataset, detection_entry
from .modules.functionality.reporting import assess_dataset, assess_datasets, serialize

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 2

_DELIMITERS = {
    "auto": None,
    "comma": Delimiter.COMMA,
    "semicolon": Delimiter.SEMICOLON,
    "space": Delimiter.WHITESPACE,
}
_HEADERS = {"auto": None, "yes": True, "no": False}


def default_dictionary_path(filename: str) -> Path:
    """Dictionary file from $ATTRDQ_DICT_DIR when it has one, else the packaged seed."""
    directory = os.getenv(ENV_DICT_DIR)
    if directory:
        candidate = Path(directory) / filename
        if candidate.is_file():
            return candidate
        logger.warning(f"{candidate} not found, using the packaged {filename}")
    return DATA_DIR / filename


def default_formats_path() -> Path:
    return default_dictionary_path(FORMATS_DICTIONARY_FILE)


def default_abbreviations_path() -> Path:
    return default_dictionary_path(ABBREVIATIONS_DICTIONARY_FILE)


def load_descriptions(path: Path) -> Dict[str, str]:
    """Read a ``column<TAB>description`` sidecar (``column: description`` also accepted)."""
    descriptions: Dict[str, str] = {}
    with Path(path).open(encoding="utf-8-sig") as f:
        for line_number, raw in enumerate(f, start=1):
            line = raw.rstrip("\r\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            separator = "\t" if "\t" in line else ":"
            name, found, description = line.partition(separator)
            if not found or not name.strip():
                raise ConfigError(f"{path}:{line_number}: expected 'column<TAB>description'")
            descriptions[name.strip()] = description.strip()
    logger.info(f"Read {len(descriptions)} column descriptions from {path}")
    return descriptions


_LISTING = TypeAdapter(List[DetectionEntry])


def load_analysed_columns(path: Path) -> Dict[str, LabelAnalysis]:
    """Read the JSON listing written by ``detect -f json`` back into header analyses."""
    try:
        entries = _LISTING.validate_json(Path(path).read_bytes())
    except ValidationError as e:
        raise ConfigError(
            f"{path}: expected the JSON listing written by 'detect -f json' ({e.error_count()} errors)"
        ) from None
    analyses = analyses_from_listing(entries)
    logger.info(f"Read {len(analyses)} analysed columns from {path}")
    return analyses


def _load_options(config: CliConfig, formats) -> LoadOptions:
    return LoadOptions(
        delimiter=_DELIMITERS[config.delimiter],
        header=_HEADERS[config.header],
        inner=config.inner,
        formats=formats,
    )


def _write(data: bytes, output: Optional[Path]) -> None:
    if output is None:
        stream = click.get_binary_stream("stdout")
        stream.write(data)
        stream.flush()
    else:
        Path(output).write_bytes(data)
        logger.info(f"Wrote {output}")


def _fail(error: Exception) -> int:
    logger.error(str(error))
    return EXIT_ERROR


def cmd_analyze(config: CliConfig) -> int:
    """Ingest, detect formats, validate every column and write the report.

    One input gives a dataset report; several give a corpus report.
    """
    try:
        inputs = config.inputs
        if not inputs:
            raise ConfigError("no input file given")
        formats = load_formats_file(config.formats_dict)
        abbreviations = load_abbreviations_file(config.abbrev_dict)
        descriptions = load_descriptions(config.descriptions) if config.descriptions else None
        analysed = load_analysed_columns(config.analysed_columns) if config.analysed_columns else None
        options = _load_options(config, formats)
        datasets = [load_dataset(path, options) for path in inputs]
        analysis_config = config.analysis_config()
        if len(datasets) == 1:
            report = assess_dataset(datasets[0], formats, abbreviations, descriptions, analysis_config, analysed)
        else:
            report = assess_datasets(datasets, formats, abbreviations, descriptions, analysis_config, analysed)
        _write(serialize(report, config.output_format), config.output)
    except (AttrDQError, OSError) as e:
        return _fail(e)
    return EXIT_OK


def format_detection(dataset, output_format: OutputFormat) -> str:
    """Column name to final format listing; text is one ``name<TAB>format`` line per column."""
    entries = [detection_entry(c.name, c.analysis) for c in dataset.columns]
    if output_format == OUTPUT_FORMAT_JSON:
        listing = [entry.model_dump(mode="json") for entry in entries]
        return json.dumps(listing, indent=2) + "\n"
    if output_format == OUTPUT_FORMAT_CSV:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["column", "format"])
        writer.writerows((e.column, e.format) for e in entries)
        return buffer.getvalue()
    return "".join(f"{e.column}\t{e.format}\n" for e in entries)


def cmd_detect(config: CliConfig) -> int:
    """Run label analysis only and list each column's format."""
    try:
        if config.input_path is None:
            raise ConfigError("no input file given")
        formats = load_formats_file(config.formats_dict)
        abbreviations = load_abbreviations_file(config.abbrev_dict)
        descriptions = load_descriptions(config.descriptions) if config.descriptions else None
        dataset = load_dataset(config.input_path, _load_options(config, formats))
        dataset = analyze_dataset(dataset, formats, abbreviations, descriptions)
        _write(format_detection(dataset, config.output_format).encode("utf-8"), config.output)
    except (AttrDQError, OSError) as e:
        return _fail(e)
    return EXIT_OK


def format_dict_stats(formats, abbreviations, output_format: OutputFormat) -> str:
    """Keywords per format, most frequent first; abbreviations are counted when given."""
    rows = format_frequencies(formats)
    if output_format == OUTPUT_FORMAT_JSON:
        payload = {
            "keywords": len(formats),
            "formats": [row._asdict() for row in rows],
        }
        if abbreviations is not None:
            payload["abbreviations"] = len(abbreviations)
        text = json.dumps(payload, indent=2) + "\n"
    elif output_format == OUTPUT_FORMAT_CSV:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["format", "frequency", "percentage"])
        writer.writerows((r.label, r.frequency, f"{r.percentage:.2f}") for r in rows)
        text = buffer.getvalue()
    else:
        table = tabulate(
            [[r.label, r.frequency, f"{r.percentage:.2f}"] for r in rows],
            headers=["Format", "Frequency", "Percentage"],
            tablefmt="grid",
            disable_numparse=True,
        )
        lines = [table, f"Keywords: {len(formats)}"]
        if abbreviations is not None:
            lines.append(f"Abbreviations: {len(abbreviations)}")
        text = "\n".join(lines) + "\n"
    return text


def cmd_dict_stats(config: CliConfig, include_abbreviations: bool = False) -> int:
    """Print how many keywords each format has in the formats dictionary."""
    try:
        formats = load_formats_file(config.formats_dict)
        abbreviations = load_abbreviations_file(config.abbrev_dict) if include_abbreviations else None
        text = format_dict_stats(formats, abbreviations, config.output_format)
        _write(text.encode("utf-8"), config.output)
    except (AttrDQError, OSError) as e:
        return _fail(e)
    return EXIT_OK
