"""Entry point for attrdq."""

import logging
import os
import sys
from pathlib import Path

import click
from dotenv import load_dotenv
from pydantic import ValidationError

from .cli import (
    EXIT_ERROR,
    cmd_analyze,
    cmd_detect,
    cmd_dict_stats,
    default_abbreviations_path,
    default_formats_path,
)
from .modules.constants import (
    DEFAULT_MAX_CATEGORIES,
    ENV_LOG_LEVEL,
    OUTPUT_FORMAT_CSV,
    OUTPUT_FORMAT_JSON,
    OUTPUT_FORMAT_TEXT,
)
from .modules.data_types import CliConfig

# Load environment variables
load_dotenv()

logger = logging.getLogger(__name__)

FILE_PATH = click.Path(dir_okay=False, path_type=Path)
OUTPUT_FORMATS = click.Choice([OUTPUT_FORMAT_JSON, OUTPUT_FORMAT_TEXT, OUTPUT_FORMAT_CSV])


def _log_level(verbose: bool, quiet: bool) -> int:
    if verbose:
        return logging.DEBUG
    if quiet:
        return logging.WARNING
    level = getattr(logging, os.getenv(ENV_LOG_LEVEL, "INFO").upper(), None)
    return level if isinstance(level, int) else logging.INFO


def dictionary_options(command):
    """--formats-dict and --abbrev-dict, defaulting to $ATTRDQ_DICT_DIR or the packaged seeds."""
    command = click.option(
        "--abbrev-dict", type=FILE_PATH, default=default_abbreviations_path,
        help="Abbreviations dictionary (abbreviation<TAB>expansion)",
    )(command)
    command = click.option(
        "--formats-dict", type=FILE_PATH, default=default_formats_path,
        help="Formats dictionary (keyword<TAB>type)",
    )(command)
    return command


def input_options(command):
    """Options shared by commands that read datasets."""
    for option in reversed([
        click.option("--inner", help="Member to read from a .zip or .tar.gz archive"),
        click.option("--delimiter", type=click.Choice(["auto", "comma", "semicolon", "space"]), default="auto",
                     show_default=True, help="Field separator; anything but auto skips detection"),
        click.option("--header", type=click.Choice(["auto", "yes", "no"]), default="auto",
                     show_default=True, help="Whether the first row names the columns"),
        click.option("--descriptions", type=FILE_PATH,
                     help="Sidecar file of column<TAB>description lines"),
        click.option("-o", "--output", type=FILE_PATH, help="Write to this file instead of stdout"),
    ]):
        command = option(command)
    return dictionary_options(command)


def _build_config(**options) -> CliConfig:
    try:
        return CliConfig(**options)
    except ValidationError as e:
        logger.error(f"Invalid options: {e}")
        sys.exit(EXIT_ERROR)


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Log debug messages")
@click.option("-q", "--quiet", is_flag=True, help="Log warnings and errors only")
def main(verbose: bool, quiet: bool):
    """Attribute-based semantic type detection and data quality assessment."""
    logging.basicConfig(
        level=_log_level(verbose, quiet),
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
        force=True,
    )


@main.command()
@click.argument("input_paths", nargs=-1, required=True, type=FILE_PATH)
@input_options
@click.option("--analysed-columns", type=FILE_PATH,
              help="JSON listing from 'detect -f json'; listed columns keep that format")
@click.option("-f", "--format", "output_format", type=OUTPUT_FORMATS, default=OUTPUT_FORMAT_JSON,
              show_default=True, help="Report format")
@click.option("--max-categories", type=int, default=DEFAULT_MAX_CATEGORIES, show_default=True,
              help="Distinct values above which a categorical column has extraneous data")
@click.option("--missing-markers", help="Comma-separated missing-value markers, e.g. '?,NA'")
@click.option("--workers", type=int, help="Threads used to validate columns (default: CPU count)")
@click.option("--reference-date", type=click.DateTime(formats=["%Y-%m-%d"]),
              help="Date treated as today when checking for future dates")
def analyze(reference_date, input_paths, **options):
    """Detect column formats and report data quality issues.

    With several inputs the report holds one section per dataset plus a combined summary.
    """
    options["input_paths"] = list(input_paths)
    if reference_date is not None:
        options["reference_date"] = reference_date.date()
    sys.exit(cmd_analyze(_build_config(**options)))


@main.command()
@click.argument("input_path", type=FILE_PATH)
@input_options
@click.option("-f", "--format", "output_format", type=OUTPUT_FORMATS, default=OUTPUT_FORMAT_TEXT,
              show_default=True, help="Listing format")
def detect(**options):
    """List the semantic type detected for each column."""
    sys.exit(cmd_detect(_build_config(**options)))


@main.command("dict-stats")
@click.option("--formats-dict", type=FILE_PATH, default=default_formats_path,
              help="Formats dictionary (keyword<TAB>type)")
@click.option("--abbrev-dict", type=FILE_PATH, help="Also count the entries of this abbreviations dictionary")
@click.option("-f", "--format", "output_format", type=OUTPUT_FORMATS, default=OUTPUT_FORMAT_TEXT,
              show_default=True, help="Table format")
@click.option("-o", "--output", type=FILE_PATH, help="Write to this file instead of stdout")
def dict_stats(formats_dict, abbrev_dict, output_format, output):
    """Keyword count per format in the formats dictionary."""
    config = _build_config(
        formats_dict=formats_dict,
        abbrev_dict=abbrev_dict or default_abbreviations_path(),
        output_format=output_format,
        output=output,
    )
    sys.exit(cmd_dict_stats(config, include_abbreviations=abbrev_dict is not None))


if __name__ == "__main__":
    main()
