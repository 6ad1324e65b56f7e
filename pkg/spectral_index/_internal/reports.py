#
# Copyright (C) 2026 Spectral Index contributors. All rights reserved.
# SPDX-License-Identifier: Apache-2.0
#
"""Rendering of command reports as JSON, CSV and plain-text tables."""
import csv
import io
import json
import logging
import math
import os
import pathlib

from enum import Enum
from fractions import Fraction
from typing import Any, Dict, Iterable, Optional, Sequence

import numpy as np
import tabulate

logger = logging.getLogger(__name__)

OUTPUT_DIR_ENV_VAR = "SPECTRAL_INDEX_OUTPUT_DIR"
SCHEMA_DIR = pathlib.Path(__file__).resolve().parent.parent / "schemas"


def render_json(command: str, config: Dict[str, Any], result: Dict[str, Any]) -> str:
    """Wrap a result in the {"command", "config", "result"} envelope with sorted keys."""
    document = {"command": command, "config": config, "result": result}
    return json.dumps(document, indent=4, sort_keys=True, default=_to_json_value) + "\n"


def render_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    """CSV text with a header row."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_to_cell(cell) for cell in row])
    return buffer.getvalue()


def render_table(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    """Plain-text table for the terminal."""
    return tabulate.tabulate([[_to_cell(cell) for cell in row] for row in rows], headers=header)


def resolve_output_path(output: str) -> pathlib.Path:
    """Place bare file names in the default output directory, when one is configured."""
    path = pathlib.Path(output)
    default_dir = os.environ.get(OUTPUT_DIR_ENV_VAR)
    if default_dir and path.parent == pathlib.Path("."):
        path = pathlib.Path(default_dir) / path
    return path


def write_output(text: str, output: Optional[str]) -> Optional[pathlib.Path]:
    """Write a report to a file; returns the path written, or None when there is nowhere to write."""
    if not output:
        return None
    path = resolve_output_path(output)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    logger.info(f"Wrote report to {path}.")
    return path


def load_schema(name: str) -> Dict[str, Any]:
    """Load one of the published report schemas by command name."""
    return json.loads((SCHEMA_DIR / f"{name}.schema.json").read_text())


def _to_json_value(value: Any) -> Any:
    if isinstance(value, Fraction):
        return float(value)
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, pathlib.Path):
        return str(value)
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


def _to_cell(value: Any) -> Any:
    if isinstance(value, Fraction):
        return str(value) if value.denominator != 1 else value.numerator
    if isinstance(value, float) and math.isinf(value):
        return "inf"
    if isinstance(value, Enum):
        return value.value
    return value
