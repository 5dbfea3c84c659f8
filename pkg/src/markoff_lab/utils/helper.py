import dataclasses
import json
import logging
import os
import platform
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Optional, Sequence, TextIO, Union

import pandas as pd
import yaml

from markoff_lab.exactnum import Mat2, QuadIrr, RatInterval
from markoff_lab.markoff import CohnMatrix, MarkoffTriple
from markoff_lab.words import EndoWord, W2Word, Word


class ReportUtils:
    """Utility class for runspec files and report serialization"""

    @staticmethod
    def read_runspec_file(runspec_file: Path) -> Optional[Dict[str, Any]]:
        """Reads a runspec file, as YAML when the suffix says so and JSON otherwise."""
        logging.info(f"Reading configuration file: {runspec_file}")
        with runspec_file.open("r") as f:
            if runspec_file.suffix in (".yaml", ".yml"):
                try:
                    return yaml.safe_load(f)
                except yaml.YAMLError as e:
                    logging.error(f"Invalid YAML format in {runspec_file}: {e}")
                    raise ValueError(f"Invalid YAML format: {e}")
            try:
                return json.load(f)
            except json.JSONDecodeError as e:
                logging.error(f"Invalid JSON format in {runspec_file}: {e}")
                raise ValueError(f"Invalid JSON format: {e}")

    @staticmethod
    def ensure_directory_exists(directory: Path) -> None:
        """Ensures that the specified directory exists."""
        logging.info(f"Ensuring directory exists: {directory}")
        directory.mkdir(parents=True, exist_ok=True)
        if platform.system() != "Windows":
            os.chmod(directory, 0o755)

    @staticmethod
    def to_jsonable(value: Any) -> Any:
        """Lossless, language-neutral form: rationals as "p/q", intervals as {"lo", "hi"}."""
        if isinstance(value, bool) or value is None or isinstance(value, str):
            return value
        if isinstance(value, int):
            return value
        if isinstance(value, Fraction):
            return str(value) if value.denominator != 1 else str(value.numerator)
        if isinstance(value, RatInterval):
            return {"lo": ReportUtils.to_jsonable(value.lo), "hi": ReportUtils.to_jsonable(value.hi)}
        if isinstance(value, QuadIrr):
            return {"p": value.p, "q": value.q, "D": value.D, "r": value.r, "text": str(value)}
        if isinstance(value, Mat2):
            return value.rows()
        if isinstance(value, CohnMatrix):
            return [[value.m, value.k], [value.k, value.l]]
        if isinstance(value, MarkoffTriple):
            return list(value.as_tuple())
        if isinstance(value, (Word, W2Word, EndoWord)):
            return str(value)
        if isinstance(value, Enum):
            return value.value
        if dataclasses.is_dataclass(value):
            return {
                f.name: ReportUtils.to_jsonable(getattr(value, f.name))
                for f in dataclasses.fields(value)
            }
        if isinstance(value, dict):
            return {str(k): ReportUtils.to_jsonable(v) for k, v in value.items()}
        if isinstance(value, (list, tuple, set, frozenset)):
            items = sorted(value) if isinstance(value, (set, frozenset)) else value
            return [ReportUtils.to_jsonable(v) for v in items]
        raise TypeError(f"cannot serialize {type(value).__name__}")

    @staticmethod
    def dump_json(payload: Any) -> str:
        """Byte-stable JSON: sorted keys, fixed indentation, no timestamps."""
        return json.dumps(
            ReportUtils.to_jsonable(payload), sort_keys=True, indent=2, ensure_ascii=False
        )

    @staticmethod
    def write_json(payload: Any, output_file: Path) -> Path:
        logging.info(f"Writing report: {output_file}")
        output_file.parent.mkdir(parents=True, exist_ok=True)
        output_file.write_text(ReportUtils.dump_json(payload) + "\n", encoding="utf-8")
        return output_file

    @staticmethod
    def write_csv(
        rows: Sequence[Sequence[Any]],
        columns: Sequence[str],
        target: Union[Path, TextIO],
    ) -> None:
        """Writes a flat table; cells go through the same serialization as JSON."""
        frame = pd.DataFrame(
            [
                [
                    ReportUtils.dump_json(cell) if isinstance(cell, (dict, list)) else ReportUtils.to_jsonable(cell)
                    for cell in row
                ]
                for row in rows
            ],
            columns=list(columns),
        )
        frame.to_csv(target, index=False, lineterminator="\n")
