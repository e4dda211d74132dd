# -*- coding: utf-8 -*-
"""
Dataset ingestion and export.

``studies.csv``  - one row per study:
    study_id,age,sex,has_lateral_view,num_ap_views,num_pa_views,<14 findings>
``outputs.csv``  - long format: study_id,model_id,task,score
``hierarchy.json`` - {"edges": [[parent, child], ...]}

Files are staged as temporaries next to their targets and renamed into
place only once every one of them has been written.

Every schema violation is reported with the file name and the offending
line number (header = line 1).  Missing values are rejected, never imputed.
"""

from __future__ import annotations

import logging
import os
import tempfile
from pathlib import Path
from typing import Dict, List, Mapping, Tuple

import numpy as np
import pandas as pd

from src.app.errors import SchemaError
from src.app.hierarchy import LabelHierarchy
from src.app.models import Dataset, FindingName, StudyRecord, TaskName
from src.config.constants import (
    CLINICAL_FEATURES,
    FINDING_NAMES,
    FLOAT_FORMAT,
    HIERARCHY_JSON,
    OUTPUTS_CSV,
    STUDIES_CSV,
)

logger = logging.getLogger(__name__)

STUDY_COLUMNS: Tuple[str, ...] = ("study_id", *CLINICAL_FEATURES, *FINDING_NAMES)
OUTPUT_COLUMNS: Tuple[str, ...] = ("study_id", "model_id", "task", "score")

_INTEGER_COLUMNS = ("sex", "has_lateral_view", "num_ap_views", "num_pa_views", *FINDING_NAMES)


def _line(index: int) -> int:
    """DataFrame position → 1-based file line (header is line 1)."""
    return index + 2


def _read_csv(path: Path) -> pd.DataFrame:
    if not path.exists():
        raise FileNotFoundError(f"{path} does not exist")
    try:
        return pd.read_csv(path, dtype=str, keep_default_na=False)
    except pd.errors.ParserError as exc:
        raise SchemaError(f"unreadable CSV ({exc})", source=path.name) from exc
    except pd.errors.EmptyDataError as exc:
        raise SchemaError("file is empty", source=path.name) from exc


def _check_columns(frame: pd.DataFrame, expected: Tuple[str, ...], source: str) -> None:
    columns = list(frame.columns)
    missing = [c for c in expected if c not in columns]
    if missing:
        raise SchemaError(f"missing columns {missing}", source=source, row=1)
    unknown = [c for c in columns if c not in expected]
    if unknown:
        raise SchemaError(f"unknown columns {unknown}", source=source, row=1)


def _parse_number(value: str, column: str, source: str, index: int) -> float:
    if value.strip() == "":
        raise SchemaError(f"missing value in column '{column}'", source=source, row=_line(index))
    try:
        number = float(value)
    except ValueError:
        raise SchemaError(
            f"column '{column}' is not numeric ({value!r})", source=source, row=_line(index)
        ) from None
    if not np.isfinite(number):
        raise SchemaError(f"column '{column}' is not finite", source=source, row=_line(index))
    return number


def _parse_int(value: str, column: str, source: str, index: int) -> int:
    number = _parse_number(value, column, source, index)
    if number != int(number):
        raise SchemaError(
            f"column '{column}' must be an integer ({value!r})", source=source, row=_line(index)
        )
    return int(number)


def _parse_studies(frame: pd.DataFrame, source: str) -> List[dict]:
    _check_columns(frame, STUDY_COLUMNS, source)
    rows: List[dict] = []
    seen: Dict[str, int] = {}
    for index, row in enumerate(frame.itertuples(index=False, name=None)):
        values = dict(zip(frame.columns, row))
        study_id = values["study_id"].strip()
        if not study_id:
            raise SchemaError("missing study_id", source=source, row=_line(index))
        if study_id in seen:
            raise SchemaError(
                f"duplicate study_id {study_id!r} (first seen on row {seen[study_id]})",
                source=source,
                row=_line(index),
            )
        seen[study_id] = _line(index)

        parsed = {c: _parse_int(values[c], c, source, index) for c in _INTEGER_COLUMNS}
        age = _parse_number(values["age"], "age", source, index)
        if age < 0:
            raise SchemaError(f"age must be non-negative ({age})", source=source, row=_line(index))
        for column in ("sex", "has_lateral_view", *FINDING_NAMES):
            if parsed[column] not in (0, 1):
                raise SchemaError(
                    f"column '{column}' must be 0 or 1 ({parsed[column]})",
                    source=source,
                    row=_line(index),
                )
        for column in ("num_ap_views", "num_pa_views"):
            if parsed[column] < 0:
                raise SchemaError(f"column '{column}' must be >= 0", source=source, row=_line(index))
        if parsed["has_lateral_view"] == 0 and parsed["num_ap_views"] + parsed["num_pa_views"] == 0:
            raise SchemaError("study has no views", source=source, row=_line(index))

        rows.append(
            {
                "study_id": study_id,
                "age": age,
                "sex": parsed["sex"],
                "has_lateral_view": bool(parsed["has_lateral_view"]),
                "num_ap_views": parsed["num_ap_views"],
                "num_pa_views": parsed["num_pa_views"],
                "labels": {FindingName(f): parsed[f] for f in FINDING_NAMES},
            }
        )
    return rows


def _parse_outputs(
    frame: pd.DataFrame, study_ids: Dict[str, int], source: str
) -> Tuple[Dict[str, Dict[Tuple[str, TaskName], float]], List[str]]:
    _check_columns(frame, OUTPUT_COLUMNS, source)
    outputs: Dict[str, Dict[Tuple[str, TaskName], float]] = {sid: {} for sid in study_ids}
    model_ids: List[str] = []
    for index, (study_id, model_id, task_value, score_value) in enumerate(
        frame[list(OUTPUT_COLUMNS)].itertuples(index=False, name=None)
    ):
        study_id = study_id.strip()
        model_id = model_id.strip()
        if study_id not in study_ids:
            raise SchemaError(f"unknown study_id {study_id!r}", source=source, row=_line(index))
        if not model_id:
            raise SchemaError("missing model_id", source=source, row=_line(index))
        try:
            task = TaskName(task_value.strip())
        except ValueError:
            raise SchemaError(f"unknown task {task_value!r}", source=source, row=_line(index)) from None
        score = _parse_number(score_value, "score", source, index)
        if not (0.0 <= score <= 1.0):
            raise SchemaError(f"score {score} outside [0, 1]", source=source, row=_line(index))
        key = (model_id, task)
        if key in outputs[study_id]:
            raise SchemaError(
                f"duplicate score for ({study_id}, {model_id}, {task.value})",
                source=source,
                row=_line(index),
            )
        outputs[study_id][key] = score
        if model_id not in model_ids:
            model_ids.append(model_id)

    expected = {(m, t) for m in model_ids for t in TaskName}
    for study_id, keys in outputs.items():
        if set(keys) != expected:
            missing = sorted((m, t.value) for m, t in expected - set(keys))
            raise SchemaError(
                f"study {study_id!r} lacks scores for {missing[:3]}"
                + (" ..." if len(missing) > 3 else ""),
                source=source,
            )
    return outputs, model_ids


def load_dataset(
    studies_csv: Path | str,
    outputs_csv: Path | str,
    hierarchy_json: Path | str | None = None,
) -> Dataset:
    """Load and validate a cohort, joining outputs onto studies by study_id.

    ``hierarchy_json=None`` falls back to the shipped default hierarchy.
    """
    studies_path = Path(studies_csv)
    outputs_path = Path(outputs_csv)

    study_rows = _parse_studies(_read_csv(studies_path), studies_path.name)
    index = {row["study_id"]: i for i, row in enumerate(study_rows)}
    outputs, model_ids = _parse_outputs(_read_csv(outputs_path), index, outputs_path.name)

    hierarchy = (
        LabelHierarchy.from_json(hierarchy_json)
        if hierarchy_json is not None
        else LabelHierarchy.default()
    )
    studies = tuple(
        StudyRecord(**row, outputs=outputs[row["study_id"]]) for row in study_rows
    )
    dataset = Dataset(studies=studies, model_ids=tuple(model_ids), hierarchy=hierarchy)
    logger.info(
        "Loaded %d studies x %d models from %s", len(studies), len(model_ids), studies_path.parent
    )
    return dataset


# ---------------------------------------------------------------------------
# Export
# ---------------------------------------------------------------------------

def studies_frame(dataset: Dataset) -> pd.DataFrame:
    records = []
    for study in dataset.studies:
        record = {
            "study_id": study.study_id,
            "age": study.age,
            "sex": study.sex,
            "has_lateral_view": int(study.has_lateral_view),
            "num_ap_views": study.num_ap_views,
            "num_pa_views": study.num_pa_views,
        }
        record.update({f.value: study.labels[f] for f in FindingName})
        records.append(record)
    return pd.DataFrame.from_records(records, columns=list(STUDY_COLUMNS))


def outputs_frame(dataset: Dataset) -> pd.DataFrame:
    records = [
        (study.study_id, model_id, task.value, study.outputs[(model_id, task)])
        for study in dataset.studies
        for model_id in dataset.model_ids
        for task in TaskName
    ]
    return pd.DataFrame.from_records(records, columns=list(OUTPUT_COLUMNS))


def render_csv(frame: pd.DataFrame) -> str:
    return frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


def render_dataset(dataset: Dataset) -> Dict[str, str]:
    """File name -> text for studies.csv, outputs.csv and hierarchy.json."""
    return {
        STUDIES_CSV: render_csv(studies_frame(dataset)),
        OUTPUTS_CSV: render_csv(outputs_frame(dataset)),
        HIERARCHY_JSON: dataset.hierarchy.to_json_text(),
    }


def write_atomically(directory: Path | str, files: Mapping[str, str]) -> List[Path]:
    """Write every ``name -> text`` pair into *directory*, all or nothing."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    staged: List[tuple[str, Path]] = []
    try:
        for name, text in files.items():
            handle = tempfile.NamedTemporaryFile(
                "w", encoding="utf-8", newline="", dir=directory, prefix=f".{name}.", delete=False
            )
            staged.append((handle.name, directory / name))
            with handle:
                handle.write(text)
    except BaseException:
        for temp, _ in staged:
            Path(temp).unlink(missing_ok=True)
        raise
    written = []
    try:
        for temp, target in staged:
            os.replace(temp, target)
            written.append(target)
    except BaseException:
        for temp, _ in staged[len(written):]:
            Path(temp).unlink(missing_ok=True)
        raise
    logger.debug("Wrote %s", ", ".join(p.name for p in written))
    return written


def write_dataset(dataset: Dataset, directory: Path | str) -> Tuple[Path, Path, Path]:
    """Write studies.csv, outputs.csv and hierarchy.json into *directory*."""
    studies_path, outputs_path, hierarchy_path = write_atomically(directory, render_dataset(dataset))
    return studies_path, outputs_path, hierarchy_path
