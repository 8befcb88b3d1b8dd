"""
Pipe-separated cohort files.

One file per patient: a header line naming the columns, then one line per
visit in time order. Missing values are written as NaN. The schema decides
which columns are dynamic, which are static (read from the first visit that
has them) and which one carries the label. A patient is positive when any
visit's label is 1.
"""

from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd

from src.application.dtos.config import SchemaConfig
from src.application.interfaces.storage import IArtifactStore
from src.domain.entities.cohort import Cohort, PatientRecord
from src.domain.value_objects.core import ClusterAssignment
from src.infrastructure.exceptions import ArtifactNotFoundError, DataFormatError
from src.shared.telemetry.logging import get_logger

logger = get_logger(__name__)

MISSING_MARKERS = frozenset({"NaN", "nan", "NAN", ""})
PARTITION_SIDECAR = "planted_partition.json"


def _parse_numeric(frame: pd.DataFrame, columns: list[str], file_path: Path) -> np.ndarray:
    out = np.empty((len(frame), len(columns)))
    for j, column in enumerate(columns):
        cells = frame[column].str.strip()
        missing = cells.isin(MISSING_MARKERS)
        parsed = pd.to_numeric(cells.where(~missing), errors="coerce")
        bad = parsed.isna() & ~missing
        if bad.any():
            row = int(np.flatnonzero(bad.to_numpy())[0])
            raise DataFormatError(
                str(file_path),
                f"unparseable value '{cells.iloc[row]}' in column '{column}'",
                column=column,
                line=row + 2,
            )
        out[:, j] = cells.where(~missing, "nan").astype(np.float64).to_numpy()
    return out


def read_patient_file(file_path: Path, schema: SchemaConfig) -> PatientRecord | None:
    """
    Parse one patient file; None when it has no visits.

    Raises:
        DataFormatError: On a missing schema column or an unparseable cell
    """
    try:
        frame = pd.read_csv(file_path, sep="|", dtype=str, keep_default_na=False, na_filter=False)
    except pd.errors.EmptyDataError as e:
        raise DataFormatError(str(file_path), "file has no header line") from e
    except pd.errors.ParserError as e:
        raise DataFormatError(str(file_path), f"malformed pipe-separated content: {e}") from e

    for column in [*schema.dynamic_columns, *schema.static_columns, schema.label_column]:
        if column not in frame.columns:
            raise DataFormatError(str(file_path), f"header lacks column '{column}'", column=column, line=1)
    if frame.empty:
        return None

    dynamic = _parse_numeric(frame, schema.dynamic_columns, file_path)
    static_rows = _parse_numeric(frame, schema.static_columns, file_path)
    visit_labels = _parse_numeric(frame, [schema.label_column], file_path)[:, 0]

    static = np.full(len(schema.static_columns), np.nan)
    for j in range(static.size):
        observed = static_rows[~np.isnan(static_rows[:, j]), j]
        if observed.size:
            static[j] = observed[0]
    label = int(np.any(visit_labels == 1.0))

    if schema.t_max is not None and dynamic.shape[0] > schema.t_max:
        dynamic = dynamic[-schema.t_max :]
    return PatientRecord(id=file_path.stem, dynamic=dynamic, static=static, label=label)


def load_psv_cohort(directory: str | Path, schema: SchemaConfig) -> Cohort:
    """
    Read every *.psv file of a directory, in file-name order.

    Patients with fewer than T_min visits are dropped and counted.

    Raises:
        ArtifactNotFoundError: If the directory doesn't exist
        DataFormatError: On the first malformed file
    """
    root = Path(directory)
    if not root.is_dir():
        raise ArtifactNotFoundError(str(root))

    records: list[PatientRecord] = []
    dropped = 0
    for file_path in sorted(root.glob("*.psv")):
        record = read_patient_file(file_path, schema)
        if record is None or record.visit_count < schema.t_min:
            dropped += 1
            continue
        records.append(record)

    cohort = Cohort(
        records=tuple(records),
        dynamic_names=tuple(schema.dynamic_columns),
        static_names=tuple(schema.static_columns),
        dropped_short=dropped,
    )
    logger.info("Loaded %d patients from %s (%d dropped below T_min=%d)", len(records), root, dropped, schema.t_min)
    return cohort


def _format_value(value: float) -> str:
    return "NaN" if np.isnan(value) else repr(float(value))


def format_patient_file(record: PatientRecord, schema: SchemaConfig) -> str:
    """PSV text of one patient; every visit carries the patient label"""
    header = [*schema.dynamic_columns, *schema.static_columns, schema.label_column]
    static_cells = [_format_value(v) for v in record.static]
    lines = ["|".join(header)]
    for visit in record.dynamic:
        lines.append("|".join([*(_format_value(v) for v in visit), *static_cells, str(record.label)]))
    return "\n".join(lines) + "\n"


def write_psv_cohort(cohort: Cohort, store: IArtifactStore, prefix: str = "cohort") -> dict[str, str]:
    """
    Write one file per patient below `prefix`.

    Returns:
        relative file name -> SHA-256 checksum
    """
    schema = schema_for(cohort)
    checksums = {}
    for record in cohort.records:
        ref = f"{prefix}/{record.id}.psv"
        checksums[ref] = store.write_text(ref, format_patient_file(record, schema))
    return checksums


def schema_for(cohort: Cohort, label_column: str = "SepsisLabel") -> SchemaConfig:
    """The schema that reads back a cohort written by write_psv_cohort"""
    return SchemaConfig(
        dynamic_columns=list(cohort.dynamic_names),
        static_columns=list(cohort.static_names),
        label_column=label_column,
    )


def partition_document(assignment: ClusterAssignment, names: tuple[str, ...]) -> dict[str, Any]:
    return {
        "k": assignment.k,
        "groups": assignment.named_groups(names),
        "assignment": {names[i]: int(g) for i, g in enumerate(assignment.labels())},
    }


def read_partition(document: dict[str, Any], names: tuple[str, ...]) -> ClusterAssignment:
    """
    Planted partition from its sidecar document, indexed by `names`.

    Raises:
        DataFormatError: If the sidecar names a feature the cohort lacks
    """
    index = {name: i for i, name in enumerate(names)}
    groups = []
    for group in document["groups"]:
        unknown = [name for name in group if name not in index]
        if unknown:
            raise DataFormatError(PARTITION_SIDECAR, f"unknown feature '{unknown[0]}'", column=unknown[0])
        groups.append(tuple(index[name] for name in group))
    return ClusterAssignment(tuple(groups), len(names))
