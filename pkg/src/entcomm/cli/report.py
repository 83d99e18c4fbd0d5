from typing import Iterable, List

import pandas as pd

from .experiments import NPA_NOTE
from .records import ExperimentRecord

MISSING = "-"


def _fmt(value) -> str:
    if value is None:
        return MISSING
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, (int, float)):
        return f"{value:.6f}"
    return str(value)


def _rows(record: ExperimentRecord) -> List[dict]:
    rows = []
    for name, target in record.targets.items():
        value = record.quantity(name)
        if value is None or target is None:
            status, deviation = "flag", None
        else:
            deviation = value - target
            status = "pass" if abs(deviation) <= record.tolerance else "flag"
        rows.append(_row(record, name, value, target, deviation, status))
    for name, minimum in record.minimums.items():
        value = record.quantity(name)
        status = "pass" if value is not None and value >= minimum else "flag"
        deviation = None if value is None else value - minimum
        rows.append(_row(record, name, value, minimum, deviation, status))
    if not rows:
        # no target: show the distinguishability ratio, or nothing
        value = record.distinguishability_ratio
        rows.append(_row(record, "distinguishability_ratio", value, None, None, MISSING))
    return rows


def _row(record, name, value, target, deviation, status) -> dict:
    return {
        "experiment": record.experiment,
        "quantity": name,
        "value": _fmt(value),
        "target": _fmt(target),
        "deviation": _fmt(deviation),
        "status": status,
    }


def report(records: Iterable[ExperimentRecord]) -> pd.DataFrame:
    """
    Summary table with one row per compared quantity

    Targets pass within the record's tolerance, minimums pass when reached.
    Empty fields are rendered as "-".
    """
    records = list(records)
    if not records:
        raise ValueError("report needs at least one record")
    rows = [row for r in records for row in _rows(r)]
    return pd.DataFrame(
        rows, columns=["experiment", "quantity", "value", "target", "deviation", "status"]
    )


def render(frame: pd.DataFrame) -> str:
    return f"{frame.to_string(index=False)}\n\nNote: {NPA_NOTE}"
