import json
import re
from importlib import resources

import pandas as pd

SINGLETON_CSV_SCHEMA = None


def load_schema():
    global SINGLETON_CSV_SCHEMA
    if SINGLETON_CSV_SCHEMA is None:
        SINGLETON_CSV_SCHEMA = CsvSchema()
    return SINGLETON_CSV_SCHEMA


class CsvSchema:
    """Column layout of every CSV the command line writes."""

    def __init__(self):
        with resources.files("entcomm.resources").joinpath("csv_schema.json").open() as f:
            self.raw = json.load(f)
        self.tables = self.raw["tables"]
        self.separator = self.raw["separator"]
        self.decimal = self.raw["decimal"]

    def table_for(self, experiment: str) -> str:
        for name, table in self.tables.items():
            if experiment in table["used_by"]:
                return name
        raise KeyError(f"No CSV layout declared for experiment {experiment!r}")

    def columns(self, table: str):
        return [c["name"] for c in self.tables[table]["columns"] if "name" in c]

    def _patterns(self, table: str):
        out = []
        for c in self.tables[table]["columns"]:
            if "pattern" in c:
                regex = re.escape(c["pattern"]).replace("<z>", r"\d+").replace("<x>", r"\d+")
                out.append(re.compile(f"^{regex}$"))
        return out

    def check(self, table: str, frame: pd.DataFrame):
        """Raise ValueError when ``frame`` does not follow the declared layout."""
        fixed = self.columns(table)
        patterns = self._patterns(table)
        columns = list(frame.columns)
        if not patterns:
            if columns != fixed:
                raise ValueError(f"Table {table!r} needs columns {fixed}, got {columns}")
            return
        free = [c for c in columns if c not in fixed]
        missing = [c for c in fixed if c not in columns]
        unmatched = [c for c in free if not any(p.match(c) for p in patterns)]
        if missing or unmatched:
            raise ValueError(
                f"Table {table!r}: missing columns {missing}, undeclared columns {unmatched}"
            )

    def write(self, table: str, frame: pd.DataFrame, path):
        self.check(table, frame)
        frame.to_csv(path, index=False, sep=self.separator, decimal=self.decimal)
