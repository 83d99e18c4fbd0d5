"""
Experiment records and their on-disk layout

Every run lands in results/<experiment>/<timestamp>/ with record.json,
data.csv and, when the experiment produced one, protocol.json. record.json
holds the result only, so reruns with the same seed write identical files;
wall time and artifact paths go to run.json next to it.
"""
import json
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Dict, List, Optional

import pandas as pd

from ..config import logger, recording_settings
from ..protocols import protocol_to_json
from .schema import load_schema

# fields that change between otherwise identical runs
VOLATILE_FIELDS = ("wall_time", "artifacts")
RUN_FILE = "run.json"


@dataclass
class ExperimentRecord:
    """
    Outcome of one experiment

    ``values`` maps a regime (C, QC, EACC, EAQC) to its {"S": .., "D": ..}.
    The two advantage quantifiers are derived from the four stored numbers:
    the classical distinguishability needed for the EACC score over the EACC
    distinguishability, and the EACC score over the classical optimum at the
    EACC distinguishability.
    """

    experiment: str
    inputs: dict
    values: Dict[str, dict] = field(default_factory=dict)
    classical_distinguishability: Optional[float] = None
    eacc_distinguishability: Optional[float] = None
    eacc_success: Optional[float] = None
    classical_success: Optional[float] = None
    # compared quantity name -> target value
    targets: Dict[str, float] = field(default_factory=dict)
    # compared quantity name -> smallest passing value
    minimums: Dict[str, float] = field(default_factory=dict)
    tolerance: float = 1e-3
    seed: int = 0
    wall_time: float = 0.0
    artifacts: Dict[str, str] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)

    @property
    def distinguishability_ratio(self) -> Optional[float]:
        if self.classical_distinguishability is None or not self.eacc_distinguishability:
            return None
        return self.classical_distinguishability / self.eacc_distinguishability

    @property
    def success_ratio(self) -> Optional[float]:
        if self.eacc_success is None or not self.classical_success:
            return None
        return self.eacc_success / self.classical_success

    def quantity(self, name: str) -> Optional[float]:
        if name in ("distinguishability_ratio", "success_ratio"):
            return getattr(self, name)
        if name in (
            "classical_distinguishability",
            "eacc_distinguishability",
            "eacc_success",
            "classical_success",
        ):
            return getattr(self, name)
        regime, _, key = name.partition(".")
        return self.values.get(regime, {}).get(key)

    def to_json(self) -> dict:
        out = asdict(self)
        out["distinguishability_ratio"] = self.distinguishability_ratio
        out["success_ratio"] = self.success_ratio
        return out

    def result_json(self) -> dict:
        """to_json without the fields in VOLATILE_FIELDS"""
        out = self.to_json()
        for key in VOLATILE_FIELDS:
            out.pop(key)
        return out

    def run_json(self) -> dict:
        return {key: getattr(self, key) for key in VOLATILE_FIELDS}

    @classmethod
    def from_json(cls, data: dict) -> "ExperimentRecord":
        data = dict(data)
        data.pop("distinguishability_ratio", None)
        data.pop("success_ratio", None)
        return cls(**data)

    @classmethod
    def load(cls, path) -> "ExperimentRecord":
        """Read a record.json, merging the run.json written beside it if present"""
        path = Path(path)
        with open(path) as f:
            data = json.load(f)
        run_path = path.parent / RUN_FILE
        if run_path.exists():
            with open(run_path) as f:
                data.update(json.load(f))
        return cls.from_json(data)


class ExperimentRecorder:
    """Writes experiment records below a results directory"""

    def __init__(self, output_dir=None):
        """
        Args:
            output_dir: base directory, recording_settings["results_dir"] by default
        """
        self.output_dir = Path(output_dir or recording_settings["results_dir"])
        self.setup_directories()

    def setup_directories(self):
        self.output_dir.mkdir(exist_ok=True, parents=True)
        self.metadata_path = self.output_dir / "metadata.json"
        if not self.metadata_path.exists():
            with open(self.metadata_path, "w") as f:
                json.dump({"runs": [], "version": "1.0"}, f)

    def _run_dir(self, experiment: str) -> Path:
        timestamp = time.strftime("%Y%m%d-%H%M%S")
        run_dir = self.output_dir / experiment / timestamp
        count = 1
        while run_dir.exists():
            count += 1
            run_dir = self.output_dir / experiment / f"{timestamp}-{count}"
        run_dir.mkdir(parents=True)
        return run_dir

    def save(
        self,
        record: ExperimentRecord,
        data: pd.DataFrame,
        protocol=None,
        extra_tables: Dict[str, pd.DataFrame] = None,
    ) -> Optional[Path]:
        """
        Write record.json, data.csv and the optional protocol.json

        Args:
            record: experiment record, its ``artifacts`` are filled in here
            data: main table, checked against the shipped CSV schema
            protocol: protocol to store for replay
            extra_tables: further CSVs as {schema table name: frame}

        Returns:
            Path: the run directory, or None when writing failed
        """
        schema = load_schema()
        run_dir = self._run_dir(record.experiment)
        try:
            data_path = run_dir / "data.csv"
            schema.write(schema.table_for(record.experiment), data, data_path)
            record.artifacts["data"] = str(data_path)

            for name, frame in (extra_tables or {}).items():
                path = run_dir / f"{name}.csv"
                schema.write(name, frame, path)
                record.artifacts[name] = str(path)

            if protocol is not None:
                protocol_path = run_dir / "protocol.json"
                with open(protocol_path, "w") as f:
                    json.dump(protocol_to_json(protocol), f, indent=2)
                record.artifacts["protocol"] = str(protocol_path)

            record_path = run_dir / "record.json"
            record.artifacts["record"] = str(record_path)
            with open(record_path, "w") as f:
                json.dump(record.result_json(), f, indent=2)
            with open(run_dir / RUN_FILE, "w") as f:
                json.dump(record.run_json(), f, indent=2)

            self._update_metadata(record, record_path)
            logger.info(f"Saved {record.experiment} record to {run_dir}")
            return run_dir
        except Exception as e:
            logger.error(f"Error saving {record.experiment} record: {e}")
            return None

    def _update_metadata(self, record: ExperimentRecord, record_path: Path):
        try:
            with open(self.metadata_path, "r") as f:
                metadata = json.load(f)
            metadata["runs"].append(
                {
                    "experiment": record.experiment,
                    "record": str(record_path),
                    "seed": record.seed,
                    "timestamp": time.strftime("%Y-%m-%d %H:%M:%S"),
                }
            )
            with open(self.metadata_path, "w") as f:
                json.dump(metadata, f, indent=2)
        except Exception as e:
            logger.error(f"Error updating metadata: {e}")
