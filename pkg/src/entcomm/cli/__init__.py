from . import experiments, main, records, report, schema
from .records import ExperimentRecord, ExperimentRecorder
from .schema import load_schema
