from . import correlations, distinguishability, models, serialization
from .correlations import (
    PostState,
    eacc_correlations,
    eaqc_correlations,
    qc_correlations,
    reduced_post_state,
    success_metric,
)
from .distinguishability import (
    eacc_distinguishability,
    eacc_distinguishability_interval,
    eaqc_distinguishability,
    qc_distinguishability,
    scenario1_eacc_distinguishability,
    scenario1_eaqc_distinguishability,
)
from .models import CorrelationTable, EaccProtocol, EaqcProtocol, QcProtocol
from .serialization import load_protocol, protocol_from_json, protocol_to_json, save_protocol
