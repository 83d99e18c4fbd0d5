from . import base, chaturvedi, graph, pair, rac, tilted
from .base import Task
from .chaturvedi import chaturvedi_bound, chaturvedi_task
from .graph import (
    cycle_target_ratio,
    cycle_target_success,
    cycle_task,
    graph_bound,
    graph_task,
)
from .pair import pair_bound, pair_task
from .rac import rac_bound, rac_eaqc_reference, rac_qc_protocol, rac_task
from .tilted import (
    TiltedParams,
    tilted_closed_form,
    tilted_eacc_protocol,
    tilted_literal_protocol,
    tilted_literal_value,
    tilted_qc_image_protocol,
    tilted_qc_protocol,
    tilted_restricted_value,
    tilted_task,
)
