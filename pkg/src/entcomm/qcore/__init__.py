from . import linalg, objects, serialization, validation
from .linalg import (
    apply_kraus,
    conjugate,
    make_entangled,
    partial_trace,
    permute_systems,
    phi_plus,
    tensor,
)
from .objects import DensityState, KrausChannel, Povm, PureState
from .validation import ValidationReport, validate
