from . import dense_coding, paulis, qubit, report, teleportation
from .dense_coding import eacc_to_eaqc
from .paulis import bell_projectors, bell_vector, dense_coding_dim, pauli
from .qubit import qc_to_eacc
from .report import TransformReport
from .teleportation import eaqc_to_eacc
