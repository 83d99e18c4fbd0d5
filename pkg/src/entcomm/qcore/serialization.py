"""
JSON carriers for matrices and quantum objects

Complex entries are written as [re, im] pairs, row-major:
{"rows": n, "cols": m, "entries": [[re, im], ...]}
"""
import numpy as np

from .objects import DensityState, KrausChannel, Povm, PureState


def matrix_to_json(m) -> dict:
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "entries": [[float(z.real), float(z.imag)] for z in m.reshape(-1)],
    }


def matrix_from_json(data: dict) -> np.ndarray:
    rows, cols = int(data["rows"]), int(data["cols"])
    entries = data["entries"]
    if len(entries) != rows * cols:
        raise ValueError(
            f"Matrix JSON declares {rows}x{cols} but carries {len(entries)} entries"
        )
    flat = np.array([complex(re, im) for re, im in entries], dtype=np.complex128)
    return flat.reshape(rows, cols)


def state_to_json(state) -> dict:
    if isinstance(state, PureState):
        return {"kind": "pure", "amplitudes": matrix_to_json(state.amplitudes)}
    return {"kind": "density", "matrix": matrix_to_json(state.matrix)}


def state_from_json(data: dict):
    if data.get("kind") == "pure":
        return PureState(matrix_from_json(data["amplitudes"]).reshape(-1))
    if "matrix" in data:
        return DensityState(matrix_from_json(data["matrix"]))
    # bare matrix
    return DensityState(matrix_from_json(data))


def povm_to_json(povm: Povm) -> list:
    return [matrix_to_json(e) for e in povm.elements]


def povm_from_json(data: list, check: bool = True) -> Povm:
    return Povm([matrix_from_json(e) for e in data], check=check)


def channel_to_json(channel: KrausChannel) -> list:
    return [matrix_to_json(k) for k in channel.kraus_ops]


def channel_from_json(data: list) -> KrausChannel:
    return KrausChannel([matrix_from_json(k) for k in data])
