"""
Protocol JSON

Named sections "shared", "alice" and "bob" mirror the protocol fields; the
EACC message function is an integer matrix indexed [x][a].
"""
import json
from pathlib import Path

from ..qcore.serialization import (
    channel_from_json,
    channel_to_json,
    povm_from_json,
    povm_to_json,
    state_from_json,
    state_to_json,
)
from .models import EaccProtocol, EaqcProtocol, QcProtocol


def protocol_to_json(p) -> dict:
    if isinstance(p, QcProtocol):
        return {
            "kind": "qc",
            "alice": {"states": [state_to_json(s) for s in p.states]},
            "bob": {"povms": [povm_to_json(m) for m in p.measurements]},
        }
    if isinstance(p, EaccProtocol):
        return {
            "kind": "eacc",
            "dims": list(p.dims),
            "shared": state_to_json(p.shared),
            "alice": {
                "povms": [povm_to_json(m) for m in p.alice_povms],
                "message_fn": p.message_fn.tolist(),
            },
            "bob": {"povms": [[povm_to_json(m) for m in row] for row in p.bob_povms]},
        }
    if isinstance(p, EaqcProtocol):
        return {
            "kind": "eaqc",
            "dims": list(p.dims),
            "shared": state_to_json(p.shared),
            "alice": {"channels": [channel_to_json(c) for c in p.channels]},
            "bob": {"povms": [povm_to_json(m) for m in p.bob_povms]},
        }
    raise TypeError(f"Cannot serialise {type(p).__name__}")


def protocol_from_json(data: dict):
    kind = data.get("kind")
    if kind == "qc":
        return QcProtocol(
            tuple(state_from_json(s) for s in data["alice"]["states"]),
            tuple(povm_from_json(m) for m in data["bob"]["povms"]),
        )
    if kind == "eacc":
        return EaccProtocol(
            shared=state_from_json(data["shared"]),
            dims=tuple(data["dims"]),
            alice_povms=tuple(povm_from_json(m) for m in data["alice"]["povms"]),
            message_fn=data["alice"]["message_fn"],
            bob_povms=tuple(
                tuple(povm_from_json(m) for m in row) for row in data["bob"]["povms"]
            ),
        )
    if kind == "eaqc":
        return EaqcProtocol(
            shared=state_from_json(data["shared"]),
            dims=tuple(data["dims"]),
            channels=tuple(channel_from_json(c) for c in data["alice"]["channels"]),
            bob_povms=tuple(povm_from_json(m) for m in data["bob"]["povms"]),
        )
    raise ValueError(f"Unknown protocol kind {kind!r}")


def save_protocol(p, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        json.dump(protocol_to_json(p), f, indent=2)


def load_protocol(path):
    with open(path) as f:
        return protocol_from_json(json.load(f))
