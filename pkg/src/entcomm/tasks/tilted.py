"""
Communication task built from the tilted CHSH expression

Alice's input is x' = (a, x) in the order 00, 01, 10, 11, Bob's input is y
and his output is b. The coefficients are

    c((a,x), y, b) = (-1)^(a+b+xy) beta_ax + alpha (-1)^b beta_a0 [x=0][y=0]

with uniform priors 1/4 over x'. The distinguishability cap is 1/2.
"""
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from ..config import logger
from ..qcore import make_entangled, phi_plus
from ..qcore.linalg import SIGMA_X, SIGMA_Z, binary_measurement, bloch_state
from ..qcore.objects import Povm
from ..protocols import EaccProtocol, QcProtocol
from ..transforms import qc_to_eacc
from .base import Task, uniform

D_CAP = 0.5
INPUTS = ((0, 0), (0, 1), (1, 0), (1, 1))


@dataclass(frozen=True)
class TiltedParams:
    theta: float
    alpha: float
    # cos mu = 1/sqrt(1 + sin^2 2theta), sets the beta marginals and Bob's literal bases
    mu: float
    beta_00: float
    beta_10: float
    beta_01: float
    beta_11: float
    # 2/sqrt(1 + tan^2 2theta), kept for reporting only
    alpha_printed: float

    @classmethod
    def from_theta(cls, theta: float) -> "TiltedParams":
        if not 0.0 < theta < np.pi / 2:
            raise ValueError(f"theta={theta} outside (0, pi/2)")
        s, c = np.sin(2 * theta), np.cos(2 * theta)
        # 2/sqrt(1 + 2 tan^2 2theta) written without the pole at pi/4
        alpha = 2 * abs(c) / np.sqrt(c**2 + 2 * s**2)
        cos_mu = 1.0 / np.sqrt(1 + s**2)
        beta_00 = cos_mu * np.cos(theta) ** 2 - cos_mu / 2 + 0.5
        beta_10 = 1.0 - beta_00
        return cls(
            theta=float(theta),
            alpha=float(alpha),
            mu=float(np.arccos(cos_mu)),
            beta_00=float(beta_00),
            beta_10=float(beta_10),
            beta_01=float(beta_00),
            beta_11=float(beta_10),
            alpha_printed=float(2 * abs(c)),
        )

    def beta(self, a: int, x: int) -> float:
        return {
            (0, 0): self.beta_00,
            (1, 0): self.beta_10,
            (0, 1): self.beta_01,
            (1, 1): self.beta_11,
        }[(a, x)]

    @property
    def kappa(self) -> float:
        """alpha (beta_00 - beta_10), the weight of the <F_0 G_0> tilt."""
        return self.alpha * (self.beta_00 - self.beta_10)


def tilted_task(theta: float):
    params = TiltedParams.from_theta(theta)
    c = np.zeros((4, 2, 2))
    for i, (a, x) in enumerate(INPUTS):
        for y in range(2):
            for b in range(2):
                c[i, y, b] = (-1) ** (a + b + x * y) * params.beta(a, x)
                if x == 0 and y == 0:
                    c[i, y, b] += params.alpha * (-1) ** b * params.beta(a, 0)
    task = Task(c, uniform(4), "tilted", {"theta": float(theta), "d_cap": D_CAP})
    return task, params


def tilted_closed_form(theta: float, printed: bool = False) -> float:
    """sqrt(8 + 2 alpha^2)."""
    params = TiltedParams.from_theta(theta)
    alpha = params.alpha_printed if printed else params.alpha
    return float(np.sqrt(8 + 2 * alpha**2))


def _alice_povm(observable: np.ndarray, reversed_order: bool) -> Povm:
    plus, minus = (np.eye(2) + observable) / 2, (np.eye(2) - observable) / 2
    return Povm([minus, plus] if reversed_order else [plus, minus])


def tilted_eacc_protocol(theta: float, state: str = "psi") -> EaccProtocol:
    """
    EACC protocol where Alice measures sigma_z, bar sigma_z, sigma_x, bar sigma_x

    The bar reverses the outcome order (inputs with a = 1). Alice sends her
    outcome; Bob measures along g_y and reverses his outcome on the second
    message. On cos(theta)|00> + sin(theta)|11> the correlator of sigma_z and
    sigma_x with g is (g_z, s g_x) with s = sin 2theta, so the best Bob
    directions are g_0 ~ (s, 0, 1 + kappa) and g_1 ~ (-s, 0, 1).

    Args:
        theta: task parameter
        state: "psi" for the tilted state at theta, "phi+" for |phi+>
    """
    params = TiltedParams.from_theta(theta)
    if state == "psi":
        shared = make_entangled(theta, 2)
        s = np.sin(2 * theta)
    elif state == "phi+":
        shared = phi_plus(2)
        s = 1.0
    else:
        raise ValueError(f"Unknown shared state {state!r}")

    observables = (SIGMA_Z, SIGMA_X)
    alice = tuple(_alice_povm(observables[x], a == 1) for a, x in INPUTS)
    directions = (np.array([s, 0.0, 1 + params.kappa]), np.array([-s, 0.0, 1.0]))
    bob = []
    for g in directions:
        povm = binary_measurement(g)
        bob.append((povm, povm.relabeled([1, 0])))
    return EaccProtocol(
        shared=shared,
        dims=(2, 2),
        alice_povms=alice,
        message_fn=np.tile([0, 1], (4, 1)),
        bob_povms=tuple(bob),
    )


def tilted_restricted_value(theta: float, state: str = "psi") -> float:
    """sqrt(s^2 + (1 + kappa)^2) + sqrt(1 + s^2), the value of tilted_eacc_protocol."""
    params = TiltedParams.from_theta(theta)
    s = np.sin(2 * theta) if state == "psi" else 1.0
    return float(np.hypot(s, 1 + params.kappa) + np.hypot(1.0, s))


def tilted_literal_protocol(theta: float) -> EaccProtocol:
    """
    The restricted protocol with Bob's textbook bases instead of optimal ones

    Bob measures {|omega>, |omega^perp>} for y = 0 and {|tau>, |tau^perp>} for
    y = 1, with |omega> = cos(mu/2)|0> + sin(mu/2)|1> and tau rotated by pi/4
    from omega, reversing his outcome on the second message. Its
    value is reported next to tilted_eacc_protocol.
    """
    params = TiltedParams.from_theta(theta)
    observables = (SIGMA_Z, SIGMA_X)
    alice = tuple(_alice_povm(observables[x], a == 1) for a, x in INPUTS)
    mu = params.mu
    directions = (
        np.array([np.sin(mu), 0.0, np.cos(mu)]),
        np.array([np.cos(mu), 0.0, -np.sin(mu)]),
    )
    bob = []
    for g in directions:
        povm = binary_measurement(g)
        bob.append((povm, povm.relabeled([1, 0])))
    return EaccProtocol(
        shared=make_entangled(theta, 2),
        dims=(2, 2),
        alice_povms=alice,
        message_fn=np.tile([0, 1], (4, 1)),
        bob_povms=tuple(bob),
    )


def tilted_literal_value(theta: float) -> float:
    """(1 + kappa) cos mu + s sin mu - sin mu - s cos mu with s = sin 2theta."""
    params = TiltedParams.from_theta(theta)
    s = np.sin(2 * theta)
    c_mu, s_mu = np.cos(params.mu), np.sin(params.mu)
    return float((1 + params.kappa) * c_mu + s * s_mu - s_mu - s * c_mu)


def _qubit_weights(params: TiltedParams, phi: float):
    """Bob's Bloch vectors at angle phi and the vectors Alice's states align with."""
    b0 = np.array([np.sin(phi / 2), 0.0, np.cos(phi / 2)])
    b1 = np.array([-np.sin(phi / 2), 0.0, np.cos(phi / 2)])
    a = params.alpha
    w = {
        (0, 0): params.beta_00 * ((1 + a) * b0 + b1),
        (1, 0): params.beta_10 * ((a - 1) * b0 - b1),
        (0, 1): params.beta_01 * (b0 - b1),
        (1, 1): -params.beta_11 * (b0 - b1),
    }
    return (b0, b1), w


def tilted_qc_protocol(theta: float) -> QcProtocol:
    """
    Best qubit QC protocol with projective Bob measurements in the x-z plane

    For Bob's unit vectors b_0, b_1 the success is sum_x' <r_x', w_x'>, so each
    state points along w_x' and only the angle between b_0 and b_1 is left to
    optimise.
    """
    params = TiltedParams.from_theta(theta)

    def negative_value(phi):
        _, w = _qubit_weights(params, phi)
        return -sum(np.linalg.norm(v) for v in w.values())

    grid = np.linspace(0.0, np.pi, 181)
    start = grid[int(np.argmin([negative_value(phi) for phi in grid]))]
    step = grid[1] - grid[0]
    res = minimize_scalar(
        negative_value,
        bounds=(max(0.0, start - step), min(np.pi, start + step)),
        method="bounded",
        options={"xatol": 1e-10},
    )
    (b0, b1), w = _qubit_weights(params, res.x)
    states = []
    for key in INPUTS:
        v = w[key]
        states.append(bloch_state(v if np.linalg.norm(v) > 1e-12 else b0).density())
    logger.debug(f"Tilted qubit protocol at theta={theta:.4f}: value {-res.fun:.6f}, phi={res.x:.4f}")
    return QcProtocol(tuple(states), (binary_measurement(b0), binary_measurement(b1)))


def tilted_qc_image_protocol(theta: float) -> EaccProtocol:
    """EACC image of tilted_qc_protocol on |phi+>, distinguishability at most 1/2."""
    eacc, _ = qc_to_eacc(tilted_qc_protocol(theta), with_distinguishability=False)
    return eacc
