import re
from dataclasses import dataclass, field

import numpy as np

_LEQ = re.compile(r"<=|≤|\\leqslant|\\leq")
_P_TERM = re.compile(r"^([+-]?)(\d*\.?\d*)\*?p\((\d+)\|(\d+)\)$")
_D_TERM = re.compile(r"^([+-]?)(\d*\.?\d*)\*?(?:\\mathcal\{D\}|D)$")
_CONST_TERM = re.compile(r"^([+-]?)(\d+\.?\d*|\.\d+)$")


@dataclass(frozen=True, eq=False)
class FacetInequality:
    """
    sum_{x,z} coefficients[x, z] p(z|x) <= rhs_slope * D + rhs_constant

    Indices are 0-based internally; ``label`` keeps the 1-indexed text form.
    """

    coefficients: np.ndarray
    rhs_slope: float
    rhs_constant: float = 0.0
    label: str = field(default="", compare=False)

    def __post_init__(self):
        coefficients = np.array(self.coefficients, dtype=float)
        if coefficients.ndim != 2:
            raise ValueError("Facet coefficients must be indexed [x, z]")
        if not np.any(coefficients):
            raise ValueError("A facet inequality needs at least one nonzero coefficient")
        coefficients.setflags(write=False)
        object.__setattr__(self, "coefficients", coefficients)

    @property
    def scenario(self):
        return self.coefficients.shape

    def lhs(self, probs) -> float:
        """Evaluate the left-hand side on p(z|x) indexed [x, z]."""
        probs = np.asarray(probs, dtype=float)
        if probs.shape != self.coefficients.shape:
            raise ValueError(f"Expected p(z|x) of shape {self.scenario}, got {probs.shape}")
        return float(np.sum(self.coefficients * probs))

    def bound(self, d: float) -> float:
        return self.rhs_slope * d + self.rhs_constant

    def violation(self, probs, d: float) -> float:
        return self.lhs(probs) - self.bound(d)


def _split_terms(side: str):
    side = re.sub(r"\s+", "", side)
    return [t for t in re.split(r"(?=[+-])", side) if t not in ("", "+")]


def _number(sign: str, digits: str) -> float:
    value = float(digits) if digits not in ("", ".") else 1.0
    return -value if sign == "-" else value


def parse_facet(text: str, n_x: int = None, n_z: int = None) -> FacetInequality:
    """
    Build a FacetInequality from text such as "p(2|1)+p(1|3)+p(3|1) <= 3D"

    Labels are 1-indexed p(z|x). The right-hand side may mix a multiple of D
    with a constant. Shapes default to the largest labels present.
    """
    sides = _LEQ.split(text)
    if len(sides) != 2:
        raise ValueError(f"Expected exactly one '<=' in {text!r}")
    lhs, rhs = sides

    terms = []
    for token in _split_terms(lhs):
        match = _P_TERM.match(token)
        if match is None:
            raise ValueError(f"Cannot parse left-hand term {token!r} in {text!r}")
        sign, digits, z, x = match.groups()
        terms.append((int(x) - 1, int(z) - 1, _number(sign, digits)))
    if not terms:
        raise ValueError(f"No p(z|x) terms in {text!r}")

    slope, constant = 0.0, 0.0
    for token in _split_terms(rhs):
        if (match := _D_TERM.match(token)) is not None:
            slope += _number(*match.groups())
        elif (match := _CONST_TERM.match(token)) is not None:
            constant += _number(*match.groups())
        else:
            raise ValueError(f"Cannot parse right-hand term {token!r} in {text!r}")

    n_x = max(x for x, _, _ in terms) + 1 if n_x is None else n_x
    n_z = max(z for _, z, _ in terms) + 1 if n_z is None else n_z
    coefficients = np.zeros((n_x, n_z))
    for x, z, value in terms:
        if x < 0 or z < 0 or x >= n_x or z >= n_z:
            raise ValueError(f"Label p({z + 1}|{x + 1}) outside a ({n_x},{n_z}) scenario")
        coefficients[x, z] += value
    return FacetInequality(coefficients, slope, constant, label=text.strip())


SCENARIO_313_FACETS = (
    parse_facet("p(2|1)+p(1|3)+p(3|1) <= 3D", 3, 3),
    parse_facet("p(2|1)+p(1|3)+p(3|2) <= 3D", 3, 3),
)

SCENARIO_314_FACETS = (
    parse_facet("p(2|1)+p(1|3)+p(3|1)+p(4|3) <= 3D", 3, 4),
    parse_facet("p(2|1)+p(1|3)+p(3|1)+p(4|2) <= 3D", 3, 4),
    parse_facet("p(2|1)+p(1|3)+p(3|1)+p(4|1) <= 3D", 3, 4),
)


def classical_facet_value(f: FacetInequality, d: float) -> float:
    """Largest classical left-hand side at distinguishability d."""
    return f.bound(d)


@dataclass(frozen=True)
class FacetCheck:
    valid: bool
    tight_count: int
    is_facet: bool
    max_violation: float
    dimension: int


def _affine_rank(points: np.ndarray, tol: float = 1e-9) -> int:
    if len(points) == 0:
        return -1
    diffs = points[1:] - points[0]
    if diffs.size == 0:
        return 0
    return int(np.linalg.matrix_rank(diffs, tol=tol))


def verify_facet(f: FacetInequality, vertices, tol: float = 1e-9) -> FacetCheck:
    """
    Check validity on every vertex and whether the tight vertices span a facet

    ``vertices`` is a VertexSet (or any iterable of objects with ``probs`` and
    ``distinguishability``). The facet test compares the affine rank of the
    tight vertices with the dimension of the whole vertex set.
    """
    vertices = list(vertices)
    if not vertices:
        raise ValueError("verify_facet needs at least one vertex")
    probs = np.stack([np.asarray(v.probs, dtype=float) for v in vertices])
    ds = np.array([v.distinguishability for v in vertices])
    if probs.shape[1:] != f.scenario:
        raise ValueError(f"Facet scenario {f.scenario} does not match vertices {probs.shape[1:]}")
    slack = np.einsum("kxz,xz->k", probs, f.coefficients) - f.rhs_slope * ds - f.rhs_constant
    # the last outcome column is fixed by normalisation
    reduced = np.hstack([probs[:, :, :-1].reshape(len(vertices), -1), ds[:, None]])
    dimension = _affine_rank(reduced)
    tight = np.abs(slack) <= tol
    tight_rank = _affine_rank(reduced[tight])
    max_violation = float(slack.max())
    valid = max_violation <= tol
    return FacetCheck(
        valid=bool(valid),
        tight_count=int(tight.sum()),
        is_facet=bool(valid and tight_rank == dimension - 1),
        max_violation=max_violation,
        dimension=dimension,
    )
