"""
Compressed vectors of the theta hierarchy, the tau maps between levels and
the strengthened program hat-theta_l.

A feasible level-l matrix Y over Ind_{l-1} is determined by its diagonal
y(F) = Y[F, F] and by one value per independent (l+1)-set H,
y(H) = eps(F, F') Y[F, F'] for any F + F' = H.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Mapping, Sequence, Tuple

import numpy as np

from src.complex.simplicial_complex import Complex, Face, FaceIndex, epsilon, make_face
from src.errors import DimensionMismatchError, PreconditionError
from src.sdp.admm_solver import Constraint, SdpProblem
from src.theta.theta_builder import ThetaInstance, build_theta_ell

logger = logging.getLogger(__name__)


class LinearForm(dict):
    """Sparse linear combination of matrix entries: {(i, j): coefficient}."""

    def __add__(self, other):
        if isinstance(other, (int, float, Fraction)) and other == 0:
            return LinearForm(self)
        result = LinearForm(self)
        for key, value in other.items():
            result[key] = result.get(key, 0) + value
        return result

    __radd__ = __add__

    def __mul__(self, scalar):
        return LinearForm({key: value * scalar for key, value in self.items()})

    __rmul__ = __mul__


@dataclass
class HierarchyVector:
    """
    The vector y on Ind_{l-1} + Ind_l for level l.

    Values may be floats, Fractions or LinearForms; tau only needs addition
    and multiplication by rationals.
    """

    level: int
    faces: Dict[Face, object]
    unions: Dict[Face, object]

    def __post_init__(self):
        for face in self.faces:
            if len(face) != self.level:
                raise DimensionMismatchError(f"{face} is not an {self.level}-set")
        for union in self.unions:
            if len(union) != self.level + 1:
                raise DimensionMismatchError(f"{union} is not an {self.level + 1}-set")

    def trace(self):
        return sum(self.faces.values())

    def objective(self):
        """<L_down_{l-1}(Ind), Y> = l * sum y(F) + l(l+1) * sum y(H)."""
        return self.level * sum(self.faces.values()) + self.level * (self.level + 1) * sum(self.unions.values())

    def to_matrix(self, index: FaceIndex, exact: bool = False) -> np.ndarray:
        """
        The matrix realization over an index of l-sets.

        Diagonal entries are y(F); off-diagonal entries are eps(F, F') y(F+F')
        when the union carries a value, else zero.
        """
        if index.dim != self.level - 1:
            raise DimensionMismatchError(f"Index of dimension {index.dim} for level {self.level}")
        size = len(index)
        matrix = np.zeros((size, size), dtype=object if exact else float)
        if exact:
            matrix[:] = Fraction(0)
        for a, face in enumerate(index):
            matrix[a, a] = self.faces.get(face, 0)
        for a, b in combinations(range(size), 2):
            union = make_face(set(index.faces[a]) | set(index.faces[b]))
            if union in self.unions:
                value = epsilon(index.faces[a], index.faces[b]) * self.unions[union]
                matrix[a, b] = matrix[b, a] = value
        return matrix

    @classmethod
    def from_matrix(cls, instance: ThetaInstance, matrix: np.ndarray) -> "HierarchyVector":
        """Read y off a feasible matrix through the canonical pair of each union."""
        faces = {face: matrix[a, a] for a, face in enumerate(instance.index)}
        unions = {}
        for union, members in instance.symmetry_classes.items():
            a, b, e = members[0]
            unions[union] = e * matrix[a, b]
        return cls(instance.level, faces, unions)

    @classmethod
    def of_independent_set(cls, level: int, independent: Sequence[int],
                           faces: Sequence[Face], unions: Sequence[Face]) -> "HierarchyVector":
        """y^S: l on the l-subsets of S, 1 on its (l+1)-subsets, 0 elsewhere."""
        chosen = frozenset(independent)
        return cls(
            level,
            {face: Fraction(level if chosen.issuperset(face) else 0) for face in faces},
            {union: Fraction(1 if chosen.issuperset(union) else 0) for union in unions},
        )


def tau(y: HierarchyVector, lower_faces: Sequence[Face]) -> HierarchyVector:
    """
    Compress a level-l vector to level l-1.

    z(K) = (1/l) sum over F containing K of y(F), and
    z(F) = y(F) / (l(l-1)) + (1/(l-1)) sum over H containing F of y(H).

    Args:
        y: Vector at level l >= 2
        lower_faces: Ind_{l-2}, the (l-1)-sets

    Returns:
        HierarchyVector: Vector at level l-1 on Ind_{l-2} + Ind_{l-1}
    """
    level = y.level
    if level < 2:
        raise PreconditionError(f"tau needs level >= 2, got {level}")
    lower = {face: 0 for face in lower_faces}
    for face in lower:
        if len(face) != level - 1:
            raise DimensionMismatchError(f"{face} is not an {level - 1}-set")

    down = Fraction(1, level)
    for face, value in y.faces.items():
        for facet in combinations(face, level - 1):
            if facet not in lower:
                raise DimensionMismatchError(f"{facet} missing from the lower index")
            lower[facet] = lower[facet] + value * down

    own = Fraction(1, level * (level - 1))
    up = Fraction(1, level - 1)
    upper = {face: value * own for face, value in y.faces.items()}
    for union, value in y.unions.items():
        for facet in combinations(union, level):
            if facet not in upper:
                raise DimensionMismatchError(f"{facet} missing from level {level} faces")
            upper[facet] = upper[facet] + value * up
    return HierarchyVector(level - 1, lower, upper)


def tau_chain(y: HierarchyVector, ind: Mapping[int, Sequence[Face]], target: int) -> List[HierarchyVector]:
    """Images tau_{l-1}(y), tau_{l-2}(tau_{l-1}(y)), ... down to level target."""
    images = []
    current = y
    while current.level > target:
        current = tau(current, ind[current.level - 2])
        images.append(current)
    return images


def _entry_terms(block: int, a: int, b: int, coefficient) -> Tuple[int, int, int, float]:
    """Constraint entry contributing coefficient * X[a, b] to the inner product."""
    value = float(coefficient)
    return (block, a, b, value if a == b else value / 2.0)


def build_theta_hat_ell(complex_: Complex, level: int) -> SdpProblem:
    """
    The strengthened level-l program.

    Block 0 is Y with the level-l constraints. For i = l-1, ..., 1 another PSD
    block over Ind_{i-1} is tied by equalities to the matrix realization of
    tau_i o ... o tau_{l-1}(y), which is linear in the entries of Y.

    Args:
        complex_: The complex X
        level: l with k <= l <= alpha(X)

    Returns:
        SdpProblem: Multi-block program whose value is at most theta_l
    """
    instance = build_theta_ell(complex_, level)
    ind = complex_.independence_complex(level)

    faces = {face: LinearForm({(a, a): Fraction(1)}) for a, face in enumerate(instance.index)}
    unions = {}
    for union, members in instance.symmetry_classes.items():
        a, b, e = members[0]
        unions[union] = LinearForm({(a, b): Fraction(e)})
    forms = HierarchyVector(level, faces, unions)

    block_sizes = [instance.size]
    objective = [instance.objective.as_float()]
    labels = [instance.index]
    constraints = instance.constraints()

    for block, image in enumerate(tau_chain(forms, ind, 1), start=1):
        index = FaceIndex(image.level - 1, ind[image.level - 1])
        realization = image.to_matrix(index, exact=True)
        block_sizes.append(len(index))
        objective.append(np.zeros((len(index), len(index))))
        labels.append(index)
        for a in range(len(index)):
            for b in range(a, len(index)):
                terms = [_entry_terms(block, a, b, 1)]
                form = realization[a, b]
                if isinstance(form, LinearForm):
                    terms.extend(_entry_terms(0, i, j, -coef) for (i, j), coef in form.items() if coef != 0)
                constraints.append(Constraint(terms, 0.0, f"tau level {image.level} ({a},{b})"))

    logger.info(f"Built hat program at level {level}: blocks {block_sizes}, {len(constraints)} constraints")
    return SdpProblem(
        block_sizes,
        objective,
        constraints,
        labels,
        f"hat theta level {level} n={complex_.n} k={complex_.k}",
    )
