"""
Homomorphisms between pure k-complexes and the chromatic number chi_k.

A homomorphism maps (k-1)-faces to (k-1)-faces so that (1) the facets of
every k-face H land exactly on the facets of one k-face H', and (2) under
suitable orientations of both complexes [H':f(F)] = [H:F]. Reorienting a
face negates all incidence numbers through it, so (2) is a linear system
over GF(2) in one flip bit per face.
"""

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Dict, List, Optional, Tuple

from src.combinatorics.invariants import chi_skeleton
from src.complex.simplicial_complex import Complex, Face, complete_complex, face_label, incidence, make_face
from src.errors import ComplexError, PreconditionError, SearchBudgetExceeded
from src.spectral.chain_operators import up_laplacian
from src.spectral.linalg import lambda_max

logger = logging.getLogger(__name__)


class Gf2System:
    """
    Incremental linear system over GF(2) on integer bitsets.

    Each stored row has its highest set bit as pivot; rows are reduced against
    the pivots present when they were added.
    """

    def __init__(self):
        self.rows: Dict[int, Tuple[int, int]] = {}

    def copy(self) -> "Gf2System":
        clone = Gf2System()
        clone.rows = dict(self.rows)
        return clone

    def add(self, mask: int, rhs: int) -> bool:
        """Add sum of the masked bits = rhs; False if the system became inconsistent."""
        while mask:
            pivot = mask.bit_length() - 1
            if pivot not in self.rows:
                self.rows[pivot] = (mask, rhs)
                return True
            row_mask, row_rhs = self.rows[pivot]
            mask ^= row_mask
            rhs ^= row_rhs
        return rhs == 0

    def solve(self) -> Dict[int, int]:
        """One solution with free variables set to zero."""
        values: Dict[int, int] = {}
        for pivot in sorted(self.rows):
            mask, rhs = self.rows[pivot]
            rest = mask & ~(1 << pivot)
            parity = rhs
            while rest:
                bit = rest.bit_length() - 1
                parity ^= values.get(bit, 0)
                rest &= ~(1 << bit)
            values[pivot] = parity
        return values


class _Variables:
    """Bit positions for the orientation flips of source and target faces."""

    def __init__(self):
        self.bits: Dict[Tuple[str, Face], int] = {}

    def bit(self, side: str, face: Face) -> int:
        key = (side, face)
        if key not in self.bits:
            self.bits[key] = len(self.bits)
        return 1 << self.bits[key]


def _parity(sign: int) -> int:
    return 1 if sign < 0 else 0


def _incidence_equation(variables: _Variables, higher: Face, lower: Face,
                        target_higher: Face, target_lower: Face) -> Tuple[int, int]:
    """Equation b(H) + b(F) + b'(H') + b'(f(F)) = ib(H, F) + ib(H', f(F))."""
    mask = (variables.bit("source", higher) ^ variables.bit("source", lower)
            ^ variables.bit("target", target_higher) ^ variables.bit("target", target_lower))
    rhs = _parity(incidence(higher, lower)) ^ _parity(incidence(target_higher, target_lower))
    return mask, rhs


@dataclass
class Homomorphism:
    """
    A homomorphism with its witnessing orientations.

    Attributes:
        f: (k-1)-faces of the source to (k-1)-faces of the target
        assignment: Source k-face H to its image H'
        orientation: ("source" | "target", face) -> +1 or -1; faces not listed keep +1
    """

    f: Dict[Face, Face]
    assignment: Dict[Face, Face]
    orientation: Dict[Tuple[str, Face], int] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "f": {face_label(k): face_label(v) for k, v in sorted(self.f.items())},
            "assignment": {face_label(k): face_label(v) for k, v in sorted(self.assignment.items())},
            "orientation": {
                f"{side}:{face_label(face)}": sign
                for (side, face), sign in sorted(self.orientation.items())
            },
        }


@dataclass
class HomomorphismCheck:
    """Result of check_homomorphism; `witness` is set when valid."""

    valid: bool
    reason: str = ""
    witness: Optional[Homomorphism] = None


def induced_assignment(source: Complex, target: Complex, f: Dict[Face, Face]) -> Tuple[Dict[Face, Face], str]:
    """
    Derive H -> H' from f via condition (1).

    Returns:
        tuple: (assignment, reason) where reason is empty when (1) holds
    """
    assignment = {}
    for face in source.k_faces:
        images = [f[facet] for facet in combinations(face, source.k)]
        image = make_face(set().union(*images)) if images else ()
        if len(set(images)) != len(images) or len(image) != source.k + 1:
            return {}, f"facets of {list(face)} do not map onto the facets of a k-face"
        if not target.has_face(image):
            return {}, f"image {list(image)} of {list(face)} is not a face of the target"
        assignment[face] = image
    return assignment, ""


def check_homomorphism(source: Complex, target: Complex, f: Dict[Face, Face],
                       assignment: Optional[Dict[Face, Face]] = None) -> HomomorphismCheck:
    """
    Decide whether f is a homomorphism and produce orientations witnessing it.

    Args:
        source: Complex X
        target: Complex X' of the same dimension
        f: Map from X_{k-1} into X'_{k-1}
        assignment: Optional H -> H' map; must agree with the one f induces

    Returns:
        HomomorphismCheck: valid flag, failure reason or witness

    Raises:
        ComplexError: If the maps are malformed
    """
    if source.k != target.k:
        raise ComplexError(f"Dimensions differ: {source.k} and {target.k}")
    f = {make_face(k): make_face(v) for k, v in f.items()}
    for face in source.faces(source.k - 1):
        if face not in f:
            raise ComplexError(f"f is undefined on {list(face)}")
        if not target.has_face(f[face]) or len(f[face]) != source.k:
            raise ComplexError(f"f({list(face)}) = {list(f[face])} is not a ({target.k - 1})-face of the target")

    derived, reason = induced_assignment(source, target, f)
    if reason:
        return HomomorphismCheck(False, reason)
    if assignment is not None:
        given = {make_face(k): make_face(v) for k, v in assignment.items()}
        if given != derived:
            return HomomorphismCheck(False, "assignment disagrees with the one induced by f")

    variables = _Variables()
    system = Gf2System()
    for face, image in derived.items():
        for facet in combinations(face, source.k):
            mask, rhs = _incidence_equation(variables, face, facet, image, f[facet])
            if not system.add(mask, rhs):
                return HomomorphismCheck(False, "no orientations satisfy the incidence condition")

    return HomomorphismCheck(True, "", Homomorphism(f, derived, _orientation(variables, system)))


def _orientation(variables: _Variables, system: Gf2System) -> Dict[Tuple[str, Face], int]:
    solution = system.solve()
    return {key: -1 if solution.get(position, 0) else 1 for key, position in variables.bits.items()}


def coloring_homomorphism(source: Complex, coloring: Tuple[int, ...]) -> Dict[Face, Face]:
    """Lift a proper coloring of X_1 to a map X_{k-1} -> (k-1)-faces of K_l^k."""
    f = {}
    for face in source.faces(source.k - 1):
        image = make_face({coloring[v] for v in face})
        if len(image) != len(face):
            raise PreconditionError(f"coloring is not proper on {list(face)}")
        f[face] = image
    return f


@dataclass
class ChromaticResult:
    """chi_k with the homomorphism realizing it."""

    value: int
    target_size: int
    homomorphism: Optional[Homomorphism]
    nodes: int = 0
    from_coloring: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return {
            "value": self.value,
            "nodes": self.nodes,
            "from_coloring": self.from_coloring,
            "homomorphism": self.homomorphism.to_dict() if self.homomorphism else None,
        }


class ChromaticSearch:
    """Exact chi_k search with a node budget."""

    def __init__(self, config: Dict[str, Any]):
        """
        Initialize the search.

        Args:
            config (Dict[str, Any]): The `combinatorics` configuration section
        """
        self.max_nodes = int(config.get("max_nodes", 2000000))

    def find_homomorphism(self, source: Complex, colors: int) -> Tuple[Optional[Homomorphism], int]:
        """
        Search for a homomorphism X -> K_colors^k.

        (k-1)-faces are assigned in order of descending degree. A new target
        vertex may only be the smallest unused one, and the orientation
        system grows with every k-face whose image is determined.

        Returns:
            tuple: (homomorphism or None, nodes visited)

        Raises:
            SearchBudgetExceeded: When more than max_nodes nodes are visited
        """
        k = source.k
        target = complete_complex(colors, k)
        order = sorted(source.faces(k - 1), key=lambda face: (-source.degree(face), face))
        cofaces: Dict[Face, List[Face]] = {face: [] for face in order}
        for face in source.k_faces:
            for facet in combinations(face, k):
                cofaces[facet].append(face)

        variables = _Variables()
        f: Dict[Face, Face] = {}
        nodes = [0]

        def candidates(used: int):
            for image in combinations(range(colors), k):
                fresh = [v for v in image if v >= used]
                if fresh == list(range(used, used + len(fresh))):
                    yield image, used + len(fresh)

        def extend(position: int, used: int, system: Gf2System) -> Optional[Gf2System]:
            nodes[0] += 1
            if nodes[0] > self.max_nodes:
                raise SearchBudgetExceeded(
                    f"chi_k search exceeded {self.max_nodes} nodes at {colors} colors", nodes=nodes[0]
                )
            if position == len(order):
                return system
            face = order[position]
            for image, now_used in candidates(used):
                f[face] = image
                trial = self._propagate(source, face, cofaces[face], f, variables, system)
                if trial is not None:
                    result = extend(position + 1, now_used, trial)
                    if result is not None:
                        return result
                del f[face]
            return None

        system = extend(0, 0, Gf2System())
        if system is None:
            return None, nodes[0]
        assignment, _ = induced_assignment(source, target, f)
        return Homomorphism(dict(f), assignment, _orientation(variables, system)), nodes[0]

    @staticmethod
    def _propagate(source: Complex, face: Face, cofaces: List[Face], f: Dict[Face, Face],
                   variables: _Variables, system: Gf2System) -> Optional[Gf2System]:
        """Check condition (1) locally and add the incidence equations it fixes."""
        k = source.k
        trial = None
        for coface in cofaces:
            assigned = [facet for facet in combinations(coface, k) if facet in f]
            images = [f[facet] for facet in assigned]
            if len(set(images)) != len(images):
                return None
            image = make_face(set().union(*images))
            if len(image) > k + 1:
                return None
            if len(image) < k + 1:
                continue
            before = make_face(set().union(*(f[x] for x in assigned if x != face))) if len(assigned) > 1 else ()
            pending = assigned if len(before) < k + 1 else [face]
            if trial is None:
                trial = system.copy()
            for facet in pending:
                mask, rhs = _incidence_equation(variables, coface, facet, image, f[facet])
                if not trial.add(mask, rhs):
                    return None
        return trial if trial is not None else system

    def chi_k(self, complex_: Complex) -> ChromaticResult:
        """
        The least l with a homomorphism X -> K_l^k.

        Candidates l = k+1, ..., chi(X_1)-1 are searched; when none works the
        proper coloring of X_1 gives chi_k(X) = chi(X_1). The empty complex
        maps to K_k^k, which has no k-faces.

        Returns:
            ChromaticResult: Value, witness homomorphism and search effort
        """
        k = complex_.k
        if k < 1:
            raise PreconditionError("chi_k needs k >= 1")
        if complex_.is_empty():
            return ChromaticResult(k, k, Homomorphism({}, {}), 0, False)

        skeleton_colors, coloring = chi_skeleton(complex_)
        total_nodes = 0
        for colors in range(k + 1, skeleton_colors):
            logger.info(f"Searching for a homomorphism into K_{colors}^{k}")
            homomorphism, nodes = self.find_homomorphism(complex_, colors)
            total_nodes += nodes
            if homomorphism is not None:
                return ChromaticResult(colors, colors, homomorphism, total_nodes, False)

        target = complete_complex(skeleton_colors, k)
        check = check_homomorphism(complex_, target, coloring_homomorphism(complex_, coloring))
        if not check.valid:
            logger.error(f"Coloring homomorphism failed its check: {check.reason}")
        return ChromaticResult(skeleton_colors, skeleton_colors, check.witness, total_nodes, True)


def component_chromatic_bound(complex_: Complex) -> int:
    """
    max over connected components C of chi(C_1), an upper bound on chi_k(X).

    The empty complex gets k.
    """
    components = complex_.connected_components()
    if not components:
        return complex_.k
    return max(chi_skeleton(complex_.subcomplex(component))[0] for component in components)


def regular_eigenvalue_check(complex_: Complex, chi_k_value: int, tol: float = 1e-6) -> bool:
    """
    If chi_k(X) = k+1 for a d-regular X then lambda_max(L_up_{k-1}) = (k+1)d.

    Args:
        complex_: A complex whose (k-1)-faces all have degree d
        chi_k_value: chi_k(X)

    Returns:
        bool: True when the implication holds (vacuously if chi_k != k+1)

    Raises:
        PreconditionError: If X is not regular
    """
    faces = complex_.faces(complex_.k - 1)
    degrees = {complex_.degree(face) for face in faces}
    if len(degrees) != 1:
        raise PreconditionError(f"complex is not regular (degrees {sorted(degrees)})")
    if chi_k_value != complex_.k + 1:
        return True
    d = degrees.pop()
    top = lambda_max(up_laplacian(complex_, complex_.k - 1))
    return abs(top - (complex_.k + 1) * d) <= tol
