"""
Root System Service

Builds root systems of types A, B, C, D and G2 in their standard Euclidean
realizations and derives the lattice data the other apps rely on: Cartan
matrix, fundamental coweights, rho, highest roots, the fundamental group
Λ∨/Λr∨ and the kernel coweights of simple modifications.

Conventions:
    a_ij = <α_i∨, α_j> (Kac convention).
    Coweights are stored in the fundamental coweight basis, so <λ∨, α_j> is
    the j-th coefficient and <λ∨, α> = Σ_j c_j·(coefficient of α_j in α).
    Only adjoint groups are modeled, so Y(T) = Λ∨.
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from sympy import Matrix, Rational, ilcm, igcd
from sympy.polys.domains import ZZ
from sympy.polys.matrices import DM
from sympy.polys.matrices.normalforms import smith_normal_decomp

from core.exceptions import (
    DimensionMismatch,
    IndexOutOfRange,
    InvalidRank,
    NonIntegralCoweight,
    UnsupportedType,
)

logger = logging.getLogger(__name__)

SUPPORTED_TYPES = ('A', 'B', 'C', 'D', 'G2')
MINIMUM_RANK = {'A': 1, 'B': 2, 'C': 2, 'D': 3, 'G2': 2}

Vector = Tuple[int, ...]
SignedPermutation = Tuple[int, ...]


def apply_signed_permutation(perm: SignedPermutation, vector: Sequence) -> tuple:
    """perm[i] = ±j means e_(i+1) ↦ ±e_j."""
    image = [0] * len(vector)
    for i, target in enumerate(perm):
        if target > 0:
            image[target - 1] += vector[i]
        else:
            image[-target - 1] -= vector[i]
    return tuple(image)


def _unit(n: int, i: int, scale: int = 1) -> Vector:
    return tuple(scale if k == i else 0 for k in range(n))


def _swap(n: int, i: int) -> SignedPermutation:
    perm = list(range(1, n + 1))
    perm[i], perm[i + 1] = perm[i + 1], perm[i]
    return tuple(perm)


def _realization(type_label: str, rank: int) -> Tuple[int, List[Vector], List[SignedPermutation]]:
    """Ambient dimension, simple roots and simple reflections (as signed permutations)."""
    l = rank
    if type_label == 'G2':
        simple_roots = [(1, -1, 0), (-2, 1, 1)]
        # On the zero-sum plane s_2 agrees with minus the swap of e_2, e_3
        reflections = [(2, 1, 3), (-1, -3, -2)]
        return 3, simple_roots, reflections

    n = l + 1 if type_label == 'A' else l
    simple_roots = []
    reflections = []
    for i in range(l - 1):
        simple_roots.append(tuple(a - b for a, b in zip(_unit(n, i), _unit(n, i + 1))))
        reflections.append(_swap(n, i))

    last = list(range(1, n + 1))
    if type_label == 'A':
        simple_roots.append(tuple(a - b for a, b in zip(_unit(n, l - 1), _unit(n, l))))
        reflections.append(_swap(n, l - 1))
        return n, simple_roots, reflections
    if type_label == 'B':
        simple_roots.append(_unit(n, l - 1))
        last[l - 1] = -l
    elif type_label == 'C':
        simple_roots.append(_unit(n, l - 1, 2))
        last[l - 1] = -l
    else:
        simple_roots.append(tuple(a + b for a, b in zip(_unit(n, l - 2), _unit(n, l - 1))))
        last[l - 2] = -l
        last[l - 1] = -(l - 1)
    reflections.append(tuple(last))
    return n, simple_roots, reflections


def _dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


@dataclass(frozen=True)
class Coweight:
    """Element of t in the fundamental coweight basis {λ_1∨, …, λ_l∨}."""

    label: str
    coeffs: Tuple[Rational, ...]

    def __post_init__(self):
        object.__setattr__(self, 'coeffs', tuple(Rational(c) for c in self.coeffs))

    @property
    def rank(self) -> int:
        return len(self.coeffs)

    def _check(self, other: 'Coweight'):
        if self.label != other.label or self.rank != other.rank:
            raise DimensionMismatch(f'coweights of {self.label} and {other.label} cannot be combined')

    def __add__(self, other: 'Coweight') -> 'Coweight':
        self._check(other)
        return Coweight(self.label, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: 'Coweight') -> 'Coweight':
        self._check(other)
        return Coweight(self.label, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> 'Coweight':
        return Coweight(self.label, tuple(-a for a in self.coeffs))

    def scale(self, factor) -> 'Coweight':
        factor = Rational(factor)
        return Coweight(self.label, tuple(factor * a for a in self.coeffs))

    def is_integral(self) -> bool:
        return all(c.is_integer for c in self.coeffs)

    def is_dominant(self) -> bool:
        return all(c >= 0 for c in self.coeffs)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def integer_coeffs(self) -> Tuple[int, ...]:
        if not self.is_integral():
            raise NonIntegralCoweight(f'{self} is not in the coweight lattice')
        return tuple(int(c) for c in self.coeffs)

    def __str__(self):
        parts = ', '.join(str(c) for c in self.coeffs)
        return f'[{parts}]'


@dataclass(frozen=True)
class FundamentalGroupElement:
    """Class in Λ∨/Λr∨ ≅ ⊕ Z/d_k written as residues modulo the invariant factors > 1."""

    class_vector: Tuple[int, ...]
    group_structure: Tuple[int, ...]

    def __add__(self, other: 'FundamentalGroupElement') -> 'FundamentalGroupElement':
        if self.group_structure != other.group_structure:
            raise DimensionMismatch('classes live in different fundamental groups')
        return FundamentalGroupElement(
            tuple((a + b) % d for a, b, d in zip(self.class_vector, other.class_vector, self.group_structure)),
            self.group_structure,
        )

    def times(self, count: int) -> 'FundamentalGroupElement':
        return FundamentalGroupElement(
            tuple((count * a) % d for a, d in zip(self.class_vector, self.group_structure)),
            self.group_structure,
        )

    @property
    def is_identity(self) -> bool:
        return all(a == 0 for a in self.class_vector)

    @property
    def order(self) -> int:
        result = 1
        for a, d in zip(self.class_vector, self.group_structure):
            result = ilcm(result, d // igcd(a, d))
        return int(result)

    @property
    def group_order(self) -> int:
        total = 1
        for d in self.group_structure:
            total *= d
        return total

    def describe_group(self) -> str:
        if not self.group_structure:
            return '1'
        return ' x '.join(f'Z/{d}' for d in self.group_structure)


@dataclass(frozen=True, eq=False)
class RootSystem:
    """Immutable root data; instances are shared through build_root_system."""

    type_label: str
    rank: int
    ambient_dim: int
    simple_roots: Tuple[Vector, ...]
    simple_reflections: Tuple[SignedPermutation, ...]
    roots: Tuple[Vector, ...]
    positive_roots: Tuple[Vector, ...]
    cartan: Tuple[Tuple[int, ...], ...]
    inverse_cartan: Tuple[Tuple[Rational, ...], ...]
    components: Tuple[Tuple[int, ...], ...]
    highest_roots: Tuple[Vector, ...]
    rho: Tuple[Rational, ...]
    _coordinates: Dict[Vector, Tuple[int, ...]] = field(repr=False)
    _projection: Matrix = field(repr=False)

    @property
    def label(self) -> str:
        return 'G2' if self.type_label == 'G2' else f'{self.type_label}{self.rank}'

    @property
    def dim_g(self) -> int:
        return len(self.roots) + self.rank

    @property
    def positive_root_set(self) -> frozenset:
        return frozenset(self.positive_roots)

    def is_root(self, vector: Sequence) -> bool:
        return tuple(vector) in self._coordinates

    def is_positive(self, root: Vector) -> bool:
        return all(c >= 0 for c in self.root_coordinates(root))

    def root_coordinates(self, vector: Sequence) -> tuple:
        """Coefficients of a root (or any vector in the span of Φ) in the simple roots."""
        key = tuple(vector)
        if key in self._coordinates:
            return self._coordinates[key]
        if len(key) != self.ambient_dim:
            raise DimensionMismatch(f'{self.label} vectors have {self.ambient_dim} coordinates, got {len(key)}')
        coords = Matrix([list(key)]) * self._projection
        if Matrix([list(coords)]) * Matrix(self.simple_roots) != Matrix([list(key)]):
            raise DimensionMismatch(f'{key} is not in the span of the roots of {self.label}')
        return tuple(Rational(c) for c in coords)

    def height(self, root: Vector) -> int:
        return sum(self.root_coordinates(root))

    def inner(self, u: Sequence, v: Sequence):
        return _dot(u, v)

    def norm(self, root: Sequence):
        return _dot(root, root)

    def simple_root(self, i: int) -> Vector:
        self.check_index(i)
        return self.simple_roots[i - 1]

    def check_index(self, i: int):
        if not 1 <= i <= self.rank:
            raise IndexOutOfRange(f'index {i} outside 1..{self.rank} for {self.label}')

    def coweight(self, coeffs: Iterable) -> Coweight:
        coeffs = tuple(coeffs)
        if len(coeffs) != self.rank:
            raise DimensionMismatch(f'{self.label} coweights have {self.rank} coefficients, got {len(coeffs)}')
        return Coweight(self.label, coeffs)

    def zero_coweight(self) -> Coweight:
        return self.coweight((0,) * self.rank)

    def fundamental_coweight(self, i: int) -> Coweight:
        self.check_index(i)
        return self.coweight(1 if k == i - 1 else 0 for k in range(self.rank))

    def coroot(self, root: Sequence) -> Coweight:
        """α∨ = 2α/(α,α) written in the fundamental coweight basis."""
        root = tuple(root)
        norm = _dot(root, root)
        return self.coweight(Rational(2 * _dot(root, simple), norm) for simple in self.simple_roots)

    def simple_coroot(self, i: int) -> Coweight:
        return self.coroot(self.simple_root(i))

    def length_classes(self) -> Dict[str, Tuple[Vector, ...]]:
        """Roots split by length; simply-laced systems only have 'long' roots."""
        norms = sorted({self.norm(root) for root in self.roots})
        if len(norms) == 1:
            return {'short': tuple(), 'long': self.roots}
        return {
            'short': tuple(r for r in self.roots if self.norm(r) == norms[0]),
            'long': tuple(r for r in self.roots if self.norm(r) == norms[-1]),
        }

    def is_long(self, root: Vector) -> bool:
        return tuple(root) in set(self.length_classes()['long'])

    def component_of(self, root: Vector) -> int:
        support = {k for k, c in enumerate(self.root_coordinates(root)) if c != 0}
        for j, component in enumerate(self.components):
            if support <= set(component):
                return j
        raise DimensionMismatch(f'{root} is not supported on a single component')

    def fundamental_weights(self) -> Tuple[Tuple[Rational, ...], ...]:
        """λ_i in the ambient space, characterized by <α_j∨, λ_i> = δ_ij."""
        gram = Matrix([[_dot(a, b) for b in self.simple_roots] for a in self.simple_roots])
        half_norms = Matrix.diag(*[Rational(_dot(a, a), 2) for a in self.simple_roots])
        combination = half_norms * gram.inv()
        weights = combination * Matrix(self.simple_roots)
        return tuple(tuple(Rational(x) for x in weights.row(i)) for i in range(self.rank))


def _components(cartan: Sequence[Sequence[int]]) -> Tuple[Tuple[int, ...], ...]:
    rank = len(cartan)
    unseen = set(range(rank))
    components = []
    while unseen:
        start = min(unseen)
        stack = [start]
        block = {start}
        while stack:
            i = stack.pop()
            for j in range(rank):
                if j not in block and (cartan[i][j] != 0 or cartan[j][i] != 0):
                    block.add(j)
                    stack.append(j)
        unseen -= block
        components.append(tuple(sorted(block)))
    return tuple(sorted(components))


def _normalize_type(type_label: str) -> str:
    label = str(type_label).strip().upper()
    if label not in SUPPORTED_TYPES:
        raise UnsupportedType(f"type '{type_label}' is not one of {', '.join(SUPPORTED_TYPES)}")
    return label


@lru_cache(maxsize=None)
def _build(type_label: str, rank: int) -> RootSystem:
    ambient_dim, simple_roots, reflections = _realization(type_label, rank)

    roots = set(simple_roots)
    frontier = list(simple_roots)
    while frontier:
        fresh = []
        for root in frontier:
            for perm in reflections:
                image = apply_signed_permutation(perm, root)
                if image not in roots:
                    roots.add(image)
                    fresh.append(image)
        frontier = fresh

    simple_matrix = Matrix(simple_roots)
    projection = simple_matrix.T * (simple_matrix * simple_matrix.T).inv()
    coordinates = {}
    for root in roots:
        coords = Matrix([list(root)]) * projection
        coordinates[root] = tuple(int(c) for c in coords)

    def order_key(root):
        coords = coordinates[root]
        return (sum(coords), tuple(-c for c in coords))

    positive = sorted((r for r in roots if all(c >= 0 for c in coordinates[r])), key=order_key)
    negative = [tuple(-x for x in r) for r in positive]
    ordered_roots = tuple(positive) + tuple(negative)

    cartan = tuple(
        tuple(int(Rational(2 * _dot(a, b), _dot(a, a))) for b in simple_roots)
        for a in simple_roots
    )
    inverse = Matrix(cartan).inv()
    inverse_cartan = tuple(tuple(Rational(x) for x in inverse.row(i)) for i in range(rank))
    components = _components(cartan)

    highest = []
    for component in components:
        candidates = [r for r in positive if {k for k, c in enumerate(coordinates[r]) if c} <= set(component)]
        top = max(candidates, key=lambda r: sum(coordinates[r]))
        highest.append(top)

    rho = tuple(Rational(sum(r[k] for r in positive), 2) for k in range(ambient_dim))

    system = RootSystem(
        type_label=type_label,
        rank=rank,
        ambient_dim=ambient_dim,
        simple_roots=tuple(simple_roots),
        simple_reflections=tuple(reflections),
        roots=ordered_roots,
        positive_roots=tuple(positive),
        cartan=cartan,
        inverse_cartan=inverse_cartan,
        components=components,
        highest_roots=tuple(highest),
        rho=rho,
        _coordinates=coordinates,
        _projection=projection,
    )
    logger.info(f'Built root system {system.label}: {len(positive)} positive roots, dim g = {system.dim_g}')
    return system


def build_root_system(type_label: str, rank: int) -> RootSystem:
    """
    Build the root system of the given type and rank

    Args:
        type_label: one of A, B, C, D, G2 (case insensitive)
        rank: rank l (A: l ≥ 1; B, C: l ≥ 2; D: l ≥ 3; G2: l = 2)

    Returns:
        A shared, immutable RootSystem
    """
    label = _normalize_type(type_label)
    try:
        rank = int(rank)
    except (TypeError, ValueError) as e:
        raise InvalidRank(f'rank {rank!r} is not an integer') from e
    if rank < MINIMUM_RANK[label] or (label == 'G2' and rank != 2):
        raise InvalidRank(f'rank {rank} is not valid for type {label}')
    return _build(label, rank)


def pairing(rs: RootSystem, coweight: Coweight, vector: Sequence) -> Rational:
    """<λ∨, v> for a root or weight v given in ambient coordinates."""
    if coweight.label != rs.label or coweight.rank != rs.rank:
        raise DimensionMismatch(f'coweight of {coweight.label} paired with a vector of {rs.label}')
    coords = rs.root_coordinates(vector)
    return sum((c * x for c, x in zip(coweight.coeffs, coords)), Rational(0))


def coroot_coordinates(rs: RootSystem, coweight: Coweight) -> Tuple[Rational, ...]:
    """Coordinates in the basis {α_1∨, …, α_l∨}: m with coeffs = transpose(A)·m."""
    if coweight.rank != rs.rank:
        raise DimensionMismatch(f'{rs.label} coweights have {rs.rank} coefficients')
    m = Matrix(rs.cartan).T.inv() * Matrix(coweight.coeffs)
    return tuple(Rational(x) for x in m)


def from_coroot_coordinates(rs: RootSystem, coords: Sequence) -> Coweight:
    if len(coords) != rs.rank:
        raise DimensionMismatch(f'{rs.label} needs {rs.rank} coroot coordinates')
    c = Matrix(rs.cartan).T * Matrix([Rational(x) for x in coords])
    return rs.coweight(c)


def in_coroot_lattice(rs: RootSystem, coweight: Coweight) -> bool:
    return coweight.is_integral() and all(x.is_integer for x in coroot_coordinates(rs, coweight))


@lru_cache(maxsize=None)
def _smith_data(rs: RootSystem) -> Tuple[Tuple[Tuple[int, ...], ...], Tuple[int, ...], Tuple[int, ...]]:
    transpose = [list(row) for row in zip(*rs.cartan)]
    smf, left, _ = smith_normal_decomp(DM(transpose, ZZ))
    diagonal = [abs(int(smf.to_Matrix()[k, k])) for k in range(rs.rank)]
    rows = tuple(tuple(int(x) for x in row) for row in left.to_Matrix().tolist())
    kept = tuple(k for k, d in enumerate(diagonal) if d != 1)
    return rows, tuple(diagonal), kept


def fundamental_group_class(rs: RootSystem, coweight: Coweight) -> FundamentalGroupElement:
    """
    Class of an integral coweight in π_1 = Λ∨/Λr∨

    With U·transpose(A)·V = diag(d_1, …, d_l) the map c ↦ (U·c mod d_k) is an
    isomorphism onto ⊕ Z/d_k; factors d_k = 1 are dropped.
    """
    coeffs = coweight.integer_coeffs()
    if len(coeffs) != rs.rank:
        raise DimensionMismatch(f'{rs.label} coweights have {rs.rank} coefficients')
    rows, diagonal, kept = _smith_data(rs)
    residues = []
    for k in kept:
        value = sum(u * c for u, c in zip(rows[k], coeffs))
        residues.append(value % diagonal[k])
    return FundamentalGroupElement(tuple(residues), tuple(diagonal[k] for k in kept))


def identity_class(rs: RootSystem) -> FundamentalGroupElement:
    return fundamental_group_class(rs, rs.zero_coweight())


def kernel_coweight(rs: RootSystem, i: int, convention: str = 'kac') -> Coweight:
    """
    ξ_i = Σ_k a^{ik} α_k∨

    'kac' reads a^{ik} as row i of A⁻¹, which is the kernel of the toral
    action at a point with z_i = 0 (ξ_i = λ_i∨). 'transposed' reads it as
    column i, the convention of tables built from the transposed Cartan matrix;
    the two agree for symmetric A.
    """
    rs.check_index(i)
    if convention == 'kac':
        coords = rs.inverse_cartan[i - 1]
    elif convention == 'transposed':
        coords = tuple(row[i - 1] for row in rs.inverse_cartan)
    else:
        raise ValueError(f"unknown convention '{convention}'")
    return from_coroot_coordinates(rs, coords)


def parameter_count(rs: RootSystem, i: int) -> int:
    """2<λ_i∨, ρ> + 1, the parameters of one simple modification."""
    return int(2 * pairing(rs, rs.fundamental_coweight(i), rs.rho)) + 1


def closed_form_parameter_count(type_label: str, rank: int, i: int) -> Optional[int]:
    label = _normalize_type(type_label)
    l = rank
    if label == 'A':
        return i * (l + 1 - i) + 1
    if label == 'B':
        return i * (2 * l - i) + 1
    if label == 'C':
        return i * (2 * l - i + 1) + 1 if i < l else l * (l + 1) // 2 + 1
    if label == 'D':
        return i * (2 * l - i - 1) + 1 if i <= l - 2 else l * (l - 1) // 2 + 1
    return None


def parameter_table(rs: RootSystem) -> List[Dict[str, object]]:
    rows = []
    for i in range(1, rs.rank + 1):
        derived = parameter_count(rs, i)
        closed = closed_form_parameter_count(rs.type_label, rs.rank, i)
        matches = closed is None or closed == derived
        if not matches:
            logger.warning(f'{rs.label}: derived parameter count {derived} for i={i} differs from closed form {closed}')
        rows.append({'index': i, 'derived': derived, 'closed_form': closed, 'matches': matches})
    return rows
