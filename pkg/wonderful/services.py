"""
Wonderful Compactification Service

Tangent calculus of the wonderful compactification at points of the torus
closure Z ≅ A^l with coordinates z_i = 1/α_i(t). Everything is written in the
intrinsic dA basis, so no projective embedding is needed.

Basis ordering (fixed, used by every matrix and by the JSON output):
    Lie algebra g:   x_α (α ∈ Φ⁺ in root-system order), y_α (same order), h_1..h_l
    tangent space:   dA(x_α), dA(y_α), dA(e_1)..dA(e_l)
A TangentMap matrix has one column per element of g and one row per tangent
basis vector. Transposes use the dual bases in the same order.
"""

import itertools
import logging
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import ImmutableMatrix, Matrix, Rational
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from core.conf import hecke_setting
from core.exceptions import DegeneratePairing, DimensionMismatch, InconsistentRoutes
from rootsys.services import Coweight, RootSystem, build_root_system, pairing
from weyl.services import WeylElement, weyl_group

logger = logging.getLogger(__name__)

LEFT = 'left'
RIGHT = 'right'


@dataclass(frozen=True)
class TorusPoint:
    z: Tuple[Rational, ...]

    def __post_init__(self):
        object.__setattr__(self, 'z', tuple(Rational(x) for x in self.z))

    @property
    def in_open_torus(self) -> bool:
        return all(x != 0 for x in self.z)


@dataclass(frozen=True)
class TangentMap:
    matrix: ImmutableMatrix
    side: str
    twist: Optional[WeylElement]
    row_labels: Tuple[str, ...]
    col_labels: Tuple[str, ...]


@dataclass(frozen=True)
class KillingData:
    toral_gram: ImmutableMatrix
    root_constants: Dict[Tuple[int, ...], Rational]

    def c(self, root: Sequence[int]) -> Rational:
        return 1 / self.root_constants[tuple(root)]


@dataclass(frozen=True)
class LRCheck:
    holds: bool
    witness: Optional[Tuple[int, int, Rational, Rational]] = None


def _point(rs: RootSystem, z) -> TorusPoint:
    point = z if isinstance(z, TorusPoint) else TorusPoint(tuple(z))
    if len(point.z) != rs.rank:
        raise DimensionMismatch(f'{rs.label} torus points have {rs.rank} coordinates, got {len(point.z)}')
    return point


def monomial(point: TorusPoint, exponents: Sequence[int]) -> Rational:
    value = Rational(1)
    for z, e in zip(point.z, exponents):
        value *= z ** int(e)
    return value


def monomial_exponents(rs: RootSystem, root: Sequence[int], twist: Optional[WeylElement] = None) -> Tuple[int, ...]:
    """(<λ_i∨, ν⁻¹α>)_i; for ν = identity these are the simple-root coefficients of α."""
    if twist is not None:
        root = weyl_group(rs).act(twist.inverse(), root)
    return tuple(int(c) for c in rs.root_coordinates(root))


def _labels(rs: RootSystem, roots: Sequence[Tuple[int, ...]], prefix: str = '') -> Tuple[Tuple[str, ...], Tuple[str, ...]]:
    cols = [f'x{list(r)}' for r in roots] + [f'y{list(r)}' for r in roots] + [f'h{i}' for i in range(1, rs.rank + 1)]
    rows = [f'dA{prefix}(x{list(r)})' for r in roots] + [f'dA{prefix}(y{list(r)})' for r in roots] + \
        [f'dA{prefix}(e{j})' for j in range(1, rs.rank + 1)]
    return tuple(rows), tuple(cols)


def infinitesimal_action(rs: RootSystem, z, side: str = LEFT) -> TangentMap:
    """
    dL / dR at z in the dA basis

    dL(x_α) = −dA(x_α)        dL(y_α) = z^α dA(y_α)
    dR(x_α) = −z^α dA(x_α)    dR(y_α) = dA(y_α)
    dL(h_i) = dR(h_i) = −Σ_j a_ij z_j dA(e_j)
    with z^α = Π z_i^{<λ_i∨, α>}.
    """
    point = _point(rs, z)
    p, l = len(rs.positive_roots), rs.rank
    matrix = Matrix.zeros(2 * p + l, 2 * p + l)
    for k, root in enumerate(rs.positive_roots):
        m = monomial(point, monomial_exponents(rs, root))
        if side == LEFT:
            matrix[k, k] = -1
            matrix[p + k, p + k] = m
        else:
            matrix[k, k] = -m
            matrix[p + k, p + k] = 1
    for i in range(l):
        for j in range(l):
            matrix[2 * p + j, 2 * p + i] = -rs.cartan[i][j] * point.z[j]
    rows, cols = _labels(rs, rs.positive_roots)
    return TangentMap(ImmutableMatrix(matrix), side, None, rows, cols)


def infinitesimal_transpose(rs: RootSystem, z, side: str = LEFT) -> TangentMap:
    """
    Dual map from T* to g*, written from the dual formulas

    dLᵗ(dA(x_α)*) = −x_α*     dLᵗ(dA(y_α)*) = z^α y_α*
    dRᵗ(dA(x_α)*) = −z^α x_α*  dRᵗ(dA(y_α)*) = y_α*
    dLᵗ(dA(e_i)*) = dRᵗ(dA(e_i)*) = −z_i Σ_j a_ji h_j*
    """
    point = _point(rs, z)
    p, l = len(rs.positive_roots), rs.rank
    matrix = Matrix.zeros(2 * p + l, 2 * p + l)
    for k, root in enumerate(rs.positive_roots):
        m = monomial(point, monomial_exponents(rs, root))
        matrix[k, k] = -1 if side == LEFT else -m
        matrix[p + k, p + k] = m if side == LEFT else 1
    for i in range(l):
        for j in range(l):
            matrix[2 * p + j, 2 * p + i] = -point.z[i] * rs.cartan[j][i]
    rows, cols = _labels(rs, rs.positive_roots)
    dual_rows = tuple(f'{c}*' for c in cols)
    dual_cols = tuple(f'{r}*' for r in rows)
    return TangentMap(ImmutableMatrix(matrix), side, None, dual_rows, dual_cols)


def root_constant(rs: RootSystem, root: Sequence[int], h: Coweight) -> Rational:
    """k_α read off one toral element h: κ(α∨, h) / α(h)."""
    alpha_h = pairing(rs, h, root)
    if alpha_h == 0:
        raise DegeneratePairing(f'{h} is orthogonal to {list(root)}')
    h_alpha = rs.coroot(root)
    return sum(pairing(rs, h_alpha, beta) * pairing(rs, h, beta) for beta in rs.roots) / alpha_h


@lru_cache(maxsize=None)
def killing_data(rs: RootSystem) -> KillingData:
    """
    Toral Gram matrix and the constants k_α = κ(x_α, y_α)

    κ(h, h') = Σ_{β∈Φ} <h, β><h', β>; with [x_α, y_α] = α∨,
    κ(α∨, h) = α(h)·k_α for every h, checked on several h.
    """
    coroots = [rs.simple_coroot(i) for i in range(1, rs.rank + 1)]
    gram = Matrix(rs.rank, rs.rank, lambda i, j: sum(
        pairing(rs, coroots[i], beta) * pairing(rs, coroots[j], beta) for beta in rs.roots))
    if not gram.is_positive_definite:
        raise DegeneratePairing(f'toral Killing form of {rs.label} is not positive definite')

    samples = coroots + [rs.fundamental_coweight(i) for i in range(1, rs.rank + 1)]
    samples.append(sum(samples[rs.rank:], rs.zero_coweight()))
    constants = {}
    for root in rs.positive_roots:
        values = {root_constant(rs, root, h) for h in samples if pairing(rs, h, root) != 0}
        if not values:
            raise DegeneratePairing(f'no sample h separates root {root}')
        if len(values) != 1:
            logger.error(f'{rs.label}: k_α depends on the choice of h for {root}: {values}')
            raise InconsistentRoutes(f'k_α for {root} depends on the choice of h')
        constants[root] = values.pop()
    return KillingData(ImmutableMatrix(gram), constants)


def kappa_tilde(rs: RootSystem, data: Optional[KillingData] = None) -> ImmutableMatrix:
    """κ̃: g* → g; x_α* ↦ c_α y_α, y_α* ↦ c_α x_α, h_i* ↦ Σ_j (K⁻¹)_ji h_j."""
    data = data or killing_data(rs)
    p, l = len(rs.positive_roots), rs.rank
    matrix = Matrix.zeros(2 * p + l, 2 * p + l)
    for k, root in enumerate(rs.positive_roots):
        matrix[p + k, k] = data.c(root)
        matrix[k, p + k] = data.c(root)
    inverse = data.toral_gram.inv()
    for i in range(l):
        for j in range(l):
            matrix[2 * p + j, 2 * p + i] = inverse[j, i]
    return ImmutableMatrix(matrix)


def _sparse(matrix) -> DomainMatrix:
    return DomainMatrix.from_Matrix(Matrix(matrix)).convert_to(QQ).to_sparse()


def check_lr_transpose(rs: RootSystem, z, data: Optional[KillingData] = None) -> LRCheck:
    """dL κ̃ dLᵗ = dR κ̃ dRᵗ at z; on failure the first differing entry in row-major order."""
    kappa = _sparse(kappa_tilde(rs, data))
    sides = []
    for side in (LEFT, RIGHT):
        action = _sparse(infinitesimal_action(rs, z, side).matrix)
        transpose = _sparse(infinitesimal_transpose(rs, z, side).matrix)
        sides.append(action * kappa * transpose)
    if sides[0] == sides[1]:
        return LRCheck(True)
    left, right = (product.to_Matrix() for product in sides)
    for r in range(left.rows):
        for c in range(left.cols):
            if left[r, c] != right[r, c]:
                return LRCheck(False, (r, c, left[r, c], right[r, c]))
    return LRCheck(True)


def twisted_action(rs: RootSystem, z, twist: WeylElement) -> TangentMap:
    """
    dL at ν·z in the A^ν chart

    Columns x_α, y_α run over α = ν·β for β ∈ Φ⁺ in root-system order, rows over
    dA^ν(Ad w⁻¹ x_α), dA^ν(Ad w⁻¹ y_α), dA^ν(e_j):
        dL(x_α) = −dA^ν(Ad w⁻¹ x_α)
        dL(y_α) = Π z_i^{<λ_i∨, ν⁻¹α>} dA^ν(Ad w⁻¹ y_α)
        dL(h_i) = −Σ_j <ν⁻¹α_i∨, α_j> z_j dA^ν(e_j)
    """
    point = _point(rs, z)
    group = weyl_group(rs)
    p, l = len(rs.positive_roots), rs.rank
    twisted_roots = [group.act(twist, beta) for beta in rs.positive_roots]
    matrix = Matrix.zeros(2 * p + l, 2 * p + l)
    for k, root in enumerate(twisted_roots):
        matrix[k, k] = -1
        matrix[p + k, p + k] = monomial(point, monomial_exponents(rs, root, twist))
    inverse = twist.inverse()
    for i in range(1, l + 1):
        moved = group.act_on_coweight(inverse, rs.simple_coroot(i))
        for j in range(l):
            matrix[2 * p + j, 2 * p + i - 1] = -moved.coeffs[j] * point.z[j]
    rows, cols = _labels(rs, twisted_roots, prefix='^ν')
    return TangentMap(ImmutableMatrix(matrix), LEFT, twist, rows, cols)


def inversion_on_torus(rs: RootSystem, z) -> TorusPoint:
    """ι restricted to torus coordinates: z ↦ (z_ω(1), …, z_ω(l))."""
    point = _point(rs, z)
    _, omega = weyl_group(rs).longest_element_involution()
    return TorusPoint(tuple(point.z[w - 1] for w in omega))


def boundary_points(rs: RootSystem) -> List[TorusPoint]:
    return [TorusPoint(bits) for bits in itertools.product((0, 1), repeat=rs.rank)]


def random_points(rs: RootSystem, count: int, seed: int) -> List[TorusPoint]:
    rng = random.Random(seed)
    points = []
    for _ in range(count):
        points.append(TorusPoint(tuple(Rational(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(rs.rank))))
    return points


def degeneration_rank(rs: RootSystem, z) -> Tuple[int, int]:
    """(rank of dL at z, |Φ⁺| + #{α : z^α ≠ 0} + #{j : z_j ≠ 0})."""
    point = _point(rs, z)
    computed = infinitesimal_action(rs, point, LEFT).matrix.rank()
    surviving = sum(1 for root in rs.positive_roots if monomial(point, monomial_exponents(rs, root)) != 0)
    expected = len(rs.positive_roots) + surviving + sum(1 for x in point.z if x != 0)
    return computed, expected


def _sweep_one(type_label: str, rank: int, z: Tuple[Rational, ...]) -> LRCheck:
    return check_lr_transpose(build_root_system(type_label, rank), z)


def lr_sweep(rs: RootSystem, points: Sequence[TorusPoint], workers: Optional[int] = None) -> List[LRCheck]:
    """check_lr_transpose at every point; results keep the order of points."""
    workers = workers or hecke_setting('WORKERS')
    if workers > 1 and len(points) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_one, itertools.repeat(rs.type_label), itertools.repeat(rs.rank),
                                    [point.z for point in points]))
    else:
        data = killing_data(rs)
        results = [check_lr_transpose(rs, point, data) for point in points]
    failures = sum(1 for r in results if not r.holds)
    logger.info(f'{rs.label}: lr-transpose sweep over {len(points)} points, {failures} failures')
    return results
