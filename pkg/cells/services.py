"""
Cell Decomposition Service

Bruhat cell combinatorics of the affine Grassmannian: the dimension
2<λ∨, ρ> of Gr^{λ∨}, its open cover by affine cells indexed by minimal coset
representatives, Poincaré polynomials, topological type bookkeeping for
multiple modifications, and deformation dimensions of cocharacters.
"""

import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

from sympy import Poly, Symbol

from affine.services import affine_weyl_group
from core.exceptions import (
    DimensionMismatch,
    InconsistentRoutes,
    InvalidCocharacter,
    NonDominant,
    ZeroCocharacter,
)
from rootsys.services import (
    Coweight,
    FundamentalGroupElement,
    RootSystem,
    fundamental_group_class,
    identity_class,
    in_coroot_lattice,
    pairing,
)
from weyl.services import WeylElement, weyl_group

logger = logging.getLogger(__name__)

q = Symbol('q')


@dataclass(frozen=True)
class Cell:
    representative: WeylElement
    dimension: int


@dataclass(frozen=True)
class CellDecomposition:
    base_coweight: Coweight
    cells: Tuple[Cell, ...]
    top_dimension: int
    poincare: Tuple[int, ...]
    in_coroot_lattice: bool
    component_class: FundamentalGroupElement
    jet_bound: int

    def poincare_polynomial(self) -> Poly:
        return Poly(sum(c * q ** d for d, c in enumerate(self.poincare)), q)


def _require_dominant_integral(coweight: Coweight):
    if not coweight.is_dominant():
        raise NonDominant(f'{coweight} is not dominant')
    coweight.integer_coeffs()


def cell_dimension(rs: RootSystem, coweight: Coweight) -> int:
    """dim Gr^{λ∨} = 2<λ∨, ρ>, cross-checked against Σ_{α>0} <λ∨, α> and ℓ(t(λ∨))."""
    _require_dominant_integral(coweight)
    doubled_rho = int(2 * pairing(rs, coweight, rs.rho))
    root_sum = int(sum(pairing(rs, coweight, root) for root in rs.positive_roots))
    routes = {'2<λ,ρ>': doubled_rho, 'Σ<λ,α>': root_sum}
    if in_coroot_lattice(rs, coweight):
        group = affine_weyl_group(rs)
        routes['ℓ(t(λ))'] = group.length(group.translation(coweight))
    if len(set(routes.values())) != 1:
        logger.error(f'{rs.label} cell dimension routes disagree for {coweight}: {routes}')
        raise InconsistentRoutes(f'cell dimension routes disagree: {routes}')
    return doubled_rho


def decompose(rs: RootSystem, coweight: Coweight) -> CellDecomposition:
    """
    Cells of Gr^{λ∨} indexed by minimal coset representatives w of W/W_λ

    Each cell has dimension |Φ_af^{w t(λ∨)}|. For λ∨ outside the coroot lattice
    the same interval rule applies; the component class is reported alongside.
    """
    _require_dominant_integral(coweight)
    group = affine_weyl_group(rs)
    translation = group.translation(coweight)
    cells = []
    for rep in weyl_group(rs).minimal_coset_reps(coweight):
        element = group.compose(group.finite(rep), translation)
        cells.append(Cell(rep, group.length(element)))

    top = max(cell.dimension for cell in cells)
    poincare = [0] * (top + 1)
    for cell in cells:
        poincare[cell.dimension] += 1

    jet_bound = max((int(pairing(rs, coweight, root)) for root in rs.roots), default=0)
    decomposition = CellDecomposition(
        base_coweight=coweight,
        cells=tuple(cells),
        top_dimension=top,
        poincare=tuple(poincare),
        in_coroot_lattice=in_coroot_lattice(rs, coweight),
        component_class=fundamental_group_class(rs, coweight),
        jet_bound=jet_bound,
    )
    logger.info(f'{rs.label}: decomposed Gr^{coweight} into {len(cells)} cells, top dimension {top}')
    return decomposition


def modification_type_sum(rs: RootSystem, types: Sequence[Tuple[Coweight, int]]) -> FundamentalGroupElement:
    """ε = ε(Q) + Σ k_i [μ_i∨] with Q trivial."""
    total = identity_class(rs)
    for coweight, count in types:
        total = total + fundamental_group_class(rs, coweight).times(int(count))
    return total


def _cocharacter(rs: RootSystem, r: Sequence[int]) -> Coweight:
    if len(r) != rs.rank:
        raise DimensionMismatch(f'{rs.label} cocharacters have {rs.rank} entries, got {len(r)}')
    if any(int(x) != x or x < 0 for x in r):
        raise InvalidCocharacter(f'{list(r)} must be non-negative integers')
    if all(x == 0 for x in r):
        raise ZeroCocharacter('the zero cocharacter has no deformations')
    return rs.coweight(r)


def deformation_sections(rs: RootSystem, r: Sequence[int]) -> List[str]:
    """Representative sections z^j dA(y_α) and z^k dA(e_i) for the cocharacter −Σ r_i λ_i∨."""
    coweight = _cocharacter(rs, r)
    sections = []
    for root in rs.positive_roots:
        for j in range(int(pairing(rs, coweight, root))):
            sections.append(f'z^{j} dA(y_{list(rs.root_coordinates(root))})')
    for i, count in enumerate(r, start=1):
        for k in range(int(count)):
            sections.append(f'z^{k} dA(e_{i})')
    return sections


def deformation_dimension(rs: RootSystem, r: Sequence[int]) -> int:
    coweight = _cocharacter(rs, r)
    dimension = int(sum(pairing(rs, coweight, root) for root in rs.positive_roots)) + int(sum(r))
    counted = len(deformation_sections(rs, r))
    if counted != dimension:
        raise InconsistentRoutes(f'deformation sections {counted} != formula {dimension}')
    return dimension
