"""
Parametrization Scheme Service

A scheme is a multiset of Weyl-twisted simple Hecke modifications: each entry
(ν, i, k) stands for k modifications of type −ν·λ_i∨ at k distinct points of a
genus g curve. This module verifies schemes against the combinatorial
conditions that make them parametrize an open set of bundles with trivial
topological type, builds the known families, searches for new schemes and
certifies obstructions.

Conditions checked by verify:
    1. N = Σ k·(2<λ_i∨, ρ> + 1) equals g·dim G
    2. deg D_α = Σ k·max(0, <λ_i∨, ν⁻¹α>) is at least g for every root
       (exactly g in strict mode)
    3. the lines through the kernel vectors ν·ξ_i contain l independent
       directions, each carrying at least g points
    4. the top type Σ k·[λ_i∨] in π_1 is reported

Point positions are not modeled; genericity is assumed.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import Matrix, Rational, ilcm, igcd

from cells.services import modification_type_sum
from core.conf import hecke_setting
from core.exceptions import (
    IndexOutOfRange,
    InvalidRank,
    OddGenus,
    RootNotInSystem,
    SchemeFormatError,
    SearchBudgetExceeded,
    UnsupportedType,
)
from rootsys.services import (
    FundamentalGroupElement,
    RootSystem,
    build_root_system,
    coroot_coordinates,
    kernel_coweight,
    pairing,
    parameter_count,
)
from weyl.services import WeylElement, weyl_group

logger = logging.getLogger(__name__)

AT_LEAST = 'at_least'
EXACT = 'exact'
DEGREE_MODES = (AT_LEAST, EXACT)

DISCLAIMER = (
    'Point positions are assumed generic: Weierstrass points and canonical divisors '
    'are not checked, so these conditions are necessary combinatorial certificates only.'
)

A3_TWISTS = ('e', '(1 3)', '(2 3)', '(1 4)', '(2 4)', '(1 4)(2 3)')
PRESET_FAMILIES = ('A3', 'Cl', 'Dl')


@dataclass(frozen=True)
class ModificationEntry:
    twist: WeylElement
    coweight_index: int
    points: int


@dataclass(frozen=True)
class ModificationScheme:
    root_system: RootSystem
    genus: int
    entries: Tuple[ModificationEntry, ...]
    notes: Tuple[str, ...] = ()

    @property
    def total_modifications(self) -> int:
        return sum(entry.points for entry in self.entries)

    @property
    def parameter_count(self) -> int:
        return sum(entry.points * parameter_count(self.root_system, entry.coweight_index) for entry in self.entries)

    @property
    def parameter_target(self) -> int:
        return self.genus * self.root_system.dim_g


@dataclass(frozen=True)
class ToralLine:
    direction: Tuple[int, ...]
    count: int
    entries: Tuple[int, ...]


@dataclass(frozen=True)
class RootDegree:
    root: Tuple[int, ...]
    degree: int
    length_class: str
    contributions: Tuple[Tuple[int, int], ...]


@dataclass(frozen=True)
class SchemeReport:
    param_count: int
    param_target: int
    param_ok: bool
    root_degrees: Tuple[RootDegree, ...]
    min_degree: int
    degree_mode: str
    degrees_ok: bool
    toral_lines: Tuple[ToralLine, ...]
    spanning: bool
    basis_ok: bool
    top_type: FundamentalGroupElement
    bookkeeping_ok: bool
    failures: Tuple[str, ...]
    notes: Tuple[str, ...] = ()
    disclaimer: str = DISCLAIMER

    @property
    def verdict(self) -> str:
        return 'PASS' if not self.failures else 'FAIL'


@dataclass(frozen=True)
class SearchOptions:
    coweight_indices: Optional[Tuple[int, ...]] = None
    twist_pool: Optional[Tuple[WeylElement, ...]] = None
    degree_mode: str = AT_LEAST
    budget: Optional[int] = None


@dataclass(frozen=True)
class Infeasible:
    kind: str
    certificate: Tuple[str, ...]
    scope: str = ''


@dataclass(frozen=True)
class SearchResult:
    scheme: Optional[ModificationScheme]
    infeasible: Optional[Infeasible]
    nodes: int = 0

    @property
    def found(self) -> bool:
        return self.scheme is not None


@dataclass(frozen=True)
class ObstructionReport:
    genus: int
    aggregates: Tuple[Tuple[int, int, int, int], ...]
    constraints: Tuple[str, ...]
    status: str
    witness: Optional[Tuple[int, ...]] = None
    enumerated: int = 0

    @property
    def feasible(self) -> bool:
        return self.status == 'FEASIBLE'


@dataclass(frozen=True)
class DeterminantWitness:
    rank: int
    determinant: Rational
    stated: Rational
    kac_determinant: Rational

    @property
    def orientation_sign(self) -> int:
        return 1 if self.determinant == self.stated else -1

    @property
    def matches_exactly(self) -> bool:
        return self.determinant == self.stated

    @property
    def matches_up_to_sign(self) -> bool:
        return abs(self.determinant) == abs(self.stated)


def make_scheme(rs: RootSystem, genus: int, entries: Sequence[ModificationEntry],
                notes: Sequence[str] = ()) -> ModificationScheme:
    if int(genus) < 1:
        raise SchemeFormatError(f'genus must be positive, got {genus}')
    for entry in entries:
        if not 1 <= entry.coweight_index <= rs.rank:
            raise IndexOutOfRange(f'coweight index {entry.coweight_index} outside 1..{rs.rank}')
        if entry.points < 1:
            raise SchemeFormatError(f'entry points must be positive, got {entry.points}')
        if entry.twist.label != rs.label:
            raise SchemeFormatError(f'twist {entry.twist} does not belong to {rs.label}')
    return ModificationScheme(rs, int(genus), tuple(entries), tuple(notes))


# degrees

def _pairing_after_twist(rs: RootSystem, entry: ModificationEntry, root: Sequence[int]) -> int:
    """<λ_i∨, ν⁻¹α>, the simple-root coefficient of ν⁻¹α at index i."""
    moved = weyl_group(rs).act(entry.twist.inverse(), root)
    return int(rs.root_coordinates(moved)[entry.coweight_index - 1])


def root_contributions(scheme: ModificationScheme, root: Sequence[int]) -> List[Tuple[int, int]]:
    """(entry position, k·max(0, <λ_i∨, ν⁻¹α>)) for the entries that contribute."""
    rs = scheme.root_system
    root = tuple(root)
    if not rs.is_root(root):
        raise RootNotInSystem(f'{list(root)} is not a root of {rs.label}')
    found = []
    for position, entry in enumerate(scheme.entries):
        multiplicity = max(0, _pairing_after_twist(rs, entry, root))
        if multiplicity:
            found.append((position, entry.points * multiplicity))
    return found


def root_degree(scheme: ModificationScheme, root: Sequence[int]) -> int:
    return sum(value for _, value in root_contributions(scheme, root))


# toral lines

def canonical_direction(coords: Sequence) -> Tuple[int, ...]:
    """Primitive integer vector on the line, first nonzero coordinate positive."""
    values = [Rational(c) for c in coords]
    denominator = 1
    for v in values:
        denominator = ilcm(denominator, v.q)
    integers = [int(v * denominator) for v in values]
    divisor = 0
    for n in integers:
        divisor = igcd(divisor, n)
    if divisor == 0:
        return tuple(integers)
    integers = [n // divisor for n in integers]
    leading = next(n for n in integers if n != 0)
    if leading < 0:
        integers = [-n for n in integers]
    return tuple(integers)


def kernel_direction(rs: RootSystem, twist: WeylElement, index: int, convention: str = 'kac') -> Tuple[Rational, ...]:
    """ν·ξ_i in coroot coordinates."""
    moved = weyl_group(rs).act_on_coweight(twist, kernel_coweight(rs, index, convention))
    return coroot_coordinates(rs, moved)


def toral_lines(scheme: ModificationScheme) -> List[ToralLine]:
    rs = scheme.root_system
    grouped: Dict[Tuple[int, ...], List[int]] = {}
    counts: Dict[Tuple[int, ...], int] = {}
    for position, entry in enumerate(scheme.entries):
        key = canonical_direction(kernel_direction(rs, entry.twist, entry.coweight_index))
        grouped.setdefault(key, []).append(position)
        counts[key] = counts.get(key, 0) + entry.points
    return [ToralLine(key, counts[key], tuple(grouped[key])) for key in grouped]


def _rank_of(directions: Sequence[Sequence[int]]) -> int:
    if not directions:
        return 0
    return Matrix([list(d) for d in directions]).rank()


# verification

def verify(scheme: ModificationScheme, degree_mode: str = AT_LEAST) -> SchemeReport:
    """
    Evaluate a scheme

    Args:
        scheme: the scheme to check
        degree_mode: 'at_least' (deg D_α ≥ g) or 'exact' (deg D_α = g)

    Returns:
        SchemeReport; the verdict is PASS exactly when the parameter count,
        root degree, spanning and toral basis conditions all hold
    """
    if degree_mode not in DEGREE_MODES:
        raise ValueError(f"degree mode must be one of {DEGREE_MODES}")
    rs = scheme.root_system
    g = scheme.genus
    classes = rs.length_classes()
    short = set(classes['short'])

    degrees = []
    for root in rs.roots:
        contributions = tuple(root_contributions(scheme, root))
        degrees.append(RootDegree(
            root=root,
            degree=sum(v for _, v in contributions),
            length_class='short' if root in short else 'long',
            contributions=contributions,
        ))
    min_degree = min(d.degree for d in degrees)
    if degree_mode == EXACT:
        degrees_ok = all(d.degree == g for d in degrees)
    else:
        degrees_ok = min_degree >= g

    lines = toral_lines(scheme)
    spanning = _rank_of([line.direction for line in lines]) == rs.rank
    basis_ok = _rank_of([line.direction for line in lines if line.count >= g]) == rs.rank

    n = scheme.parameter_count
    target = scheme.parameter_target
    param_ok = n == target
    bookkeeping_ok = sum(d.degree for d in degrees) + scheme.total_modifications == n

    top_type = modification_type_sum(
        rs, [(rs.fundamental_coweight(entry.coweight_index), entry.points) for entry in scheme.entries])

    failures = []
    if not param_ok:
        failures.append(f'parameter count {n} != {target}')
    if not degrees_ok:
        bad = [d for d in degrees if (d.degree != g if degree_mode == EXACT else d.degree < g)]
        failures.append(f'{len(bad)} root degrees violate the {degree_mode} bound {g}')
    if not spanning:
        failures.append('kernel lines do not span t')
    if not basis_ok:
        failures.append(f'no toral basis of lines carrying at least {g} points')

    report = SchemeReport(
        param_count=n,
        param_target=target,
        param_ok=param_ok,
        root_degrees=tuple(degrees),
        min_degree=min_degree,
        degree_mode=degree_mode,
        degrees_ok=degrees_ok,
        toral_lines=tuple(lines),
        spanning=spanning,
        basis_ok=basis_ok,
        top_type=top_type,
        bookkeeping_ok=bookkeeping_ok,
        failures=tuple(failures),
        notes=scheme.notes,
    )
    logger.info(f'Verified {rs.label} scheme at genus {g}: {report.verdict}')
    return report


# presets

def c_rotation(rs: RootSystem) -> WeylElement:
    """ν = (1, 0, …, 0, (1 2 ⋯ l)): e_i ↦ e_{i+1} for i < l, e_l ↦ −e_1."""
    l = rs.rank
    signs = [1] + [0] * (l - 1)
    cycle = list(range(2, l + 1)) + [1]
    return weyl_group(rs).from_signs_and_permutation(signs, cycle)


def power(w: WeylElement, exponent: int, identity: WeylElement) -> WeylElement:
    result = identity
    for _ in range(exponent):
        result = result * w
    return result


def _transposition(l: int, i: int) -> List[int]:
    perm = list(range(1, l + 1))
    perm[0], perm[i - 1] = perm[i - 1], perm[0]
    return perm


def d_twists(rs: RootSystem) -> List[WeylElement]:
    """The 2l twists of −λ_1∨: (1 i) and (1 i) composed with −1 (l even) or with ν (l odd)."""
    l = rs.rank
    group = weyl_group(rs)
    plain = [group.from_signed_permutation(_transposition(l, i)) for i in range(1, l + 1)]
    if l % 2 == 0:
        signed = [group.from_signs_and_permutation([1] * l, _transposition(l, i)) for i in range(1, l + 1)]
    else:
        nu = group.from_signs_and_permutation([1] * (l - 1) + [0], list(range(1, l + 1)))
        signed = [group.with_reduced_word(t * nu) for t in plain]
    return plain + signed


def a3_twists(rs: RootSystem) -> List[WeylElement]:
    group = weyl_group(rs)
    return [group.parse(text) for text in A3_TWISTS]


def preset(family: str, rank: int, genus: int) -> ModificationScheme:
    """
    The hand-built schemes for A3, C_l and D_l

    Args:
        family: 'A3', 'Cl' or 'Dl'
        rank: 3 for A3, l ≥ 2 for Cl, l ≥ 3 for Dl
        genus: even genus g = 2k

    Returns:
        ModificationScheme with k points on every twist class
    """
    key = {'a3': 'A3', 'cl': 'Cl', 'dl': 'Dl', 'c': 'Cl', 'd': 'Dl'}.get(str(family).strip().lower())
    if key is None:
        raise UnsupportedType(f"family '{family}' is not one of {', '.join(PRESET_FAMILIES)}")
    if int(genus) < 2 or int(genus) % 2:
        raise OddGenus(f'presets need an even genus g = 2k, got {genus}')
    k = int(genus) // 2

    if key == 'A3':
        if int(rank) != 3:
            raise InvalidRank(f'the A3 preset has rank 3, got {rank}')
        rs = build_root_system('A', 3)
        entries = [ModificationEntry(w, 2, k) for w in a3_twists(rs)]
        notes = ('identity twist inferred as the sixth twist class',)
        return make_scheme(rs, genus, entries, notes)

    if key == 'Cl':
        if int(rank) < 2:
            raise InvalidRank(f'the Cl preset needs l >= 2, got {rank}')
        rs = build_root_system('C', rank)
        group = weyl_group(rs)
        nu = c_rotation(rs)
        twists = [group.with_reduced_word(power(nu, e, group.identity())) for e in range(2 * rs.rank)]
        return make_scheme(rs, genus, [ModificationEntry(w, 1, k) for w in twists])

    if int(rank) < 3:
        raise InvalidRank(f'the Dl preset needs l >= 3, got {rank}')
    rs = build_root_system('D', rank)
    return make_scheme(rs, genus, [ModificationEntry(w, 1, k) for w in d_twists(rs)])


# witnesses

def determinant_witness(rank: int) -> DeterminantWitness:
    """det of ξ_1, ν·ξ_1, …, ν^{l−1}·ξ_1 (rows, coroot coordinates) for C_l."""
    rs = build_root_system('C', rank)
    group = weyl_group(rs)
    nu = c_rotation(rs)

    def determinant(convention: str) -> Rational:
        rows = []
        w = group.identity()
        for _ in range(rank):
            rows.append(list(kernel_direction(rs, w, 1, convention)))
            w = nu * w
        return Rational(Matrix(rows).det())

    stated = Rational((-1) ** (rank - 1)) - Rational(1, 2 ** rank)
    witness = DeterminantWitness(rank, determinant('transposed'), stated, determinant('kac'))
    if not witness.matches_exactly:
        logger.warning(f'C{rank}: kernel determinant {witness.determinant} equals the stated value '
                       f'{stated} only up to sign')
    return witness


def a3_sign_relations() -> Dict[str, bool]:
    rs = build_root_system('A', 3)
    group = weyl_group(rs)

    def image(text: str) -> Tuple[Rational, ...]:
        return kernel_direction(rs, group.parse(text), 2)

    def negated(v):
        return tuple(-x for x in v)

    return {
        '(1 3)ξ2 = −(2 4)ξ2': image('(1 3)') == negated(image('(2 4)')),
        '(2 3)ξ2 = −(1 4)ξ2': image('(2 3)') == negated(image('(1 4)')),
        '(1 4)(2 3)ξ2 = ξ2': image('(1 4)(2 3)') == image('e'),
    }


# obstruction screen

def length_aggregates(rs: RootSystem, index: int) -> Tuple[int, int]:
    """(s_i, t_i): Σ <λ_i∨, α> over short and over long positive roots."""
    coweight = rs.fundamental_coweight(index)
    classes = rs.length_classes()
    short = set(classes['short'])
    s = sum(int(pairing(rs, coweight, r)) for r in rs.positive_roots if r in short)
    t = sum(int(pairing(rs, coweight, r)) for r in rs.positive_roots if r not in short)
    return s, t


def obstruction_analysis(rs: RootSystem, genus: int, indices: Optional[Sequence[int]] = None,
                         budget: Optional[int] = None) -> ObstructionReport:
    """
    Twist-invariant screen on the counts k_i of each modification type

    Any twist permutes each length class, so per type the short and long root
    degrees total k_i·s_i and k_i·t_i whatever the twists are. Feasibility of
        Σ k_i(s_i + t_i + 1) = g·dim G,  Σ k_i s_i ≥ g|Φ_short|,
        Σ k_i t_i ≥ g|Φ_long|,           Σ k_i ≥ g·l
    over k_i ≥ 0 is decided by enumeration; every visited node is charged to
    the budget, and running out gives UNDECIDED.
    """
    g = int(genus)
    budget = budget or hecke_setting('SEARCH_BUDGET')
    indices = tuple(sorted(indices or range(1, rs.rank + 1)))
    classes = rs.length_classes()
    aggregates = []
    for i in indices:
        s, t = length_aggregates(rs, i)
        aggregates.append((i, s, t, s + t + 1))

    target = g * rs.dim_g
    short_target = g * len(classes['short'])
    long_target = g * len(classes['long'])
    toral_target = g * rs.rank
    constraints = (
        f'Σ k_i·(s_i + t_i + 1) = {target}',
        f'Σ k_i·s_i ≥ {short_target}',
        f'Σ k_i·t_i ≥ {long_target}',
        f'Σ k_i ≥ {toral_target}',
        'k_i ≥ 0',
    )

    enumerated = 0
    counts = [0] * len(aggregates)

    def search(position: int, remaining: int) -> Optional[Tuple[int, ...]]:
        nonlocal enumerated
        enumerated += 1
        if enumerated > budget:
            raise SearchBudgetExceeded(f'obstruction enumeration passed {budget} nodes')
        if position == len(aggregates) - 1:
            p = aggregates[position][3]
            if remaining % p:
                return None
            counts[position] = remaining // p
            short_total = sum(k * a[1] for k, a in zip(counts, aggregates))
            long_total = sum(k * a[2] for k, a in zip(counts, aggregates))
            if short_total >= short_target and long_total >= long_target and sum(counts) >= toral_target:
                return tuple(counts)
            return None
        p = aggregates[position][3]
        for k in range(remaining // p + 1):
            counts[position] = k
            found = search(position + 1, remaining - k * p)
            if found is not None:
                return found
        return None

    try:
        witness = search(0, target) if aggregates else None
    except SearchBudgetExceeded:
        logger.warning(f'{rs.label}: obstruction screen at genus {g} stopped after {budget} nodes')
        return ObstructionReport(g, tuple(aggregates), constraints, 'UNDECIDED', None, enumerated)

    status = 'FEASIBLE' if witness is not None else 'INFEASIBLE'
    logger.info(f'{rs.label}: obstruction screen at genus {g} is {status} after {enumerated} nodes')
    return ObstructionReport(g, tuple(aggregates), constraints, status, witness, enumerated)


def representable(target: int, values: Sequence[int]) -> bool:
    """Whether target is a non-negative integer combination of values."""
    reachable = [False] * (target + 1)
    reachable[0] = True
    for amount in range(1, target + 1):
        reachable[amount] = any(v <= amount and reachable[amount - v] for v in values)
    return reachable[target]


# search

@dataclass
class _Candidate:
    index: int
    twist: WeylElement
    parameters: int
    degrees: Tuple[int, ...]
    direction: Tuple[int, ...] = field(default=())


def _candidates(rs: RootSystem, indices: Sequence[int], pool: Optional[Sequence[WeylElement]]) -> List[_Candidate]:
    group = weyl_group(rs)
    found = []
    for i in indices:
        if pool is None:
            twists = group.minimal_coset_reps(rs.fundamental_coweight(i))
        else:
            twists = sorted((group.with_reduced_word(w) for w in pool), key=lambda w: (len(w.word), w.word))
        seen = set()
        for twist in twists:
            image = group.act_on_coweight(twist, rs.fundamental_coweight(i))
            if image in seen:
                continue
            seen.add(image)
            entry = ModificationEntry(twist, i, 1)
            degrees = tuple(max(0, _pairing_after_twist(rs, entry, root)) for root in rs.roots)
            direction = canonical_direction(kernel_direction(rs, twist, i))
            found.append(_Candidate(i, twist, parameter_count(rs, i), degrees, direction))
    return found


def search(rs: RootSystem, genus: int, options: Optional[SearchOptions] = None) -> SearchResult:
    """
    Depth-first search for entry counts passing verify

    Candidates are (coweight index, twist) pairs in lexicographic order of
    index and twist (length, reduced word); twists giving the same coweight
    ν·λ_i∨ are merged. Counts are tried from large to small and the first
    scheme that passes is returned.
    """
    options = options or SearchOptions()
    g = int(genus)
    budget = options.budget or hecke_setting('SEARCH_BUDGET')
    indices = tuple(sorted(options.coweight_indices or range(1, rs.rank + 1)))
    for i in indices:
        rs.check_index(i)
    target = g * rs.dim_g
    scope = f'indices {list(indices)}, ' + ('coset representatives' if options.twist_pool is None
                                            else f'pool of {len(options.twist_pool)} twists')

    values = sorted({parameter_count(rs, i) for i in indices})
    if not representable(target, values):
        return SearchResult(None, Infeasible('coin', (
            f'{target} = g·dim G is not a non-negative combination of parameter counts {values}',), scope))

    screen = obstruction_analysis(rs, g, indices)
    if screen.status == 'INFEASIBLE':
        return SearchResult(None, Infeasible('aggregate', screen.constraints, scope))

    candidates = _candidates(rs, indices, options.twist_pool)
    exact = options.degree_mode == EXACT
    root_count = len(rs.roots)
    counts = [0] * len(candidates)
    degrees = [0] * root_count
    nodes = 0

    # suffix_degree[c][a]: largest per-point degree any candidate from c on gives root a
    suffix = [[0] * root_count for _ in range(len(candidates) + 1)]
    for c in range(len(candidates) - 1, -1, -1):
        suffix[c] = [max(a, b) for a, b in zip(suffix[c + 1], candidates[c].degrees)]
    cheapest = [min((cand.parameters for cand in candidates[c:]), default=0) for c in range(len(candidates) + 1)]

    def toral_ok() -> bool:
        lines: Dict[Tuple[int, ...], int] = {}
        for k, cand in zip(counts, candidates):
            if k:
                lines[cand.direction] = lines.get(cand.direction, 0) + k
        return _rank_of([d for d, n in lines.items() if n >= g]) == rs.rank

    def feasible_degrees(position: int, remaining: int) -> bool:
        most_points = remaining // cheapest[position] if cheapest[position] else 0
        for a in range(root_count):
            if exact and degrees[a] > g:
                return False
            if degrees[a] + most_points * suffix[position][a] < g:
                return False
        return True

    def descend(position: int, remaining: int) -> bool:
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise SearchBudgetExceeded(f'search for {rs.label} at genus {g} passed {budget} nodes')
        if remaining == 0:
            if exact and any(d != g for d in degrees):
                return False
            return all(d >= g for d in degrees) and toral_ok()
        if position == len(candidates) or not feasible_degrees(position, remaining):
            return False
        cand = candidates[position]
        for k in range(remaining // cand.parameters, -1, -1):
            counts[position] = k
            for a in range(root_count):
                degrees[a] += k * cand.degrees[a]
            if descend(position + 1, remaining - k * cand.parameters):
                return True
            for a in range(root_count):
                degrees[a] -= k * cand.degrees[a]
        counts[position] = 0
        return False

    if descend(0, target):
        entries = [ModificationEntry(c.twist, c.index, k) for c, k in zip(candidates, counts) if k]
        scheme = make_scheme(rs, g, entries, (f'found by search over {scope}',))
        logger.info(f'{rs.label}: search at genus {g} found a scheme after {nodes} nodes')
        return SearchResult(scheme, None, nodes)

    logger.info(f'{rs.label}: search at genus {g} exhausted {nodes} nodes')
    return SearchResult(None, Infeasible('exhausted', (
        f'no count vector over {len(candidates)} candidates meets the parameter, degree and toral conditions',), scope), nodes)
