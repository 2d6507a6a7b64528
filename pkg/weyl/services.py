"""
Weyl Group Service

Finite Weyl group elements act on the ambient Euclidean space by signed
permutations in every supported realization (plain permutations for A_l,
±permutations for G2), so an element is identified by its one-line signed
permutation. Words in simple reflections are witnesses only.

A word [i_1, …, i_k] denotes s_{i_1} s_{i_2} ⋯ s_{i_k}; the rightmost
reflection acts first.
"""

import logging
import math
import re
from collections import Counter, deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from sympy import Matrix, Rational

from core.conf import hecke_setting
from core.exceptions import DimensionMismatch, HeckeError, NonDominant, NotInWeylGroup
from rootsys.services import Coweight, RootSystem, apply_signed_permutation

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WeylElement:
    """perm[i] = ±j means e_(i+1) ↦ ±e_j; word is a witness and not part of equality."""

    label: str
    perm: Tuple[int, ...]
    word: Tuple[int, ...] = field(default=(), compare=False)

    @property
    def action_matrix(self) -> Matrix:
        n = len(self.perm)
        matrix = Matrix.zeros(n, n)
        for i, target in enumerate(self.perm):
            matrix[abs(target) - 1, i] = 1 if target > 0 else -1
        return matrix

    def one_line(self) -> str:
        return '[' + ','.join(str(x) for x in self.perm) + ']'

    def __mul__(self, other: 'WeylElement') -> 'WeylElement':
        if self.label != other.label:
            raise DimensionMismatch(f'cannot compose elements of {self.label} and {other.label}')
        perm = tuple((1 if v > 0 else -1) * self.perm[abs(v) - 1] for v in other.perm)
        return WeylElement(self.label, perm, self.word + other.word)

    def inverse(self) -> 'WeylElement':
        inv = [0] * len(self.perm)
        for i, target in enumerate(self.perm):
            inv[abs(target) - 1] = (i + 1) if target > 0 else -(i + 1)
        return WeylElement(self.label, tuple(inv), tuple(reversed(self.word)))

    @property
    def is_identity(self) -> bool:
        return all(p == i + 1 for i, p in enumerate(self.perm))

    def __str__(self):
        return self.one_line()


def group_order(rs: RootSystem) -> int:
    l = rs.rank
    if rs.type_label == 'A':
        return math.factorial(l + 1)
    if rs.type_label in ('B', 'C'):
        return 2 ** l * math.factorial(l)
    if rs.type_label == 'D':
        return 2 ** (l - 1) * math.factorial(l)
    return 12


class WeylGroup:
    """Service object bound to one root system"""

    def __init__(self, rs: RootSystem):
        self.rs = rs
        self.positive = rs.positive_root_set
        self.roots = frozenset(rs.roots)

    # construction

    def identity(self) -> WeylElement:
        return WeylElement(self.rs.label, tuple(range(1, self.rs.ambient_dim + 1)))

    def simple_reflection(self, i: int) -> WeylElement:
        self.rs.check_index(i)
        return WeylElement(self.rs.label, self.rs.simple_reflections[i - 1], (i,))

    def from_word(self, word: Iterable[int]) -> WeylElement:
        element = self.identity()
        for i in word:
            element = element * self.simple_reflection(int(i))
        return element

    def from_signed_permutation(self, perm: Sequence[int]) -> WeylElement:
        perm = tuple(int(x) for x in perm)
        n = self.rs.ambient_dim
        if len(perm) != n or sorted(abs(x) for x in perm) != list(range(1, n + 1)):
            raise NotInWeylGroup(f'{list(perm)} is not a signed permutation of {n} letters')
        negatives = sum(1 for x in perm if x < 0)
        if self.rs.type_label == 'A' and negatives:
            raise NotInWeylGroup(f'{list(perm)}: type A elements are plain permutations')
        if self.rs.type_label == 'D' and negatives % 2:
            raise NotInWeylGroup(f'{list(perm)}: type D elements change an even number of signs')
        if any(apply_signed_permutation(perm, root) not in self.roots for root in self.rs.positive_roots):
            raise NotInWeylGroup(f'{list(perm)} does not permute the roots of {self.rs.label}')
        element = WeylElement(self.rs.label, perm)
        return WeylElement(self.rs.label, perm, tuple(self.reduced_word(element)))

    def parse(self, text: str) -> WeylElement:
        """Accept one-line notation '[2,-1,3]', cycle notation '(1 4)(2 3)', or 'e'."""
        raw = str(text).strip()
        if raw in ('', 'e', 'id', '()'):
            return self.identity()
        if raw.startswith('['):
            body = raw.strip('[]').replace(' ', '')
            try:
                values = [int(x) for x in body.split(',') if x]
            except ValueError as e:
                raise NotInWeylGroup(f"'{raw}' is not a signed permutation") from e
            return self.from_signed_permutation(values)
        if raw.startswith('('):
            return self.from_cycles(raw)
        raise NotInWeylGroup(f"cannot parse Weyl element '{raw}'")

    def from_cycles(self, text: str) -> WeylElement:
        n = self.rs.ambient_dim
        perm = list(range(1, n + 1))
        cycles = re.findall(r"\(([^()]*)\)", text)
        # rightmost cycle acts first
        for cycle in reversed(cycles):
            try:
                letters = [int(x) for x in cycle.replace(',', ' ').split()]
            except ValueError as e:
                raise NotInWeylGroup(f"cannot parse cycle '({cycle})'") from e
            if any(not 1 <= x <= n for x in letters):
                raise NotInWeylGroup(f"cycle '({cycle})' uses letters outside 1..{n}")
            mapping = {a: b for a, b in zip(letters, letters[1:] + letters[:1])}
            perm = [mapping.get(x, x) for x in perm]
        return self.from_signed_permutation(perm)

    def from_signs_and_permutation(self, signs: Sequence[int], sigma: Sequence[int]) -> WeylElement:
        """(a, σ) acting by e_i ↦ (−1)^{a_σ(i)} e_σ(i)."""
        n = self.rs.ambient_dim
        if len(signs) != n or len(sigma) != n:
            raise DimensionMismatch(f'sign vector and permutation need {n} entries')
        perm = [(-1 if signs[s - 1] % 2 else 1) * s for s in sigma]
        return self.from_signed_permutation(perm)

    def reflection(self, root: Sequence[int]) -> WeylElement:
        """s_β, obtained by conjugating a simple reflection: β = w·α_i ⇒ s_β = w s_i w⁻¹."""
        root = tuple(root)
        if root not in self.roots:
            raise HeckeError(f'{root} is not a root of {self.rs.label}')
        if root not in self.positive:
            root = tuple(-x for x in root)
        seen = {}
        queue = deque()
        for i, simple in enumerate(self.rs.simple_roots, start=1):
            if simple not in seen:
                seen[simple] = (self.identity(), i)
                queue.append(simple)
        while queue:
            current = queue.popleft()
            if current == root:
                w, i = seen[current]
                return w * self.simple_reflection(i) * w.inverse()
            w, i = seen[current]
            for j in range(1, self.rs.rank + 1):
                image = self.act(self.simple_reflection(j), current)
                if image not in seen:
                    seen[image] = (self.simple_reflection(j) * w, i)
                    queue.append(image)
        raise HeckeError(f'{root} was not reached from the simple roots')

    # actions

    def act(self, w: WeylElement, x: Union[Sequence[int], Coweight]):
        if w.label != self.rs.label:
            raise DimensionMismatch(f'element of {w.label} acting on {self.rs.label}')
        if isinstance(x, Coweight):
            return self.act_on_coweight(w, x)
        if len(x) != self.rs.ambient_dim:
            raise DimensionMismatch(f'{self.rs.label} vectors have {self.rs.ambient_dim} coordinates')
        return apply_signed_permutation(w.perm, tuple(x))

    def act_on_coweight(self, w: WeylElement, coweight: Coweight) -> Coweight:
        """<w·λ∨, α_j> = <λ∨, w⁻¹ α_j>."""
        if coweight.label != self.rs.label:
            raise DimensionMismatch(f'coweight of {coweight.label} acted on by {self.rs.label}')
        inverse = w.inverse()
        coeffs = []
        for simple in self.rs.simple_roots:
            coords = self.rs.root_coordinates(apply_signed_permutation(inverse.perm, simple))
            coeffs.append(sum((c * x for c, x in zip(coweight.coeffs, coords)), Rational(0)))
        return self.rs.coweight(coeffs)

    def is_negative_image(self, w: WeylElement, root: Sequence[int]) -> bool:
        return apply_signed_permutation(w.perm, root) not in self.positive

    # length and words

    def length(self, w: WeylElement) -> int:
        return sum(1 for root in self.rs.positive_roots if self.is_negative_image(w, root))

    def right_descents(self, w: WeylElement) -> List[int]:
        return [i for i, simple in enumerate(self.rs.simple_roots, start=1) if self.is_negative_image(w, simple)]

    def reduced_word(self, w: WeylElement) -> List[int]:
        """Strip the least right descent until the identity is reached."""
        suffix = []
        current = WeylElement(w.label, w.perm)
        while True:
            descents = self.right_descents(current)
            if not descents:
                break
            i = descents[0]
            suffix.append(i)
            current = current * self.simple_reflection(i)
        return list(reversed(suffix))

    def with_reduced_word(self, w: WeylElement) -> WeylElement:
        return WeylElement(w.label, w.perm, tuple(self.reduced_word(w)))

    # enumeration and orbits

    def elements(self) -> List[WeylElement]:
        """All of W, breadth first over simple reflections (so words are reduced)."""
        order = group_order(self.rs)
        cap = hecke_setting('WEYL_ENUMERATION_CAP')
        if order > cap:
            raise HeckeError(f'|W({self.rs.label})| = {order} exceeds the enumeration cap {cap}')
        start = self.identity()
        seen = {start.perm: start}
        queue = deque([start])
        while queue:
            w = queue.popleft()
            for i in range(1, self.rs.rank + 1):
                nxt = w * self.simple_reflection(i)
                if nxt.perm not in seen:
                    seen[nxt.perm] = nxt
                    queue.append(nxt)
        logger.info(f'Enumerated W({self.rs.label}): {len(seen)} elements')
        return list(seen.values())

    def generated_subgroup(self, generators: Sequence[WeylElement]) -> List[WeylElement]:
        start = self.identity()
        seen = {start.perm: start}
        queue = deque([start])
        while queue:
            w = queue.popleft()
            for g in generators:
                nxt = w * g
                if nxt.perm not in seen:
                    seen[nxt.perm] = nxt
                    queue.append(nxt)
        return list(seen.values())

    def orbit(self, elements: Sequence[WeylElement], x) -> List:
        """Images of x under each listed element, with multiplicity and in list order."""
        return [self.act(w, x) for w in elements]

    def orbit_multiplicities(self, elements: Sequence[WeylElement], vectors: Iterable) -> Counter:
        counts = Counter()
        vectors = list(vectors)
        for w in elements:
            for x in vectors:
                counts[self.act(w, x)] += 1
        return counts

    def coverage(self, elements: Sequence[WeylElement], index: int) -> Counter:
        """Σ_w max(0, <λ_i∨, w⁻¹α>) for every root α: how often the twisted cells reach α."""
        self.rs.check_index(index)
        counts = Counter({root: 0 for root in self.rs.roots})
        for w in elements:
            for root in self.rs.roots:
                weight = self.rs.root_coordinates(root)[index - 1]
                if weight > 0:
                    counts[self.act(w, root)] += int(weight)
        return counts

    def orbit_traversal(self, coweight: Coweight) -> Dict[Coweight, WeylElement]:
        """W·λ∨ without materializing W; each point carries an element reaching it."""
        start = self.identity()
        seen = {coweight: start}
        queue = deque([coweight])
        while queue:
            mu = queue.popleft()
            for i in range(1, self.rs.rank + 1):
                image = self.act_on_coweight(self.simple_reflection(i), mu)
                if image not in seen:
                    seen[image] = self.simple_reflection(i) * seen[mu]
                    queue.append(image)
        return seen

    def stabilizer(self, coweight: Coweight) -> List[WeylElement]:
        return [w for w in self.elements() if self.act_on_coweight(w, coweight) == coweight]

    def minimal_coset_reps(self, coweight: Coweight) -> List[WeylElement]:
        """
        Minimal length representatives of W/W_λ for dominant λ∨

        Breadth first from λ∨ along s_i with <μ, α_i> > 0, which raises the
        length of the minimal representative by one at each step.
        """
        if not coweight.is_dominant():
            raise NonDominant(f'{coweight} is not dominant')
        reps = {coweight: self.identity()}
        queue = deque([coweight])
        while queue:
            mu = queue.popleft()
            for i in range(1, self.rs.rank + 1):
                if mu.coeffs[i - 1] <= 0:
                    continue
                image = self.act_on_coweight(self.simple_reflection(i), mu)
                if image not in reps:
                    reps[image] = self.simple_reflection(i) * reps[mu]
                    queue.append(image)
        ordered = [self.with_reduced_word(w) for w in reps.values()]
        ordered.sort(key=lambda w: (len(w.word), w.word))
        return ordered

    def longest_element_involution(self) -> Tuple[WeylElement, Tuple[int, ...]]:
        """w0 and ω with w0(α_i) = −α_ω(i); ω is returned as (ω(1), …, ω(l))."""
        w = self.identity()
        while True:
            ascent = next(
                (i for i, simple in enumerate(self.rs.simple_roots, start=1) if not self.is_negative_image(w, simple)),
                None,
            )
            if ascent is None:
                break
            w = w * self.simple_reflection(ascent)
        omega = []
        for simple in self.rs.simple_roots:
            image = tuple(-x for x in self.act(w, simple))
            omega.append(self.rs.simple_roots.index(image) + 1)
        return self.with_reduced_word(w), tuple(omega)


@lru_cache(maxsize=None)
def weyl_group(rs: RootSystem) -> WeylGroup:
    return WeylGroup(rs)


def act(rs: RootSystem, w: WeylElement, x):
    return weyl_group(rs).act(w, x)


def reduced_word(rs: RootSystem, w: WeylElement) -> List[int]:
    return weyl_group(rs).reduced_word(w)


def orbit(rs: RootSystem, elements: Sequence[WeylElement], x) -> List:
    return weyl_group(rs).orbit(elements, x)


def minimal_coset_reps(rs: RootSystem, coweight: Coweight) -> List[WeylElement]:
    return weyl_group(rs).minimal_coset_reps(coweight)


def longest_element_involution(rs: RootSystem) -> Tuple[WeylElement, Tuple[int, ...]]:
    return weyl_group(rs).longest_element_involution()
