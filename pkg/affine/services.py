"""
Affine Weyl Group Service

Affine roots Φ_af = Φ × Z, elements t(λ∨)·w of the (extended) affine Weyl
group, inversion sets in closed form, and the length function computed two
ways: by counting the inversion set and by exchange-property descent over the
Coxeter generators.

Generator labels: the finite reflections are 1..l; the affine reflection
s_{0,j} = s_{θ_j} t(θ_j∨) of component j is labeled 1 − j, so an irreducible
system has the single affine label 0.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Sequence, Tuple

from core.exceptions import BudgetExceeded, DimensionMismatch, IndexOutOfRange, NonIntegralCoweight
from rootsys.services import (
    Coweight,
    RootSystem,
    fundamental_group_class,
    pairing,
)
from weyl.services import WeylElement, weyl_group

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AffineRoot:
    root: Tuple[int, ...]
    level: int

    def __str__(self):
        return f'({list(self.root)}, {self.level})'


@dataclass(frozen=True)
class AffineWeylElement:
    """s = t(translation)·finite; extended when the translation leaves the coroot lattice."""

    translation: Coweight
    finite: WeylElement
    extended: bool = False

    @property
    def label(self) -> str:
        return self.finite.label


@dataclass(frozen=True)
class WordDescent:
    """s = g_{word[0]} ⋯ g_{word[-1]}·residual with residual of length zero."""

    length: int
    word: Tuple[int, ...]
    residual: AffineWeylElement


class AffineWeylGroup:
    """Affine Weyl group service for one root system"""

    def __init__(self, rs: RootSystem):
        self.rs = rs
        self.weyl = weyl_group(rs)

    def element(self, translation: Coweight, finite: WeylElement = None) -> AffineWeylElement:
        if finite is None:
            finite = self.weyl.identity()
        if translation.label != self.rs.label or finite.label != self.rs.label:
            raise DimensionMismatch(f'affine element parts must belong to {self.rs.label}')
        if not translation.is_integral():
            raise NonIntegralCoweight(f'translation {translation} is not in the coweight lattice')
        extended = not fundamental_group_class(self.rs, translation).is_identity
        return AffineWeylElement(translation, finite, extended)

    def identity(self) -> AffineWeylElement:
        return self.element(self.rs.zero_coweight())

    def translation(self, coweight: Coweight) -> AffineWeylElement:
        return self.element(coweight)

    def finite(self, w: WeylElement) -> AffineWeylElement:
        return self.element(self.rs.zero_coweight(), w)

    def compose(self, s: AffineWeylElement, u: AffineWeylElement) -> AffineWeylElement:
        """t(λ)w · t(μ)v = t(λ + w·μ)·wv."""
        shifted = self.weyl.act_on_coweight(s.finite, u.translation)
        return self.element(s.translation + shifted, s.finite * u.finite)

    def inverse(self, s: AffineWeylElement) -> AffineWeylElement:
        w_inv = s.finite.inverse()
        return self.element(-self.weyl.act_on_coweight(w_inv, s.translation), w_inv)

    # generators

    def affine_labels(self) -> List[int]:
        return [1 - j for j in range(1, len(self.rs.components) + 1)]

    def generator_labels(self) -> List[int]:
        return self.affine_labels() + list(range(1, self.rs.rank + 1))

    def check_label(self, label: int):
        if label not in self.generator_labels():
            raise IndexOutOfRange(f'generator label {label} not in {self.generator_labels()}')

    def generator(self, label: int) -> AffineWeylElement:
        self.check_label(label)
        if label >= 1:
            return self.finite(self.weyl.simple_reflection(label))
        theta = self.rs.highest_roots[-label]
        # s_θ t(θ∨) = t(s_θ θ∨) s_θ = t(−θ∨) s_θ
        return self.element(-self.rs.coroot(theta), self.weyl.reflection(theta))

    def simple_affine_root(self, label: int) -> AffineRoot:
        self.check_label(label)
        if label >= 1:
            return AffineRoot(self.rs.simple_root(label), 0)
        theta = self.rs.highest_roots[-label]
        return AffineRoot(tuple(-x for x in theta), 1)

    def from_word(self, word: Sequence[int]) -> AffineWeylElement:
        element = self.identity()
        for label in word:
            element = self.compose(element, self.generator(label))
        return element

    # action

    def is_positive(self, beta: AffineRoot) -> bool:
        return beta.level > 0 or (beta.level == 0 and tuple(beta.root) in self.weyl.positive)

    def act(self, s: AffineWeylElement, beta: AffineRoot) -> AffineRoot:
        if len(beta.root) != self.rs.ambient_dim or not self.rs.is_root(beta.root):
            raise DimensionMismatch(f'{beta} is not an affine root of {self.rs.label}')
        image = self.weyl.act(s.finite, beta.root)
        return AffineRoot(image, beta.level + int(pairing(self.rs, s.translation, image)))

    def affine_transform(self, s: AffineWeylElement, point: Coweight) -> Coweight:
        """Action on t_R: x ↦ w·x + λ∨."""
        return self.weyl.act_on_coweight(s.finite, point) + s.translation

    def half_space_contains(self, beta: AffineRoot, point: Coweight) -> bool:
        """x ∈ P⁺_{α,n} ⇔ <x, α> ≥ n."""
        return pairing(self.rs, point, beta.root) >= beta.level

    # inversion sets

    def _level_intervals(self, s: AffineWeylElement) -> List[Tuple[Tuple[int, ...], int, int]]:
        """
        For each α the levels n with (α, n) ∈ Φ_af^s form [lo, hi]

        With s⁻¹ = t(μ)u, s⁻¹(α, n) = (uα, n + <μ, uα>) is negative exactly when
        n ≤ −<μ, uα> − 1, or n = −<μ, uα> and uα < 0.
        """
        inverse = self.inverse(s)
        intervals = []
        for root in self.rs.roots:
            image = self.weyl.act(inverse.finite, root)
            shift = int(pairing(self.rs, inverse.translation, image))
            lo = 0 if root in self.weyl.positive else 1
            hi = -shift - 1 + (0 if image in self.weyl.positive else 1)
            intervals.append((root, lo, hi))
        return intervals

    def inversion_set(self, s: AffineWeylElement) -> List[AffineRoot]:
        found = []
        for root, lo, hi in self._level_intervals(s):
            found.extend(AffineRoot(root, n) for n in range(lo, hi + 1))
        found.sort(key=lambda beta: (beta.level, self.rs.roots.index(beta.root)))
        return found

    def in_inversion_set(self, s: AffineWeylElement, beta: AffineRoot) -> bool:
        if not self.is_positive(beta):
            return False
        return not self.is_positive(self.act(self.inverse(s), beta))

    def length(self, s: AffineWeylElement) -> int:
        return sum(max(0, hi - lo + 1) for _, lo, hi in self._level_intervals(s))

    def length_via_word(self, s: AffineWeylElement, budget: int) -> WordDescent:
        """Peel off generators g with α_g ∈ Φ_af^s (least label, affine first) until none applies."""
        word = []
        current = s
        labels = self.generator_labels()
        while True:
            label = next(
                (g for g in labels if self.in_inversion_set(current, self.simple_affine_root(g))),
                None,
            )
            if label is None:
                break
            if len(word) >= budget:
                logger.error(f'Word descent for {s} passed budget {budget}')
                raise BudgetExceeded(f'word descent exceeded budget {budget}')
            word.append(label)
            current = self.compose(self.generator(label), current)
        return WordDescent(len(word), tuple(word), current)


@lru_cache(maxsize=None)
def affine_weyl_group(rs: RootSystem) -> AffineWeylGroup:
    return AffineWeylGroup(rs)


def affine_act(rs: RootSystem, s: AffineWeylElement, beta: AffineRoot) -> AffineRoot:
    return affine_weyl_group(rs).act(s, beta)


def inversion_set(rs: RootSystem, s: AffineWeylElement) -> List[AffineRoot]:
    return affine_weyl_group(rs).inversion_set(s)


def length(rs: RootSystem, s: AffineWeylElement) -> int:
    return affine_weyl_group(rs).length(s)


def length_via_word(rs: RootSystem, s: AffineWeylElement, budget: int) -> WordDescent:
    return affine_weyl_group(rs).length_via_word(s, budget)
