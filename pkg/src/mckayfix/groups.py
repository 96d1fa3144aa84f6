"""Finite matrix groups from generators: closure, classes, centers, reflections."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from math import lcm
from typing import Sequence

from .poly import Mat2


class GroupTooLarge(RuntimeError):
    pass


@dataclass(frozen=True)
class ConjClasses:
    classes: tuple[tuple[int, ...], ...]
    representatives: tuple[int, ...]
    class_of: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.classes)

    def sizes(self) -> list[int]:
        return [len(c) for c in self.classes]


@dataclass
class FiniteMatrixGroup:
    """Explicit list of matrices; index 0 is the identity."""

    elements: list[Mat2]
    generators: list[int]
    name: str = ""
    _index: dict[Mat2, int] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        if not self._index:
            self._index = {g: i for i, g in enumerate(self.elements)}

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, g: Mat2) -> bool:
        return g in self._index

    def index(self, g: Mat2) -> int:
        return self._index[g]

    def generator_matrices(self) -> list[Mat2]:
        return [self.elements[i] for i in self.generators]

    @cached_property
    def inverse_index(self) -> list[int]:
        return [self._index[g.inv()] for g in self.elements]

    def element_order(self, i: int) -> int:
        g = self.elements[i]
        p, k = g, 1
        while not p.is_identity():
            p = p * g
            k += 1
        return k

    @cached_property
    def exponent(self) -> int:
        e = 1
        for c in self.conjugacy_classes().representatives:
            e = lcm(e, self.element_order(c))
        return e

    def power_index(self, i: int, k: int) -> int:
        g = self.elements[i]
        k %= self.element_order(i)
        p = self.elements[0]
        for _ in range(k):
            p = p * g
        return self._index[p]

    def conjugacy_classes(self) -> ConjClasses:
        return self._classes

    @cached_property
    def _classes(self) -> ConjClasses:
        gens = self.generator_matrices()
        pairs = [(s, s.inv()) for s in gens]
        class_of = [-1] * self.order
        classes: list[tuple[int, ...]] = []
        for start in range(self.order):
            if class_of[start] >= 0:
                continue
            cid = len(classes)
            members = [start]
            class_of[start] = cid
            queue = deque([start])
            while queue:
                g = self.elements[queue.popleft()]
                for s, si in pairs:
                    j = self._index[s * g * si]
                    if class_of[j] < 0:
                        class_of[j] = cid
                        members.append(j)
                        queue.append(j)
            classes.append(tuple(sorted(members)))
        reps = tuple(c[0] for c in classes)
        return ConjClasses(tuple(classes), reps, tuple(class_of))

    def center(self) -> list[int]:
        gens = self.generator_matrices()
        return [i for i, g in enumerate(self.elements) if all(g * s == s * g for s in gens)]

    def is_reflection(self, i: int) -> bool:
        return self.elements[i].minus_identity_rank() == 1

    def reflection_classes(self) -> int:
        cc = self.conjugacy_classes()
        return sum(1 for r in cc.representatives if self.is_reflection(r))

    def subgroup(self, indices: Sequence[int], name: str = "") -> FiniteMatrixGroup:
        """Subgroup on the given element indices (must contain the identity)."""
        idx = sorted(indices)
        if idx[0] != 0:
            raise ValueError("subgroup must contain the identity")
        elems = [self.elements[i] for i in idx]
        sub = FiniteMatrixGroup(elems, [], name)
        # generators: greedily add elements until they generate the subgroup
        gens: list[int] = []
        reached = {0}
        for j in range(1, len(elems)):
            if j not in reached:
                gens.append(j)
                reached = set(_closure_indices(elems, sub._index, gens))
        sub.generators = gens
        return sub


def _closure_indices(elems: list[Mat2], index: dict[Mat2, int], gens: list[int]) -> list[int]:
    seen = {0}
    queue = deque([0])
    while queue:
        g = elems[queue.popleft()]
        for s in gens:
            j = index[g * elems[s]]
            if j not in seen:
                seen.add(j)
                queue.append(j)
    return sorted(seen)


def closure(gens: Sequence[Mat2], cap: int = 10000, name: str = "") -> FiniteMatrixGroup:
    """Breadth-first closure of the generated group."""
    if not gens:
        raise ValueError("need at least one generator")
    for g in gens:
        if g.det().is_zero():
            raise ValueError("singular generator")
    one = Mat2.identity(gens[0].field)
    elems = [one]
    index = {one: 0}
    queue = deque([one])
    while queue:
        g = queue.popleft()
        for s in gens:
            h = g * s
            if h not in index:
                if len(elems) >= cap:
                    raise GroupTooLarge(f"closure exceeded {cap} elements")
                index[h] = len(elems)
                elems.append(h)
                queue.append(h)
    gen_idx = [index[g] for g in gens]
    return FiniteMatrixGroup(elems, gen_idx, name, index)


def det_one_subgroup(G: FiniteMatrixGroup, name: str = "") -> FiniteMatrixGroup:
    idx = [i for i, g in enumerate(G.elements) if g.det() == 1]
    return G.subgroup(idx, name or (G.name + "_SL2" if G.name else ""))


def conjugacy_classes(G: FiniteMatrixGroup) -> ConjClasses:
    return G.conjugacy_classes()


def reflection_classes(G: FiniteMatrixGroup) -> int:
    return G.reflection_classes()
